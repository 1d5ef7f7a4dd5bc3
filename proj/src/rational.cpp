#include "probe/rational.hpp"

#include <boost/multiprecision/integer.hpp>
#include <sstream>
#include <stdexcept>

#include "probe/errors.hpp"

namespace probe {

namespace {

BigInt ipow(const BigInt& base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

IntPolynomial factor_power(long long k, int m) {
  IntPolynomial r(1);
  const IntPolynomial lin = IntPolynomial::linear(k);
  for (int i = 0; i < m; ++i) r = r * lin;
  return r;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(long long constant) {
  if (constant != 0) coeffs_.push_back(BigInt(constant));
}

IntPolynomial IntPolynomial::monomial(int degree, BigInt coeff) {
  std::vector<BigInt> c(static_cast<std::size_t>(degree) + 1, BigInt(0));
  c.back() = std::move(coeff);
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::linear(long long k) { return IntPolynomial({BigInt(-k), BigInt(1)}); }

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPolynomial::content() const {
  BigInt g = 0;
  for (const auto& c : coeffs_) g = boost::multiprecision::gcd(g, c);
  return g < 0 ? BigInt(-g) : g;
}

BigInt IntPolynomial::evaluate(const BigInt& n) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * n + *it;
  return acc;
}

IntPolynomial IntPolynomial::divide_linear(long long k) const {
  if (coeffs_.empty()) return {};
  // Synthetic division from the leading coefficient down.
  std::vector<BigInt> q(coeffs_.size() - 1);
  BigInt carry = 0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) {
    carry = coeffs_[i] + carry * k;
    q[i - 1] = carry;
  }
  const BigInt remainder = coeffs_[0] + carry * k;
  if (remainder != 0) throw std::domain_error("polynomial does not vanish at the divided root");
  return IntPolynomial(std::move(q));
}

IntPolynomial IntPolynomial::divide_exact(const BigInt& d) const {
  std::vector<BigInt> q(coeffs_);
  for (auto& c : q) {
    if (c % d != 0) throw std::domain_error("coefficient not divisible");
    c /= d;
  }
  return IntPolynomial(std::move(q));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()), BigInt(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator-() const {
  std::vector<BigInt> c(coeffs_);
  for (auto& x : c) x = -x;
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> c(a.coeffs_.size() + b.coeffs_.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPolynomial(std::move(c));
}

std::string IntPolynomial::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    const bool neg = c < 0;
    const BigInt mag = neg ? BigInt(-c) : c;
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    if (mag != 1 || i == 0) out << mag;
    if (i > 0) {
      out << var;
      if (i > 1) out << "^" << i;
    }
    first = false;
  }
  return out.str();
}

RationalFunctionOfN::RationalFunctionOfN(IntPolynomial numerator, BigInt constant,
                                         std::map<long long, int> factors)
    : num_(std::move(numerator)), den_(std::move(constant)), factors_(std::move(factors)) {
  if (den_ == 0) throw std::domain_error("zero denominator");
  if (den_ < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  for (auto it = factors_.begin(); it != factors_.end();) {
    if (it->second < 0) throw std::domain_error("negative factor multiplicity");
    it = it->second == 0 ? factors_.erase(it) : std::next(it);
  }
}

RationalFunctionOfN::RationalFunctionOfN(long long constant) : num_(constant) {}

RationalFunctionOfN RationalFunctionOfN::pole(long long k, int multiplicity) {
  return RationalFunctionOfN(IntPolynomial(1), 1, {{k, multiplicity}});
}

IntPolynomial RationalFunctionOfN::denominator() const {
  IntPolynomial d(std::vector<BigInt>{den_});
  for (const auto& [k, m] : factors_) d = d * factor_power(k, m);
  return d;
}

RationalFunctionOfN RationalFunctionOfN::reduced() const {
  if (num_.is_zero()) return RationalFunctionOfN(0);
  IntPolynomial num = num_;
  std::map<long long, int> factors;
  for (const auto& [k, m] : factors_) {
    int left = m;
    while (left > 0 && num.evaluate(BigInt(k)) == 0) {
      num = num.divide_linear(k);
      --left;
    }
    if (left > 0) factors[k] = left;
  }
  const BigInt g = boost::multiprecision::gcd(num.content(), den_);
  return RationalFunctionOfN(num.divide_exact(g), den_ / g, std::move(factors));
}

std::set<long long> RationalFunctionOfN::poles() const {
  std::set<long long> out;
  for (const auto& [k, m] : reduced().factors_) out.insert(k);
  return out;
}

bool RationalFunctionOfN::has_pole_at(long long n) const { return poles().count(n) > 0; }

BigRational RationalFunctionOfN::evaluate(long long n) const {
  const RationalFunctionOfN r = reduced();
  BigInt den = r.den_;
  for (const auto& [k, m] : r.factors_) {
    if (k == n) {
      std::ostringstream msg;
      msg << "rational function " << r.to_string() << " has a pole at N = " << n;
      throw PoleEvaluation(msg.str());
    }
    den *= ipow(BigInt(n - k), m);
  }
  BigInt num = r.num_.evaluate(BigInt(n));
  if (den < 0) {  // boost::rational rejects negative cpp_int denominators
    den = -den;
    num = -num;
  }
  return BigRational(num, den);
}

double RationalFunctionOfN::evaluate_double(long long n) const {
  return static_cast<double>(evaluate(n));
}

RationalFunctionOfN operator*(const RationalFunctionOfN& a, const RationalFunctionOfN& b) {
  auto factors = a.factors_;
  for (const auto& [k, m] : b.factors_) factors[k] += m;
  return RationalFunctionOfN(a.num_ * b.num_, a.den_ * b.den_, std::move(factors)).reduced();
}

RationalFunctionOfN operator+(const RationalFunctionOfN& a, const RationalFunctionOfN& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::map<long long, int> factors = a.factors_;
  for (const auto& [k, m] : b.factors_) factors[k] = std::max(factors[k], m);
  const BigInt den = lcm(a.den_, b.den_);
  auto lift = [&](const RationalFunctionOfN& x) {
    IntPolynomial num = x.num_ * IntPolynomial(std::vector<BigInt>{den / x.den_});
    for (const auto& [k, m] : factors) {
      const auto it = x.factors_.find(k);
      const int have = it == x.factors_.end() ? 0 : it->second;
      num = num * factor_power(k, m - have);
    }
    return num;
  };
  return RationalFunctionOfN(lift(a) + lift(b), den, factors).reduced();
}

RationalFunctionOfN RationalFunctionOfN::operator-() const {
  return RationalFunctionOfN(-num_, den_, factors_);
}

RationalFunctionOfN operator-(const RationalFunctionOfN& a, const RationalFunctionOfN& b) {
  return a + (-b);
}

bool operator==(const RationalFunctionOfN& a, const RationalFunctionOfN& b) {
  return (a - b).is_zero();
}

std::string RationalFunctionOfN::to_string() const {
  std::ostringstream out;
  out << "(" << num_.to_string() << ")";
  if (den_ == 1 && factors_.empty()) return out.str();
  out << "/(";
  bool first = true;
  if (den_ != 1) {
    out << den_;
    first = false;
  }
  for (const auto& [k, m] : factors_) {
    if (!first) out << "*";
    first = false;
    if (k == 0)
      out << "N";
    else
      out << "(N" << (k > 0 ? "-" : "+") << (k > 0 ? k : -k) << ")";
    if (m > 1) out << "^" << m;
  }
  out << ")";
  return out.str();
}

}  // namespace probe
