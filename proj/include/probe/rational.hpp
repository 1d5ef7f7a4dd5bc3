#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace probe {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Dense integer polynomial in N, coefficients from the constant term up.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(long long constant);  // NOLINT: integers promote

  static IntPolynomial monomial(int degree, BigInt coeff = 1);
  /// N - k
  static IntPolynomial linear(long long k);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  BigInt content() const;

  BigInt evaluate(const BigInt& n) const;
  /// Exact division by (N - k); throws std::domain_error if k is not a root.
  IntPolynomial divide_linear(long long k) const;
  IntPolynomial divide_exact(const BigInt& d) const;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  IntPolynomial operator-() const;
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string(char var = 'N') const;

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

/// numerator(N) / (c * prod_k (N - k)^m_k) with exact integer arithmetic.
///
/// Denominators are kept factored over integer roots, which is all the
/// unitary-group coefficients need, so cancellation is a root test followed
/// by synthetic division.
class RationalFunctionOfN {
 public:
  RationalFunctionOfN() = default;
  RationalFunctionOfN(IntPolynomial numerator, BigInt constant = 1,
                      std::map<long long, int> factors = {});
  RationalFunctionOfN(long long constant);  // NOLINT

  /// 1 / (N - k)^m
  static RationalFunctionOfN pole(long long k, int multiplicity = 1);

  const IntPolynomial& numerator() const noexcept { return num_; }
  IntPolynomial denominator() const;
  const std::map<long long, int>& denominator_factors() const noexcept { return factors_; }
  const BigInt& denominator_constant() const noexcept { return den_; }

  /// Cancels every common (N - k) factor and integer content.
  RationalFunctionOfN reduced() const;
  /// Integer points where the reduced form has a pole.
  std::set<long long> poles() const;
  bool has_pole_at(long long n) const;
  bool is_zero() const noexcept { return num_.is_zero(); }

  /// Exact value of the reduced form; throws PoleEvaluation at a pole.
  BigRational evaluate(long long n) const;
  double evaluate_double(long long n) const;

  friend RationalFunctionOfN operator+(const RationalFunctionOfN& a, const RationalFunctionOfN& b);
  friend RationalFunctionOfN operator-(const RationalFunctionOfN& a, const RationalFunctionOfN& b);
  friend RationalFunctionOfN operator*(const RationalFunctionOfN& a, const RationalFunctionOfN& b);
  RationalFunctionOfN operator-() const;
  RationalFunctionOfN& operator+=(const RationalFunctionOfN& b) { return *this = *this + b; }

  /// Equality as functions (cross multiplication).
  friend bool operator==(const RationalFunctionOfN& a, const RationalFunctionOfN& b);

  std::string to_string() const;

 private:
  IntPolynomial num_;
  BigInt den_ = 1;
  std::map<long long, int> factors_;
};

}  // namespace probe
