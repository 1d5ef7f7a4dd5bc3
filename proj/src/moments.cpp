#include "probe/moments.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "probe/sampling.hpp"

namespace probe {

namespace {

using LongComplex = std::complex<long double>;
using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct LongLetters {
  long double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0, g = 0;
  double imaginary_residue = 0;
};

LongMatrix partial_trace_long(const LongMatrix& m, Eigen::Index na, Eigen::Index nb, Subsystem keep) {
  if (keep == Subsystem::A) {
    LongMatrix out = LongMatrix::Zero(na, na);
    for (Eigen::Index a = 0; a < na; ++a)
      for (Eigen::Index c = 0; c < na; ++c)
        for (Eigen::Index b = 0; b < nb; ++b) out(a, c) += m(a * nb + b, c * nb + b);
    return out;
  }
  LongMatrix out = LongMatrix::Zero(nb, nb);
  for (Eigen::Index a = 0; a < na; ++a) out += m.block(a * nb, a * nb, nb, nb);
  return out;
}

LongMatrix kron_long(const LongMatrix& x, const LongMatrix& y) {
  LongMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

// The letters are evaluated in extended precision: the variance is a small
// difference of O(1) terms and its square root would otherwise carry
// sqrt(eps) ~ 1e-8 noise at zero-variance states.
LongLetters long_letters(const DensityMatrix& rho) {
  const auto na = static_cast<Eigen::Index>(rho.dimA());
  const auto nb = static_cast<Eigen::Index>(rho.dimB());
  // Renormalize in extended precision: a trace off by O(eps) shifts the
  // second moment linearly and would leave ~1e-16 of spurious variance.
  LongMatrix m = rho.matrix().cast<LongComplex>();
  m /= m.trace().real();
  Eigen::SelfAdjointEigenSolver<LongMatrix> es(m);
  LongVector values = es.eigenvalues();
  // The entries are only double-accurate, so eigenvalues below the double
  // noise floor are zeros of the true state, not small positive weights.
  const long double floor = static_cast<long double>(values.size()) *
                            std::numeric_limits<double>::epsilon() * values.maxCoeff();
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) <= floor) values(i) = 0;
  const LongMatrix s = detail::psd_sqrt_from_eig<long double>(values, es.eigenvectors());

  const LongMatrix trA_s = partial_trace_long(s, na, nb, Subsystem::B);  // acts on B
  const LongMatrix rhoA = partial_trace_long(m, na, nb, Subsystem::A);

  LongLetters out;
  auto take = [&out](LongComplex z) {
    out.imaginary_residue = std::max(out.imaginary_residue, static_cast<double>(std::abs(z.imag())));
    return z.real();
  };
  out.a = take((trA_s * trA_s).trace());
  out.b = take((rhoA * rhoA).trace());
  out.c = out.a * out.a;

  // X[(a, e), (c, f)] = sum_{b, d} s[(a, b), (c, d)] s[(e, d), (f, b)]
  LongMatrix x = LongMatrix::Zero(na * na, na * na);
  for (Eigen::Index a = 0; a < na; ++a)
    for (Eigen::Index e = 0; e < na; ++e)
      for (Eigen::Index c = 0; c < na; ++c)
        for (Eigen::Index f = 0; f < na; ++f) {
          LongComplex acc = 0;
          for (Eigen::Index b = 0; b < nb; ++b)
            for (Eigen::Index d = 0; d < nb; ++d) acc += s(a * nb + b, c * nb + d) * s(e * nb + d, f * nb + b);
          x(a * na + e, c * na + f) = acc;
        }
  const LongMatrix x2 = x * x;
  out.d = take(x2.trace());
  LongComplex swapped = 0;
  for (Eigen::Index p = 0; p < na; ++p)
    for (Eigen::Index q = 0; q < na; ++q) swapped += x2(p * na + q, q * na + p);
  out.g = take(swapped);

  out.e = take((s * kron_long(rhoA, trA_s)).trace());
  const LongMatrix y =
      partial_trace_long(s * kron_long(LongMatrix::Identity(na, na), trA_s), na, nb, Subsystem::A);
  out.f = take((y * y).trace());
  return out;
}

long double letter_long(Letter l, const LongLetters& v) {
  switch (l) {
    case Letter::one: return 1;
    case Letter::a: return v.a;
    case Letter::b: return v.b;
    case Letter::c: return v.c;
    case Letter::d: return v.d;
    case Letter::e: return v.e;
    case Letter::f: return v.f;
    case Letter::g: return v.g;
  }
  return 0;
}

struct TableRow {
  const char* tau;
  Letter g2;
  bool g3_scaled;  // G3 entry carries a factor N_A
  Letter g3;
};

// G2(tau) and G3(tau) with
//   G(tau) = sum_{i1..i4} L(E_{i_tau(1) i_1}, ..., E_{i_tau(4) i_4}),
//   L2(H1..H4) = Tr[s H1 s H2] Tr[s H3 s H4],  L3(H1..H4) = Tr[s H1 H2 s] Tr[s H3 s H4].
constexpr TableRow kTable[24] = {
    {"1234", Letter::one, false, Letter::one}, {"1243", Letter::a, false, Letter::a},
    {"1324", Letter::b, false, Letter::b},     {"1342", Letter::e, false, Letter::e},
    {"1423", Letter::e, false, Letter::e},     {"1432", Letter::b, false, Letter::b},
    {"2134", Letter::a, true, Letter::one},    {"2143", Letter::c, true, Letter::a},
    {"2314", Letter::e, false, Letter::one},   {"2341", Letter::f, false, Letter::a},
    {"2413", Letter::f, false, Letter::a},     {"2431", Letter::e, false, Letter::one},
    {"3124", Letter::e, true, Letter::b},      {"3142", Letter::f, true, Letter::e},
    {"3214", Letter::b, false, Letter::b},     {"3241", Letter::e, false, Letter::e},
    {"3412", Letter::d, false, Letter::e},     {"3421", Letter::g, false, Letter::b},
    {"4123", Letter::f, true, Letter::e},      {"4132", Letter::e, true, Letter::b},
    {"4213", Letter::e, false, Letter::e},     {"4231", Letter::b, false, Letter::b},
    {"4312", Letter::g, false, Letter::b},     {"4321", Letter::d, false, Letter::e},
};

const TableRow& row_for(const Perm4& tau) {
  const auto& all = Perm4::all();
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] == tau) return kTable[i];
  throw std::logic_error("permutation not in table");
}

std::size_t index_of(Letter l) { return static_cast<std::size_t>(l); }

SecondMomentTable build_table() {
  const RationalFunctionOfN n_poly(IntPolynomial::monomial(1));
  const RationalFunctionOfN half(IntPolynomial(1), 2);
  SecondMomentTable t;
  for (std::size_t i = 0; i < kLetterCount; ++i) t.t2sq[i] = t.delta[i] = RationalFunctionOfN(0);
  for (const Perm4& tau : Perm4::all()) {
    // a(tau) = sum_sigma Wg(sigma) F(tau sigma), split into t2sq and delta parts.
    RationalFunctionOfN sq(0);
    RationalFunctionOfN dl(0);
    for (const Perm4& sigma : Perm4::all()) {
      const CycleClass c = compose(tau, sigma).cycle_class();
      if (c == CycleClass::four) {
        sq += half * weingarten4(sigma);
        dl += weingarten4(sigma);
      } else if (c == CycleClass::two_two) {
        sq += weingarten4(sigma);
      }
    }
    const TableRow& row = row_for(tau);
    t.t2sq[index_of(row.g2)] += sq;
    t.delta[index_of(row.g2)] += dl;
    const RationalFunctionOfN g3_weight = row.g3_scaled ? RationalFunctionOfN(-2) * n_poly
                                                        : RationalFunctionOfN(-2);
    t.t2sq[index_of(row.g3)] += g3_weight * sq;
    t.delta[index_of(row.g3)] += g3_weight * dl;
  }
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    t.t2sq[i] = t.t2sq[i].reduced();
    t.delta[i] = t.delta[i].reduced();
  }
  return t;
}

struct NumericCoefficients {
  std::array<long double, kLetterCount> t2sq{};
  std::array<long double, kLetterCount> delta{};
  bool has_delta = false;
};

long double to_long(const BigRational& r) { return r.convert_to<long double>(); }

const NumericCoefficients& coefficients_for(long long n) {
  static std::mutex mutex;
  static std::map<long long, NumericCoefficients> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const auto& table = second_moment_table();
  NumericCoefficients out;
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    if (table.t2sq[i].has_pole_at(n)) {
      std::ostringstream msg;
      msg << "second-moment coefficient " << table.t2sq[i].to_string() << " has a pole at N = " << n;
      throw std::logic_error(msg.str());
    }
    out.t2sq[i] = to_long(table.t2sq[i].evaluate(n));
  }
  out.has_delta = n >= 4;
  if (out.has_delta)
    for (std::size_t i = 0; i < kLetterCount; ++i) out.delta[i] = to_long(table.delta[i].evaluate(n));
  return cache.emplace(n, out).first->second;
}

struct MomentPair {
  long double mean;
  long double second;
  long double scale;
};

MomentPair closed_form_moments(const DensityMatrix& rho, const Spectrum& spec) {
  if (spec.size() != rho.dimA()) throw DimensionMismatch("spectrum length differs from N_A");
  const long long n = static_cast<long long>(rho.dimA());
  if (n == 1) return {0, 0, 1};
  const auto lambda = spec.traceless();
  long double t2 = 0;
  long double t4 = 0;
  for (double v : lambda) {
    const long double x = v;
    t2 += x * x;
    t4 += x * x * x * x;
  }
  const long double t2sq = t2 * t2;
  const long double delta = n <= 3 ? 0.0L : t4 - t2sq / 2;
  const LongLetters L = long_letters(rho);
  const long double nd = static_cast<long double>(n);

  const long double first = ((nd * t2sq - t4) + (nd * t4 - t2sq) * L.b) / (nd * (nd * nd - 1));
  const auto& coeffs = coefficients_for(n);
  long double sum = 0;
  for (std::size_t i = 0; i < kLetterCount; ++i) {
    long double c = coeffs.t2sq[i] * t2sq;
    if (coeffs.has_delta) c += coeffs.delta[i] * delta;
    sum += c * letter_long(static_cast<Letter>(i), L);
  }
  const long double mean = t2 / (nd * nd - 1) * (nd - L.a);
  return {mean, first + sum, t2sq};
}

}  // namespace

ComplexMatrix twirl2(const ComplexMatrix& theta, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n * n);
  if (theta.rows() != d || theta.cols() != d) {
    std::ostringstream msg;
    msg << "twirl over U(" << n << ") expects a " << d << "x" << d << " operator";
    throw DimensionMismatch(msg.str());
  }
  if (n == 1) return theta;
  const ComplexMatrix s = swap_operator(n).matrix;
  const Complex tr = theta.trace();
  const Complex trs = (s * theta).trace();
  const double nd = static_cast<double>(n);
  const double norm = nd * (nd * nd - 1.0);
  return (nd * tr - trs) / norm * ComplexMatrix::Identity(d, d) + (nd * trs - tr) / norm * s;
}

RationalFunctionOfN weingarten4(CycleClass c) {
  // N^2 (N - 1)(N + 1)(N - 2)(N + 2)(N - 3)(N + 3)
  const std::map<long long, int> den = {{0, 2}, {1, 1}, {-1, 1}, {2, 1}, {-2, 1}, {3, 1}, {-3, 1}};
  std::vector<BigInt> num;
  switch (c) {
    case CycleClass::identity: num = {6, 0, -8, 0, 1}; break;   // N^4 - 8N^2 + 6
    case CycleClass::one_one_two: num = {0, 4, 0, -1}; break;   // -N (N^2 - 4)
    case CycleClass::two_two: num = {6, 0, 1}; break;           // N^2 + 6
    case CycleClass::one_three: num = {-3, 0, 2}; break;        // 2N^2 - 3
    case CycleClass::four: num = {0, -5}; break;                // -5N
  }
  return RationalFunctionOfN(IntPolynomial(std::move(num)), 1, den);
}

BigRational weingarten4_value(const Perm4& sigma, long long n) {
  return weingarten4(sigma).evaluate(n);
}

BigRational unitary_moment4(const std::array<int, 4>& i, const std::array<int, 4>& j,
                            const std::array<int, 4>& k, const std::array<int, 4>& l, long long n) {
  BigRational total = 0;
  for (const Perm4& sigma : Perm4::all()) {
    bool rows = true;
    for (int a = 1; a <= 4 && rows; ++a) rows = i[a - 1] == k[sigma(a) - 1];
    if (!rows) continue;
    for (const Perm4& tau : Perm4::all()) {
      bool cols = true;
      for (int a = 1; a <= 4 && cols; ++a) cols = j[a - 1] == l[tau(a) - 1];
      if (cols) total += weingarten4_value(compose(sigma, tau.inverse()), n);
    }
  }
  return total;
}

double f_lambda(CycleClass c, const Spectrum& spec) {
  double t2 = 0.0;
  double t4 = 0.0;
  for (double v : spec.traceless()) {
    t2 += v * v;
    t4 += v * v * v * v;
  }
  if (c == CycleClass::four) return t4;
  if (c == CycleClass::two_two) return t2 * t2;
  return 0.0;
}

LetterValues letters(const DensityMatrix& rho) {
  const LongLetters l = long_letters(rho);
  LetterValues v;
  v.a = static_cast<double>(l.a);
  v.b = static_cast<double>(l.b);
  v.c = static_cast<double>(l.c);
  v.d = static_cast<double>(l.d);
  v.e = static_cast<double>(l.e);
  v.f = static_cast<double>(l.f);
  v.g = static_cast<double>(l.g);
  v.dimA = rho.dimA();
  v.imaginary_residue = l.imaginary_residue;
  return v;
}

double letter_value(Letter l, const LetterValues& v) {
  switch (l) {
    case Letter::one: return 1.0;
    case Letter::a: return v.a;
    case Letter::b: return v.b;
    case Letter::c: return v.c;
    case Letter::d: return v.d;
    case Letter::e: return v.e;
    case Letter::f: return v.f;
    case Letter::g: return v.g;
  }
  return 0.0;
}

Letter g2_letter(const Perm4& tau) { return row_for(tau).g2; }

std::pair<Letter, bool> g3_term(const Perm4& tau) {
  const auto& r = row_for(tau);
  return {r.g3, r.g3_scaled};
}

double g2_value(const Perm4& tau, const LetterValues& v) { return letter_value(g2_letter(tau), v); }

double g3_value(const Perm4& tau, const LetterValues& v) {
  const auto [letter, scaled] = g3_term(tau);
  return (scaled ? static_cast<double>(v.dimA) : 1.0) * letter_value(letter, v);
}

const SecondMomentTable& second_moment_table() {
  static const SecondMomentTable table = build_table();
  return table;
}

bool second_moment_pole_free(long long n) {
  for (const auto& c : second_moment_table().t2sq)
    if (c.has_pole_at(n)) return false;
  return true;
}

double second_moment(const DensityMatrix& rho, const Spectrum& spec) {
  return static_cast<double>(closed_form_moments(rho, spec).second);
}

double variance(const DensityMatrix& rho, const Spectrum& spec) {
  const auto m = closed_form_moments(rho, spec);
  const long double v = m.second - m.mean * m.mean;
  if (v >= 0) return static_cast<double>(v);
  if (v >= -1e-9L * std::max(1.0L, m.scale)) return 0.0;
  std::ostringstream msg;
  msg << "variance evaluated to " << static_cast<double>(v);
  throw Error(msg.str());
}

VarianceEstimate variance_monte_carlo(const DensityMatrix& rho, const Spectrum& spec,
                                      std::size_t samples, const RandomSeed& seed) {
  if (samples < 2) throw InvalidParameter("samples", "need at least 2");
  if (spec.size() != rho.dimA()) throw DimensionMismatch("spectrum length differs from N_A");
  const SkewKernel kernel(rho);
  const auto xs = skew_samples(kernel, spec, samples, seed);
  std::vector<double> squares(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) squares[i] = xs[i] * xs[i];
  const auto m = sample_moments(xs);
  const auto m2 = sample_moments(squares);
  return {m.mean, m.variance, m2.mean, m.stderr_mean, m.stderr_variance, m2.stderr_mean};
}

LquBounds lqu_bounds(double avsk, double variance) {
  if (!(avsk >= 0.0)) throw InvalidParameter("avsk", "must be nonnegative");
  if (!(variance >= 0.0)) throw InvalidParameter("variance", "must be nonnegative");
  const double lower = std::max(0.0, avsk - std::sqrt(5.0 * variance));
  double upper;
  if (variance <= 1.0 / 45.0) {
    upper = avsk - 0.5 * std::sqrt(5.0 * variance);
  } else {
    // Continues the first branch at variance = 1/45 along the pure-QC boundary.
    upper = avsk - 1.0 / 6.0 - std::sqrt(15.0 * variance / 4.0 - 1.0 / 12.0);
  }
  return {lower, upper};
}

}  // namespace probe
