#include "probe/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "probe/sampling.hpp"

namespace probe {

namespace {

constexpr double kNegativeRoundoff = 1e-9;

double clamp_nonnegative(double v, double scale, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -kNegativeRoundoff * std::max(1.0, scale)) return 0.0;
  std::ostringstream msg;
  msg << what << " evaluated to " << v << " beyond round-off";
  throw Error(msg.str());
}

void require_dims(const DensityMatrix& rho, const Spectrum& spec) {
  if (spec.size() != rho.dimA()) {
    std::ostringstream msg;
    msg << "spectrum has " << spec.size() << " values but N_A = " << rho.dimA();
    throw DimensionMismatch(msg.str());
  }
}

double spectral_scale(const Spectrum& spec) {
  double m = 0.0;
  for (double v : spec.traceless()) m = std::max(m, std::abs(v));
  return m * m;
}

std::vector<ComplexMatrix> hermitian_basis(std::size_t n) {
  std::vector<ComplexMatrix> out;
  const auto d = static_cast<Eigen::Index>(n);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = j + 1; k < d; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(j, k) = s(k, j) = 1.0;
      out.push_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      a(j, k) = Complex(0.0, -1.0);
      a(k, j) = Complex(0.0, 1.0);
      out.push_back(a);
    }
  for (Eigen::Index l = 1; l < d; ++l) {
    ComplexMatrix g = ComplexMatrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) g(j, j) = norm;
    g(l, l) = -static_cast<double>(l) * norm;
    out.push_back(g);
  }
  return out;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& k) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(k);
  const Eigen::VectorXcd phases =
      es.eigenvalues().unaryExpr([](double x) { return std::polar(1.0, x); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

struct Simplex {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

// Nelder-Mead with the usual coefficients (1, 2, 0.5, 0.5). Stops when the
// spread of simplex values drops below ftol or after max_evals evaluations.
std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double step, double ftol, std::size_t max_evals) {
  const std::size_t n = x0.size();
  Simplex s;
  s.points.push_back(x0);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = x0;
    p[i] += step;
    s.points.push_back(std::move(p));
  }
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (const auto& p : s.points) s.values.push_back(eval(p));

  std::vector<std::size_t> order(n + 1);
  auto combine = [n](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
  };

  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    if (s.values[worst] - s.values[best] <= ftol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& p = s.points[order[k]];
      for (std::size_t i = 0; i < n; ++i) centroid[i] += p[i] / static_cast<double>(n);
    }
    const auto reflected = combine(centroid, s.points[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < s.values[best]) {
      const auto expanded = combine(centroid, s.points[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        s.points[worst] = expanded;
        s.values[worst] = fe;
      } else {
        s.points[worst] = reflected;
        s.values[worst] = fr;
      }
      continue;
    }
    if (fr < s.values[second]) {
      s.points[worst] = reflected;
      s.values[worst] = fr;
      continue;
    }
    const bool outside = fr < s.values[worst];
    const auto contracted =
        outside ? combine(centroid, reflected, 0.5) : combine(centroid, s.points[worst], 0.5);
    const double fc = eval(contracted);
    if (fc < std::min(fr, s.values[worst])) {
      s.points[worst] = contracted;
      s.values[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t idx = order[k];
      s.points[idx] = combine(s.points[best], s.points[idx], 0.5);
      s.values[idx] = eval(s.points[idx]);
    }
  }
  const auto it = std::min_element(s.values.begin(), s.values.end());
  const auto idx = static_cast<std::size_t>(it - s.values.begin());
  return {s.points[idx], *it};
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)), prefactor_(0.0) {
  if (values_.empty()) throw InvalidParameter("spectrum", "must contain at least one value");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidParameter("spectrum", "values must be finite");
  const double n = static_cast<double>(values_.size());
  if (values_.size() > 1) {
    // N Tr[L^2] - Tr[L]^2 = N Tr[(L - mean)^2]
    double t2 = 0.0;
    for (double v : traceless()) t2 += v * v;
    prefactor_ = t2 / (n * n - 1.0);
  }
}

std::vector<double> Spectrum::traceless() const {
  const double mean =
      std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
  std::vector<double> out(values_);
  for (auto& v : out) v -= mean;
  return out;
}

bool Spectrum::degenerate(double tol) const {
  auto sorted = values_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] <= tol) return true;
  return false;
}

Spectrum Spectrum::shifted(double eta) const {
  auto v = values_;
  for (auto& x : v) x += eta;
  return Spectrum(std::move(v));
}

Spectrum Spectrum::scaled(double eta) const {
  auto v = values_;
  for (auto& x : v) x *= eta;
  return Spectrum(std::move(v));
}

Spectrum Spectrum::as_density_spectrum() const {
  const double lo = *std::min_element(values_.begin(), values_.end());
  auto v = values_;
  double total = 0.0;
  for (auto& x : v) total += (x -= lo);
  if (total <= 0.0) throw InvalidParameter("spectrum", "constant spectrum has no density form");
  for (auto& x : v) x /= total;
  return Spectrum(std::move(v));
}

Spectrum optimal_spectrum(std::size_t nA) {
  if (nA < 2) throw InvalidParameter("nA", "must be at least 2");
  const double n = static_cast<double>(nA);
  std::vector<double> v(nA, -1.0 / n);
  v[0] = (n - 1.0) / n;
  return Spectrum(std::move(v));
}

Spectrum harmonic_spectrum(std::size_t n) {
  if (n < 1) throw InvalidParameter("n", "must be at least 1");
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 0.0);
  return Spectrum(Spectrum(std::move(v)).traceless());
}

LocalObservable LocalObservable::from(const ComplexMatrix& u, const Spectrum& spec) {
  if (u.rows() != static_cast<Eigen::Index>(spec.size()) || u.cols() != u.rows())
    throw DimensionMismatch("unitary size differs from spectrum length");
  const Eigen::VectorXd lambda =
      Eigen::Map<const Eigen::VectorXd>(spec.values().data(), static_cast<Eigen::Index>(spec.size()));
  ComplexMatrix h = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  return {0.5 * (h + h.adjoint())};
}

ComplexMatrix LocalObservable::embedded(std::size_t dimB) const {
  return tensor(matrix, ComplexMatrix::Identity(dimB, dimB));
}

double skew_information(const DensityMatrix& rho, const ComplexMatrix& h) {
  if (h.rows() != static_cast<Eigen::Index>(rho.dim()) || h.cols() != h.rows()) {
    std::ostringstream msg;
    msg << "observable is " << h.rows() << "x" << h.cols() << ", state dimension is " << rho.dim();
    throw DimensionMismatch(msg.str());
  }
  if (!is_hermitian(h)) throw NonHermitianInput("observable is not Hermitian");
  const ComplexMatrix& s = rho.sqrt();
  const ComplexMatrix sh = s * h;
  const double v = (rho.matrix() * h * h).trace().real() - (sh * sh).trace().real();
  const double scale = h.cwiseAbs2().maxCoeff();
  return clamp_nonnegative(v, scale, "skew information");
}

double skew_information(const DensityMatrix& rho, const LocalObservable& h) {
  if (h.matrix.rows() != static_cast<Eigen::Index>(rho.dimA()))
    throw DimensionMismatch("local observable does not act on subsystem A");
  return skew_information(rho, h.embedded(rho.dimB()));
}

SkewKernel::SkewKernel(const DensityMatrix& rho)
    : dimA_(rho.dimA()), rhoA_(rho.marginal(Subsystem::A)) {
  const auto na = static_cast<Eigen::Index>(rho.dimA());
  const auto nb = static_cast<Eigen::Index>(rho.dimB());
  const ComplexMatrix& s = rho.sqrt();
  kernel_ = ComplexMatrix::Zero(na * na, na * na);
  for (Eigen::Index y = 0; y < na; ++y)
    for (Eigen::Index z = 0; z < na; ++z)
      for (Eigen::Index w = 0; w < na; ++w)
        for (Eigen::Index x = 0; x < na; ++x) {
          Complex acc = 0.0;
          for (Eigen::Index b = 0; b < nb; ++b)
            for (Eigen::Index c = 0; c < nb; ++c)
              acc += s(x * nb + b, y * nb + c) * s(z * nb + c, w * nb + b);
          kernel_(y * na + z, w * na + x) = acc;
        }
}

double SkewKernel::operator()(const ComplexMatrix& hA) const {
  const auto na = static_cast<Eigen::Index>(dimA_);
  const double local = (rhoA_ * hA * hA).trace().real();
  Eigen::VectorXcd v(na * na);
  for (Eigen::Index y = 0; y < na; ++y)
    for (Eigen::Index z = 0; z < na; ++z) v(y * na + z) = hA(y, z);
  const double cross = (v.transpose() * kernel_ * v).value().real();
  return clamp_nonnegative(local - cross, hA.cwiseAbs2().maxCoeff(), "skew information");
}

double sqrt_marginal_overlap(const DensityMatrix& rho) {
  const ComplexMatrix t = partial_trace(rho.sqrt(), rho.dimA(), rho.dimB(), Subsystem::B);
  // Tr_A sqrt(rho) is Hermitian, so Tr[t^2] is its squared Frobenius norm.
  return t.squaredNorm();
}

double q_a(const DensityMatrix& rho) {
  return clamp_nonnegative(static_cast<double>(rho.dimA()) - sqrt_marginal_overlap(rho), 1.0,
                           "N_A - Tr_B[(Tr_A sqrt rho)^2]");
}

double avsk(const DensityMatrix& rho, const Spectrum& spec) {
  require_dims(rho, spec);
  return spec.prefactor() * q_a(rho);
}

MonteCarloEstimate avsk_monte_carlo(const DensityMatrix& rho, const Spectrum& spec,
                                    std::size_t samples, const RandomSeed& seed) {
  require_dims(rho, spec);
  if (samples < 2) throw InvalidParameter("samples", "need at least 2");
  const SkewKernel kernel(rho);
  const auto m = sample_moments(skew_samples(kernel, spec, samples, seed));
  return {m.mean, m.stderr_mean};
}

double lqu_two_qubit(const DensityMatrix& rho) {
  if (rho.dimA() != 2 || rho.dimB() != 2) {
    std::ostringstream msg;
    msg << "closed-form LQU needs two qubits, got " << rho.dimA() << "x" << rho.dimB();
    throw DimensionMismatch(msg.str());
  }
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix pauli[3] = {ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2),
                            ComplexMatrix::Zero(2, 2)};
  pauli[0](0, 1) = pauli[0](1, 0) = 1.0;
  pauli[1](0, 1) = Complex(0.0, -1.0);
  pauli[1](1, 0) = Complex(0.0, 1.0);
  pauli[2](0, 0) = 1.0;
  pauli[2](1, 1) = -1.0;
  const ComplexMatrix& s = rho.sqrt();
  ComplexMatrix sp[3];
  for (int i = 0; i < 3; ++i) sp[i] = s * tensor(pauli[i], id2);
  Eigen::Matrix3d w;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) w(i, j) = w(j, i) = (sp[i] * sp[j]).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(w, Eigen::EigenvaluesOnly);
  return clamp_nonnegative(1.0 - es.eigenvalues().maxCoeff(), 1.0, "two-qubit LQU");
}

double lqu_minimize(const DensityMatrix& rho, const Spectrum& spec, std::size_t restarts,
                    const RandomSeed& seed) {
  require_dims(rho, spec);
  if (spec.degenerate()) throw DegenerateSpectrum("LQU needs distinct eigenvalues");
  if (restarts < 1) throw InvalidParameter("restarts", "need at least 1");
  const std::size_t n = rho.dimA();
  const SkewKernel kernel(rho);
  const auto generators = hermitian_basis(n);
  const Eigen::VectorXcd lambda =
      Eigen::Map<const Eigen::VectorXd>(spec.values().data(), static_cast<Eigen::Index>(n))
          .cast<Complex>();

  auto objective_at = [&](const ComplexMatrix& u0) {
    return [&, u0](const std::vector<double>& theta) {
      ComplexMatrix k = ComplexMatrix::Zero(n, n);
      for (std::size_t i = 0; i < theta.size(); ++i) k += theta[i] * generators[i];
      const ComplexMatrix u = u0 * exp_i_hermitian(k);
      return kernel(u * lambda.asDiagonal() * u.adjoint());
    };
  };

  const std::size_t dof = generators.size();
  const std::size_t max_evals = 400 * (dof + 1);
  const double ftol = 1e-15 * std::max(1.0, spectral_scale(spec));
  double best = std::numeric_limits<double>::infinity();
  ComplexMatrix best_u = ComplexMatrix::Identity(n, n);
  for (std::size_t r = 0; r < restarts; ++r) {
    const ComplexMatrix u0 =
        r == 0 ? ComplexMatrix::Identity(n, n) : haar_unitary(n, seed.derive(r));
    auto [theta, value] = nelder_mead(objective_at(u0), std::vector<double>(dof, 0.0), 0.4, ftol, max_evals);
    if (value < best) {
      best = value;
      ComplexMatrix k = ComplexMatrix::Zero(n, n);
      for (std::size_t i = 0; i < dof; ++i) k += theta[i] * generators[i];
      best_u = u0 * exp_i_hermitian(k);
    }
  }
  // Polish the best basin with a smaller simplex.
  auto polished = nelder_mead(objective_at(best_u), std::vector<double>(dof, 0.0), 0.02, ftol, max_evals);
  return std::min(best, polished.second);
}

double lqu(const DensityMatrix& rho, const Spectrum& spec, std::size_t restarts,
           const RandomSeed& seed) {
  require_dims(rho, spec);
  if (rho.dimA() == 2 && rho.dimB() == 2) {
    if (spec.degenerate()) throw DegenerateSpectrum("LQU needs distinct eigenvalues");
    const double half_gap = 0.5 * (spec.values()[0] - spec.values()[1]);
    return half_gap * half_gap * lqu_two_qubit(rho);
  }
  return lqu_minimize(rho, spec, restarts, seed);
}

double concurrence_pure(const ComplexVector& psi, std::size_t dimA, std::size_t dimB) {
  if (psi.size() != static_cast<Eigen::Index>(dimA * dimB))
    throw DimensionMismatch("state vector length differs from dimA * dimB");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "state vector has norm " << norm;
    throw NotNormalized(msg.str());
  }
  // psi_{ab} as a dimA x dimB matrix; rho_B = M^T conj(M) shares its spectrum with M M^dagger.
  const ComplexMatrix m =
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          psi.data(), static_cast<Eigen::Index>(dimA), static_cast<Eigen::Index>(dimB));
  const double purity = (m * m.adjoint()).squaredNorm();
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * purity));
}

double avsk_pure_relation(const ComplexVector& psi, std::size_t dimA, std::size_t dimB,
                          const Spectrum& spec) {
  if (spec.size() != dimA) throw DimensionMismatch("spectrum length differs from N_A");
  const double c = concurrence_pure(psi, dimA, dimB);
  return spec.prefactor() * (static_cast<double>(dimA) - 1.0 + 0.5 * c * c);
}

bool entanglement_witness(const DensityMatrix& rho, const Spectrum& spec) {
  return avsk(rho, spec) > spec.prefactor() * (static_cast<double>(rho.dimA()) - 1.0) + kWitnessMargin;
}

double avsk_corr(const DensityMatrix& rho, const Spectrum& spec) {
  require_dims(rho, spec);
  const ComplexMatrix rhoA = rho.marginal(Subsystem::A);
  const auto eig = hermitian_eig(rhoA);
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) trace_sqrt += std::sqrt(std::max(0.0, eig.values(i)));
  const double v = spec.prefactor() * (trace_sqrt * trace_sqrt - sqrt_marginal_overlap(rho));
  return clamp_nonnegative(v, 1.0, "correlation part of the average skew information");
}

PrecisionBounds precision_bounds(const DensityMatrix& rho, const ComplexMatrix& h) {
  const double skew = skew_information(rho, h);
  if (skew <= 1e-12) throw ZeroSusceptibility("skew information vanishes for this generator");
  return {1.0 / (8.0 * skew), 1.0 / (4.0 * skew)};
}

PrecisionBounds precision_bounds(const DensityMatrix& rho, const LocalObservable& h) {
  return precision_bounds(rho, h.embedded(rho.dimB()));
}

std::optional<std::string> check_report(const MeasureReport& r, const Spectrum& spec,
                                        std::size_t dimA) {
  std::ostringstream msg;
  if (r.avsk < r.lqu - 1e-9) msg << "avsk " << r.avsk << " < lqu " << r.lqu << "; ";
  if (r.avsk < 0.0 || r.lqu < 0.0) msg << "negative measure; ";
  if (r.variance && *r.variance < 0.0) msg << "negative variance; ";
  if (r.witnessEntangled && !(r.avsk > spec.prefactor() * (static_cast<double>(dimA) - 1.0)))
    msg << "witness fired below threshold; ";
  const auto text = msg.str();
  if (text.empty()) return std::nullopt;
  return text;
}

}  // namespace probe
