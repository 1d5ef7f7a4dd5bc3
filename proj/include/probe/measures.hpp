#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "probe/linalg.hpp"
#include "probe/states.hpp"

namespace probe {

/// Eigenvalues of the local observable class on A.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);

  static Spectrum sigma_z() { return Spectrum({1.0, -1.0}); }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Values shifted to zero sum.
  std::vector<double> traceless() const;
  /// (N Tr[L^2] - Tr[L]^2) / (N (N^2 - 1)); zero when N = 1.
  double prefactor() const noexcept { return prefactor_; }
  bool degenerate(double tol = 1e-12) const;

  Spectrum shifted(double eta) const;
  Spectrum scaled(double eta) const;
  /// Minimal shift to a nonnegative multiset, then unit sum. Requires a non-constant spectrum.
  Spectrum as_density_spectrum() const;

 private:
  std::vector<double> values_;
  double prefactor_;
};

Spectrum optimal_spectrum(std::size_t nA);
/// Equally spaced levels 0, 1, ..., n-1 made traceless.
Spectrum harmonic_spectrum(std::size_t n);

/// H_A = U diag(spec) U^dagger, acting as H_A (x) I_B.
struct LocalObservable {
  ComplexMatrix matrix;

  static LocalObservable from(const ComplexMatrix& u, const Spectrum& spec);
  ComplexMatrix embedded(std::size_t dimB) const;
};

double skew_information(const DensityMatrix& rho, const ComplexMatrix& h);
double skew_information(const DensityMatrix& rho, const LocalObservable& h);

/// Skew information of rho against many local observables on A.
///
/// With s = sqrt(rho) the cross term is the quadratic form
///   Tr[s (h x I) s (h x I)] = sum h_yz h_wx K[(y,z),(w,x)],
///   K[(y,z),(w,x)] = sum_{b,c} s[(x,b),(y,c)] s[(z,c),(w,b)],
/// so each evaluation costs O(N_A^4) regardless of N_B.
class SkewKernel {
 public:
  explicit SkewKernel(const DensityMatrix& rho);
  double operator()(const ComplexMatrix& hA) const;
  std::size_t dimA() const noexcept { return dimA_; }

 private:
  std::size_t dimA_;
  ComplexMatrix rhoA_;
  ComplexMatrix kernel_;
};

double avsk(const DensityMatrix& rho, const Spectrum& spec);
/// N_A - Tr_B[(Tr_A sqrt(rho))^2]
double q_a(const DensityMatrix& rho);
/// Tr_B[(Tr_A sqrt(rho))^2]
double sqrt_marginal_overlap(const DensityMatrix& rho);

struct MonteCarloEstimate {
  double mean;
  double stderr;
};

MonteCarloEstimate avsk_monte_carlo(const DensityMatrix& rho, const Spectrum& spec,
                                    std::size_t samples, const RandomSeed& seed);

/// Closed form for two qubits with spectrum {1, -1}: 1 - lambda_max(W).
double lqu_two_qubit(const DensityMatrix& rho);

inline constexpr std::size_t kDefaultRestarts = 32;

double lqu_minimize(const DensityMatrix& rho, const Spectrum& spec,
                    std::size_t restarts = kDefaultRestarts, const RandomSeed& seed = {});

/// Uses the closed form (rescaled to the spectral gap) for two qubits, otherwise minimizes.
double lqu(const DensityMatrix& rho, const Spectrum& spec, std::size_t restarts = kDefaultRestarts,
           const RandomSeed& seed = {});

double concurrence_pure(const ComplexVector& psi, std::size_t dimA, std::size_t dimB);
double avsk_pure_relation(const ComplexVector& psi, std::size_t dimA, std::size_t dimB,
                          const Spectrum& spec);

inline constexpr double kWitnessMargin = 1e-9;
bool entanglement_witness(const DensityMatrix& rho, const Spectrum& spec);
double avsk_corr(const DensityMatrix& rho, const Spectrum& spec);

struct PrecisionBounds {
  double lower;
  double upper;
};
PrecisionBounds precision_bounds(const DensityMatrix& rho, const ComplexMatrix& h);
PrecisionBounds precision_bounds(const DensityMatrix& rho, const LocalObservable& h);

struct MeasureReport {
  double avsk = 0.0;
  double lqu = 0.0;
  std::optional<double> variance;
  double purityA = 0.0;
  double purityB = 0.0;
  std::optional<double> concurrence;
  bool witnessEntangled = false;
  std::optional<std::string> familyTag;
};

/// Empty when the report satisfies its invariants, otherwise a description.
std::optional<std::string> check_report(const MeasureReport& r, const Spectrum& spec,
                                        std::size_t dimA);

}  // namespace probe
