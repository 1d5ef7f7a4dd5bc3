#pragma once

#include <array>
#include <utility>

#include "probe/linalg.hpp"
#include "probe/measures.hpp"
#include "probe/permutations.hpp"
#include "probe/rational.hpp"
#include "probe/states.hpp"

namespace probe {

/// Haar average of (U (x) U) theta (U (x) U)^dagger over U(n): a I + b S with
///   a = (n Tr[theta] - Tr[S theta]) / (n (n^2 - 1)),
///   b = (n Tr[S theta] - Tr[theta]) / (n (n^2 - 1)).
ComplexMatrix twirl2(const ComplexMatrix& theta, std::size_t n);

/// Order-4 unitary Weingarten function of the given cycle type, unreduced
/// over the common denominator N^2 (N^2 - 1)(N^2 - 4)(N^2 - 9).
RationalFunctionOfN weingarten4(CycleClass c);
inline RationalFunctionOfN weingarten4(const Perm4& sigma) {
  return weingarten4(sigma.cycle_class());
}
/// Exact value at dimension n; throws PoleEvaluation at a pole.
BigRational weingarten4_value(const Perm4& sigma, long long n);

/// E[U_{i1 j1} ... U_{i4 j4} conj(U_{k1 l1} ... U_{k4 l4})] over Haar U(n),
/// indices zero-based.
BigRational unitary_moment4(const std::array<int, 4>& i, const std::array<int, 4>& j,
                            const std::array<int, 4>& k, const std::array<int, 4>& l, long long n);

/// Tr[L^4] for [4], Tr[L^2]^2 for [2^2], 0 otherwise, on the traceless spectrum.
double f_lambda(CycleClass c, const Spectrum& spec);

/// State-dependent contractions entering the second moment. With s = sqrt(rho):
///   a = Tr_B[(Tr_A s)^2], b = Tr[rho_A^2], c = a^2,
///   d = Tr[X^2], g = Tr[X^2 S_{A|A'}] with X = Tr_B[(I_A' (x) s_AB)(I_A (x) s_A'B)] on A (x) A',
///   e = Tr[s (rho_A (x) Tr_A s)], f = Tr_A[(Tr_B[s (I_A (x) Tr_A s)])^2].
struct LetterValues {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0, g = 0;
  std::size_t dimA = 0;
  /// Largest imaginary residue seen while forming the letters.
  double imaginary_residue = 0;
};

LetterValues letters(const DensityMatrix& rho);

enum class Letter { one, a, b, c, d, e, f, g };
inline constexpr std::size_t kLetterCount = 8;

double letter_value(Letter l, const LetterValues& v);

Letter g2_letter(const Perm4& tau);
/// Term of G3(tau): the letter and whether it carries a factor N_A.
std::pair<Letter, bool> g3_term(const Perm4& tau);

double g2_value(const Perm4& tau, const LetterValues& v);
double g3_value(const Perm4& tau, const LetterValues& v);

/// Letter-basis coefficients of the Weingarten double sum
///   sum_{sigma, tau} Wg(sigma) F(tau sigma) (G2(tau) - 2 G3(tau)).
/// F is written as t2sq * [class weights] + delta * [class [4]] with
/// t2sq = Tr[L^2]^2 and delta = Tr[L^4] - t2sq / 2; delta vanishes for
/// traceless spectra of size at most 3.
struct SecondMomentTable {
  std::array<RationalFunctionOfN, kLetterCount> t2sq;
  std::array<RationalFunctionOfN, kLetterCount> delta;
};

const SecondMomentTable& second_moment_table();

/// True when every t2sq coefficient is finite at n (exact check).
bool second_moment_pole_free(long long n);

double second_moment(const DensityMatrix& rho, const Spectrum& spec);
double variance(const DensityMatrix& rho, const Spectrum& spec);

struct VarianceEstimate {
  double mean;
  double variance;
  double second_moment;
  double stderr_mean;
  double stderr_variance;
  double stderr_second_moment;
};

VarianceEstimate variance_monte_carlo(const DensityMatrix& rho, const Spectrum& spec,
                                      std::size_t samples, const RandomSeed& seed);

struct LquBounds {
  double lower;
  double upper;
};

/// Two-qubit bounds on the LQU (spectrum {1, -1}) from the mean and variance of
/// the skew information. The upper bound switches branch at variance 1/45.
LquBounds lqu_bounds(double avsk, double variance);

}  // namespace probe
