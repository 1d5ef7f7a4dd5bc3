#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "probe/linalg.hpp"

namespace probe {

/// (seed, stream) pair. Equal pairs give bit-identical sample sequences.
struct RandomSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child stream for work item `index`; independent of thread layout.
  RandomSeed derive(std::uint64_t index) const;
};

using Rng = std::mt19937_64;

Rng make_rng(const RandomSeed& seed);

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

ComplexMatrix haar_unitary(std::size_t n, Rng& rng);
ComplexMatrix haar_unitary(std::size_t n, const RandomSeed& seed);

ComplexVector random_pure(std::size_t dim, Rng& rng);

DensityMatrix random_density(std::size_t nA, std::size_t nB, std::size_t rank, Rng& rng);
DensityMatrix random_density(std::size_t nA, std::size_t nB, std::size_t rank,
                             const RandomSeed& seed);

/// Dirichlet-uniform mixture of `terms` products of pure local states.
DensityMatrix random_separable(std::size_t nA, std::size_t nB, std::size_t terms, Rng& rng);
DensityMatrix random_separable(std::size_t nA, std::size_t nB, std::size_t terms,
                               const RandomSeed& seed);

enum class FamilyTag {
  bell,
  werner,
  isotropic,
  cq,
  cc,
  qc,
  pqc,
  product,
  max_discordant,
  family_product,
  family_pqc,
  family_sep,
  pure_schmidt,
  cq_line,
  random_ginibre,
  random_pure,
};

std::string_view to_string(FamilyTag tag);
/// Accepts the canonical names plus "pure" and "pure-schmidt" / "cq-line" spellings.
FamilyTag parse_family(std::string_view name);

struct StateFamily {
  FamilyTag tag;
  std::vector<double> params;
  RandomSeed seed{};  // used by the random_* tags only
};

/// Parameter conventions (all two-qubit unless a dimension is passed):
///   werner {q [, N]}, isotropic {F [, N]}, pure_schmidt {c1}, product {pA, pB},
///   cq/cc/qc/pqc/cq_line/family_* {p}, random_ginibre {nA, nB [, rank]},
///   random_pure {nA, nB}.
DensityMatrix make_state(const StateFamily& family);

/// sum_i p_i |a_i><a_i| (x) blockB_i with {|a_i>} the columns of basisA.
DensityMatrix make_cq(const std::vector<double>& probs, const ComplexMatrix& basisA,
                      const std::vector<ComplexMatrix>& blocksB);
/// sum_i p_i blockA_i (x) |b_i><b_i| with {|b_i>} the columns of basisB.
DensityMatrix make_qc(const std::vector<double>& probs, const std::vector<ComplexMatrix>& blocksA,
                      const ComplexMatrix& basisB);
/// QC state whose A blocks are the pure states psiA_i.
DensityMatrix make_pqc(const std::vector<double>& probs, const std::vector<ComplexVector>& psiA,
                       const ComplexMatrix& basisB);
DensityMatrix make_cc(const std::vector<double>& probs, const ComplexMatrix& basisA,
                      const ComplexMatrix& basisB, std::size_t dimA, std::size_t dimB);

ComplexVector schmidt_state(double c1);
ComplexVector bell_vector();

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& uA,
                                  const ComplexMatrix& uB);
DensityMatrix apply_channel_on_b(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus);

std::vector<ComplexMatrix> depolarizing_kraus(std::size_t n, double p);
/// Decay of every excited level into |0> with probability gamma.
std::vector<ComplexMatrix> amplitude_damping_kraus(std::size_t n, double gamma);

}  // namespace probe
