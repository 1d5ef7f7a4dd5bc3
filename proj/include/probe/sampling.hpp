#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "probe/linalg.hpp"
#include "probe/states.hpp"

namespace probe {

class SkewKernel;
class Spectrum;

// Parallel kernels. Work is split into fixed-size chunks, chunk c draws from
// seed.derive(c), and results land at their own index, so the output does not
// depend on the thread count. Every parallel kernel has a serial twin that
// runs the identical chunk loop and must agree bit for bit.

inline constexpr std::size_t kSampleChunk = 256;

enum class Execution { serial, parallel };

/// I(rho, U diag(spec) U^dagger (x) I) for `samples` Haar unitaries U.
std::vector<double> skew_samples(const SkewKernel& kernel, const Spectrum& spec,
                                 std::size_t samples, const RandomSeed& seed,
                                 Execution exec = Execution::parallel);

/// Calls fn(i, rng_i) for i in [0, count) with rng_i = make_rng(seed.derive(i)).
/// fn must only write to state owned by index i.
void for_each_indexed(std::size_t count, const RandomSeed& seed,
                      const std::function<void(std::size_t, Rng&)>& fn,
                      Execution exec = Execution::parallel);

struct SampleMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;       // unbiased
  double stderr_mean = 0.0;
  double stderr_variance = 0.0;
};

/// Index-ordered two-pass moments; deterministic for a given input vector.
SampleMoments sample_moments(const std::vector<double>& xs);

int max_threads();

}  // namespace probe
