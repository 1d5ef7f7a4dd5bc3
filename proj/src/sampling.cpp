#include "probe/sampling.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

#include "probe/measures.hpp"

namespace probe {

namespace {

void fill_chunk(const SkewKernel& kernel, const Eigen::VectorXd& lambda, std::size_t samples,
                const RandomSeed& seed, std::size_t chunk, std::vector<double>& out) {
  const std::size_t begin = chunk * kSampleChunk;
  const std::size_t end = std::min(samples, begin + kSampleChunk);
  Rng rng = make_rng(seed.derive(chunk));
  const std::size_t n = kernel.dimA();
  for (std::size_t i = begin; i < end; ++i) {
    const ComplexMatrix u = haar_unitary(n, rng);
    const ComplexMatrix h = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
    out[i] = kernel(h);
  }
}

}  // namespace

std::vector<double> skew_samples(const SkewKernel& kernel, const Spectrum& spec,
                                 std::size_t samples, const RandomSeed& seed, Execution exec) {
  if (spec.size() != kernel.dimA()) throw DimensionMismatch("spectrum length differs from N_A");
  const Eigen::VectorXd lambda =
      Eigen::Map<const Eigen::VectorXd>(spec.values().data(), static_cast<Eigen::Index>(spec.size()));
  std::vector<double> out(samples);
  const auto chunks = static_cast<std::ptrdiff_t>((samples + kSampleChunk - 1) / kSampleChunk);
  if (exec == Execution::serial) {
    for (std::ptrdiff_t c = 0; c < chunks; ++c)
      fill_chunk(kernel, lambda, samples, seed, static_cast<std::size_t>(c), out);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < chunks; ++c)
      fill_chunk(kernel, lambda, samples, seed, static_cast<std::size_t>(c), out);
  }
  return out;
}

void for_each_indexed(std::size_t count, const RandomSeed& seed,
                      const std::function<void(std::size_t, Rng&)>& fn, Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      Rng rng = make_rng(seed.derive(static_cast<std::uint64_t>(i)));
      fn(static_cast<std::size_t>(i), rng);
    }
    return;
  }
  // Exceptions may not cross the parallel region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      Rng rng = make_rng(seed.derive(static_cast<std::uint64_t>(i)));
      fn(static_cast<std::size_t>(i), rng);
    } catch (...) {
#pragma omp critical(probe_for_each_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SampleMoments sample_moments(const std::vector<double>& xs) {
  SampleMoments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d = x - m.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  if (xs.size() < 2) return m;
  m.variance = m2 / (n - 1.0);
  m.stderr_mean = std::sqrt(m.variance / n);
  // Large-sample standard error of the sample variance: (mu4 - sigma^4 (n-3)/(n-1)) / n.
  const double mu4 = m4 / n;
  const double s2 = m2 / n;
  const double var_of_var = (mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n;
  m.stderr_variance = var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
  return m;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace probe
