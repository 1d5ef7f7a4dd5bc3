#include "probe/states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace probe {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix ket_bra(const ComplexVector& a, const ComplexVector& b) { return a * b.adjoint(); }

ComplexVector basis(std::size_t n, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

ComplexVector plus_state() {
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

ComplexMatrix proj(const ComplexVector& v) { return ket_bra(v, v); }

void require_unit_interval(double x, const char* field) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "value " << x << " outside [0, 1]";
    throw InvalidParameter(field, msg.str());
  }
}

void require_params(const StateFamily& f, std::size_t lo, std::size_t hi) {
  if (f.params.size() < lo || f.params.size() > hi) {
    std::ostringstream msg;
    msg << to_string(f.tag) << " takes " << lo << ".." << hi << " parameters, got "
        << f.params.size();
    throw InvalidParameter("params", msg.str());
  }
}

std::size_t dimension_param(const StateFamily& f, std::size_t index, std::size_t fallback,
                            std::size_t minimum) {
  if (f.params.size() <= index) return fallback;
  const double v = f.params[index];
  if (!(v >= static_cast<double>(minimum)) || v != std::floor(v) || v > 64.0) {
    std::ostringstream msg;
    msg << "dimension " << v << " must be an integer >= " << minimum;
    throw InvalidParameter("dim", msg.str());
  }
  return static_cast<std::size_t>(v);
}

void validate_probs(const std::vector<double>& probs) {
  double total = 0.0;
  for (double p : probs) {
    require_unit_interval(p, "probs");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total;
    throw InvalidParameter("probs", msg.str());
  }
}

DensityMatrix werner(double q, std::size_t n) {
  const double nd = static_cast<double>(n);
  const ComplexMatrix id = ComplexMatrix::Identity(n * n, n * n);
  const ComplexMatrix s = swap_operator(n).matrix;
  const ComplexMatrix sym = 0.5 * (id + s);
  const ComplexMatrix asym = 0.5 * (id - s);
  return DensityMatrix(q * 2.0 * sym / (nd * (nd + 1.0)) + (1.0 - q) * 2.0 * asym / (nd * (nd - 1.0)),
                       n, n);
}

DensityMatrix isotropic(double fidelity, std::size_t n) {
  const double nd = static_cast<double>(n);
  ComplexVector phi = ComplexVector::Zero(n * n);
  for (std::size_t i = 0; i < n; ++i) phi(i * n + i) = 1.0 / std::sqrt(nd);
  const ComplexMatrix p = proj(phi);
  const ComplexMatrix id = ComplexMatrix::Identity(n * n, n * n);
  return DensityMatrix(fidelity * p + (1.0 - fidelity) / (nd * nd - 1.0) * (id - p), n, n);
}

ComplexMatrix qubit_mix(double p) {
  // p|0><0| + (1 - p) I/2
  return p * proj(basis(2, 0)) + (1.0 - p) * 0.5 * ComplexMatrix::Identity(2, 2);
}

}  // namespace

RandomSeed RandomSeed::derive(std::uint64_t index) const {
  std::uint64_t s = stream ^ 0x5851f42d4c957f2dULL;
  std::uint64_t mixed = splitmix64(s);
  s = mixed + index;
  return {seed, splitmix64(s)};
}

Rng make_rng(const RandomSeed& seed) {
  std::uint64_t state = seed.seed;
  std::array<std::uint32_t, 8> words{};
  std::uint64_t other = seed.stream ^ 0xd1b54a32d192ed03ULL;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::uint64_t v = splitmix64(state) ^ splitmix64(other);
    words[2 * i] = static_cast<std::uint32_t>(v);
    words[2 * i + 1] = static_cast<std::uint32_t>(v >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  const ComplexMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

ComplexMatrix haar_unitary(std::size_t n, const RandomSeed& seed) {
  Rng rng = make_rng(seed);
  return haar_unitary(n, rng);
}

ComplexVector random_pure(std::size_t dim, Rng& rng) {
  ComplexVector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density(std::size_t nA, std::size_t nB, std::size_t rank, Rng& rng) {
  const std::size_t n = nA * nB;
  if (rank < 1 || rank > n) {
    std::ostringstream msg;
    msg << "rank " << rank << " outside [1, " << n << "]";
    throw InvalidRank(msg.str());
  }
  const ComplexMatrix g = ginibre(n, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m), nA, nB);
}

DensityMatrix random_density(std::size_t nA, std::size_t nB, std::size_t rank,
                             const RandomSeed& seed) {
  Rng rng = make_rng(seed);
  return random_density(nA, nB, rank, rng);
}

DensityMatrix random_separable(std::size_t nA, std::size_t nB, std::size_t terms, Rng& rng) {
  if (terms < 1) throw InvalidParameter("terms", "must be at least 1");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& x : w) total += (x = expo(rng));
  ComplexMatrix m = ComplexMatrix::Zero(nA * nB, nA * nB);
  for (std::size_t t = 0; t < terms; ++t) {
    const ComplexVector a = random_pure(nA, rng);
    const ComplexVector b = random_pure(nB, rng);
    m += (w[t] / total) * tensor(proj(a), proj(b));
  }
  m /= m.trace().real();
  return DensityMatrix(std::move(m), nA, nB);
}

DensityMatrix random_separable(std::size_t nA, std::size_t nB, std::size_t terms,
                               const RandomSeed& seed) {
  Rng rng = make_rng(seed);
  return random_separable(nA, nB, terms, rng);
}

std::string_view to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::bell: return "bell";
    case FamilyTag::werner: return "werner";
    case FamilyTag::isotropic: return "isotropic";
    case FamilyTag::cq: return "cq";
    case FamilyTag::cc: return "cc";
    case FamilyTag::qc: return "qc";
    case FamilyTag::pqc: return "pqc";
    case FamilyTag::product: return "product";
    case FamilyTag::max_discordant: return "max_discordant";
    case FamilyTag::family_product: return "family_product";
    case FamilyTag::family_pqc: return "family_pqc";
    case FamilyTag::family_sep: return "family_sep";
    case FamilyTag::pure_schmidt: return "pure_schmidt";
    case FamilyTag::cq_line: return "cq_line";
    case FamilyTag::random_ginibre: return "random_ginibre";
    case FamilyTag::random_pure: return "random_pure";
  }
  return "unknown";
}

FamilyTag parse_family(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "pure") return FamilyTag::pure_schmidt;
  for (int t = 0; t <= static_cast<int>(FamilyTag::random_pure); ++t) {
    const auto tag = static_cast<FamilyTag>(t);
    if (to_string(tag) == key) return tag;
  }
  throw InvalidParameter("family", "unknown family '" + std::string(name) + "'");
}

ComplexVector bell_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

ComplexVector schmidt_state(double c1) {
  require_unit_interval(c1, "c1");
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::sqrt(c1);
  v(3) = std::sqrt(1.0 - c1);
  return v;
}

DensityMatrix make_cq(const std::vector<double>& probs, const ComplexMatrix& basisA,
                      const std::vector<ComplexMatrix>& blocksB) {
  validate_probs(probs);
  if (blocksB.size() != probs.size() || basisA.cols() < static_cast<Eigen::Index>(probs.size()))
    throw DimensionMismatch("cq: need one A basis vector and one B block per probability");
  const auto nA = static_cast<std::size_t>(basisA.rows());
  const auto nB = static_cast<std::size_t>(blocksB.front().rows());
  ComplexMatrix m = ComplexMatrix::Zero(nA * nB, nA * nB);
  for (std::size_t i = 0; i < probs.size(); ++i)
    m += probs[i] * tensor(proj(basisA.col(static_cast<Eigen::Index>(i))), blocksB[i]);
  return DensityMatrix(std::move(m), nA, nB);
}

DensityMatrix make_qc(const std::vector<double>& probs, const std::vector<ComplexMatrix>& blocksA,
                      const ComplexMatrix& basisB) {
  validate_probs(probs);
  if (blocksA.size() != probs.size() || basisB.cols() < static_cast<Eigen::Index>(probs.size()))
    throw DimensionMismatch("qc: need one A block and one B basis vector per probability");
  const auto nA = static_cast<std::size_t>(blocksA.front().rows());
  const auto nB = static_cast<std::size_t>(basisB.rows());
  ComplexMatrix m = ComplexMatrix::Zero(nA * nB, nA * nB);
  for (std::size_t i = 0; i < probs.size(); ++i)
    m += probs[i] * tensor(blocksA[i], proj(basisB.col(static_cast<Eigen::Index>(i))));
  return DensityMatrix(std::move(m), nA, nB);
}

DensityMatrix make_pqc(const std::vector<double>& probs, const std::vector<ComplexVector>& psiA,
                       const ComplexMatrix& basisB) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(psiA.size());
  for (const auto& v : psiA) {
    if (std::abs(v.norm() - 1.0) > kTraceTol) throw NotNormalized("pqc: A states must be unit vectors");
    blocks.push_back(proj(v));
  }
  return make_qc(probs, blocks, basisB);
}

DensityMatrix make_cc(const std::vector<double>& probs, const ComplexMatrix& basisA,
                      const ComplexMatrix& basisB, std::size_t dimA, std::size_t dimB) {
  validate_probs(probs);
  if (probs.size() != dimA * dimB || basisA.rows() != static_cast<Eigen::Index>(dimA) ||
      basisB.rows() != static_cast<Eigen::Index>(dimB))
    throw DimensionMismatch("cc: probabilities must be indexed by (i, j) in dimA x dimB");
  ComplexMatrix m = ComplexMatrix::Zero(dimA * dimB, dimA * dimB);
  for (std::size_t i = 0; i < dimA; ++i)
    for (std::size_t j = 0; j < dimB; ++j)
      m += probs[i * dimB + j] * tensor(proj(basisA.col(static_cast<Eigen::Index>(i))),
                                        proj(basisB.col(static_cast<Eigen::Index>(j))));
  return DensityMatrix(std::move(m), dimA, dimB);
}

DensityMatrix make_state(const StateFamily& f) {
  const ComplexVector k0 = basis(2, 0);
  const ComplexVector k1 = basis(2, 1);
  const ComplexMatrix z2 = ComplexMatrix::Identity(2, 2);
  auto p_of = [&](const char* name) {
    require_params(f, 1, 1);
    require_unit_interval(f.params[0], name);
    return f.params[0];
  };

  switch (f.tag) {
    case FamilyTag::bell:
      require_params(f, 0, 0);
      return DensityMatrix::pure(bell_vector(), 2, 2);
    case FamilyTag::werner: {
      require_params(f, 1, 2);
      require_unit_interval(f.params[0], "q");
      return werner(f.params[0], dimension_param(f, 1, 2, 2));
    }
    case FamilyTag::isotropic: {
      require_params(f, 1, 2);
      require_unit_interval(f.params[0], "F");
      return isotropic(f.params[0], dimension_param(f, 1, 2, 2));
    }
    case FamilyTag::cq: {
      const double p = p_of("p");
      return make_cq({p, 1.0 - p}, z2, {proj(k0), proj(plus_state())});
    }
    case FamilyTag::cc: {
      const double p = p_of("p");
      return make_cc({p, 0.0, 0.0, 1.0 - p}, z2, z2, 2, 2);
    }
    case FamilyTag::qc: {
      const double p = p_of("p");
      const ComplexVector minus = (k0 - k1) / std::sqrt(2.0);
      const ComplexMatrix a0 = 0.8 * proj(k0) + 0.2 * proj(k1);
      const ComplexMatrix a1 = 0.7 * proj(plus_state()) + 0.3 * proj(minus);
      return make_qc({p, 1.0 - p}, {a0, a1}, z2);
    }
    case FamilyTag::pqc: {
      const double p = p_of("p");
      return make_pqc({p, 1.0 - p}, {k0, plus_state()}, z2);
    }
    case FamilyTag::product: {
      require_params(f, 0, 2);
      const double pa = f.params.size() > 0 ? f.params[0] : 1.0;
      const double pb = f.params.size() > 1 ? f.params[1] : 1.0;
      require_unit_interval(pa, "pA");
      require_unit_interval(pb, "pB");
      return DensityMatrix(tensor(qubit_mix(pa), qubit_mix(pb)), 2, 2);
    }
    case FamilyTag::max_discordant:
      require_params(f, 0, 0);
      return make_pqc({0.5, 0.5}, {k0, plus_state()}, z2);
    case FamilyTag::family_product: {
      const double p = p_of("p");
      return DensityMatrix(tensor(qubit_mix(p), proj(k0)), 2, 2);
    }
    case FamilyTag::family_pqc: {
      const double p = p_of("p");
      return make_pqc({(1.0 - p) / 2.0, (1.0 + p) / 2.0}, {k0, plus_state()}, z2);
    }
    case FamilyTag::family_sep: {
      const double p = p_of("p");
      const ComplexMatrix m = 0.5 * p * (tensor(proj(k0), proj(k0)) + tensor(proj(plus_state()), proj(k1))) +
                              (1.0 - p) * 0.25 * ComplexMatrix::Identity(4, 4);
      return DensityMatrix(m, 2, 2);
    }
    case FamilyTag::pure_schmidt: {
      const double c1 = p_of("c1");
      return DensityMatrix::pure(schmidt_state(c1), 2, 2);
    }
    case FamilyTag::cq_line: {
      const double p = p_of("p");
      return DensityMatrix(tensor(p * proj(k0) + (1.0 - p) * proj(k1), proj(k0)), 2, 2);
    }
    case FamilyTag::random_ginibre: {
      require_params(f, 2, 3);
      const std::size_t nA = dimension_param(f, 0, 2, 1);
      const std::size_t nB = dimension_param(f, 1, 2, 1);
      const std::size_t rank = dimension_param(f, 2, nA * nB, 1);
      return random_density(nA, nB, rank, f.seed);
    }
    case FamilyTag::random_pure: {
      require_params(f, 2, 2);
      const std::size_t nA = dimension_param(f, 0, 2, 1);
      const std::size_t nB = dimension_param(f, 1, 2, 1);
      Rng rng = make_rng(f.seed);
      return DensityMatrix::pure(random_pure(nA * nB, rng), nA, nB);
    }
  }
  throw InvalidParameter("family", "unhandled tag");
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& uA,
                                  const ComplexMatrix& uB) {
  const ComplexMatrix u = tensor(uA, uB);
  ComplexMatrix m = u * rho.matrix() * u.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m), rho.dimA(), rho.dimB());
}

DensityMatrix apply_channel_on_b(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus) {
  const ComplexMatrix idA = ComplexMatrix::Identity(rho.dimA(), rho.dimA());
  ComplexMatrix m = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : kraus) {
    const ComplexMatrix full = tensor(idA, k);
    m += full * rho.matrix() * full.adjoint();
  }
  m /= m.trace().real();
  return DensityMatrix(std::move(m), rho.dimA(), rho.dimB());
}

std::vector<ComplexMatrix> depolarizing_kraus(std::size_t n, double p) {
  require_unit_interval(p, "p");
  std::vector<ComplexMatrix> out;
  out.push_back(std::sqrt(1.0 - p) * ComplexMatrix::Identity(n, n));
  const double w = std::sqrt(p / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(n, n);
      k(i, j) = w;
      out.push_back(std::move(k));
    }
  return out;
}

std::vector<ComplexMatrix> amplitude_damping_kraus(std::size_t n, double gamma) {
  require_unit_interval(gamma, "gamma");
  std::vector<ComplexMatrix> out;
  ComplexMatrix k0 = ComplexMatrix::Zero(n, n);
  k0(0, 0) = 1.0;
  for (std::size_t i = 1; i < n; ++i) k0(i, i) = std::sqrt(1.0 - gamma);
  out.push_back(std::move(k0));
  for (std::size_t i = 1; i < n; ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(n, n);
    k(0, i) = std::sqrt(gamma);
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace probe
