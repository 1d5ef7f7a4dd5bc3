#include "probe/verify.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include "json.hpp"
#include "probe/measures.hpp"
#include "probe/moments.hpp"
#include "probe/states.hpp"

namespace probe {

namespace {

// Accumulates residuals of one invariant; it holds when every residual is
// within tol.
class Tally {
 public:
  Tally(std::string suite, std::string name, double tol)
      : suite_(std::move(suite)), name_(std::move(name)), tol_(tol) {}

  void residual(double r) {
    ++count_;
    if (!(r <= tol_)) ok_ = false;
    if (std::isnan(r) || r > worst_) worst_ = std::isnan(r) ? INFINITY : r;
  }
  /// Signed margin: the invariant holds when value >= 0.
  void margin(double value) { residual(value >= 0.0 ? 0.0 : -value); }

  InvariantResult result() const { return {suite_, name_, ok_ && count_ > 0, count_, worst_}; }

 private:
  std::string suite_;
  std::string name_;
  double tol_;
  bool ok_ = true;
  std::size_t count_ = 0;
  double worst_ = 0.0;
};

struct Context {
  VerifyOptions options;
  std::vector<InvariantResult> results;

  double avsk_under_test(const DensityMatrix& rho, const Spectrum& spec) const {
    const double sign = options.negatePrefactor ? -1.0 : 1.0;
    return sign * spec.prefactor() * q_a(rho);
  }
  Rng rng(std::uint64_t stream) const { return make_rng({options.seed, stream}); }
  void add(const Tally& t) { results.push_back(t.result()); }
};

void linalg_suite(Context& ctx) {
  Rng rng = ctx.rng(1);
  Tally sq("linalg", "sqrt_squared_matches_rho", 1e-9);
  Tally pt("linalg", "partial_traces_compose_to_trace", 1e-12);
  Tally eig("linalg", "eigenvalues_sum_to_one", 1e-10);
  for (int i = 0; i < 200; ++i) {
    const std::size_t nA = 2 + static_cast<std::size_t>(i % 3);
    const std::size_t nB = 1 + static_cast<std::size_t>(i % 4);
    const std::size_t rank = 1 + static_cast<std::size_t>(i) % (nA * nB);
    const DensityMatrix rho = random_density(nA, nB, rank, rng);
    const ComplexMatrix s = sqrtm_psd(rho);
    sq.residual(max_abs_entry(s * s - rho.matrix()));
    const ComplexMatrix a = rho.marginal(Subsystem::A);
    const ComplexMatrix b = rho.marginal(Subsystem::B);
    pt.residual(std::max(std::abs(a.trace() - rho.matrix().trace()), std::abs(b.trace() - rho.matrix().trace())));
    eig.residual(std::abs(rho.eigenvalues().sum() - 1.0));
  }
  ctx.add(sq);
  ctx.add(pt);
  ctx.add(eig);

  Tally swap("linalg", "swap_properties", 1e-10);
  for (std::size_t n = 1; n <= 4; ++n) {
    const ComplexMatrix s = swap_operator(n).matrix;
    const auto dn = static_cast<Eigen::Index>(n);
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix theta = ginibre(n, n, rng);
      const ComplexMatrix omega = ginibre(n, n, rng);
      const ComplexMatrix x = ginibre(n, n, rng);
      const ComplexMatrix y = ginibre(n, n, rng);
      swap.residual(max_abs_entry(s * s - ComplexMatrix::Identity(dn * dn, dn * dn)));
      swap.residual(max_abs_entry(s * tensor(theta, omega) * s - tensor(omega, theta)));
      swap.residual(std::abs((tensor(theta, omega) * s).trace() - (theta * omega).trace()));
      // S (X (x) Y) = (Y (x) X) S
      swap.residual(max_abs_entry(s * tensor(x, y) - tensor(y, x) * s));
      // Tr_{X'}[S (Theta (x) I)] acts as Theta
      swap.residual(max_abs_entry(
          partial_trace(tensor(ComplexMatrix::Identity(dn, dn), theta) * s, n, n, Subsystem::B) - theta));
    }
  }
  ctx.add(swap);
}

void states_suite(Context& ctx) {
  Rng rng = ctx.rng(2);
  Tally valid("states", "constructors_emit_density_matrices", 0.0);
  const FamilyTag single[] = {FamilyTag::werner,         FamilyTag::isotropic,    FamilyTag::cq,
                              FamilyTag::cc,             FamilyTag::qc,           FamilyTag::pqc,
                              FamilyTag::family_product, FamilyTag::family_pqc,   FamilyTag::family_sep,
                              FamilyTag::pure_schmidt,   FamilyTag::cq_line,      FamilyTag::product};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const FamilyTag tag = single[static_cast<std::size_t>(i) % std::size(single)];
    try {
      (void)make_state({tag, {unit(rng)}});
      valid.residual(0.0);
    } catch (const Error&) {
      valid.residual(1.0);
    }
  }
  ctx.add(valid);

  Tally fid("states", "isotropic_fidelity", 1e-12);
  const ComplexVector phi = bell_vector();
  for (int k = 0; k <= 100; ++k) {
    const double f = k / 100.0;
    const DensityMatrix rho = make_state({FamilyTag::isotropic, {f}});
    fid.residual(std::abs((phi.adjoint() * rho.matrix() * phi).value().real() - f));
  }
  ctx.add(fid);

  Tally sym("states", "twirl_symmetry_of_werner_and_isotropic", 1e-9);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix u = haar_unitary(2, rng);
    const double q = unit(rng);
    const DensityMatrix w = make_state({FamilyTag::werner, {q}});
    const DensityMatrix iso = make_state({FamilyTag::isotropic, {q}});
    const ComplexMatrix uu = tensor(u, u);
    const ComplexMatrix uc = tensor(u, u.conjugate());
    sym.residual(max_abs_entry(uu * w.matrix() * uu.adjoint() - w.matrix()));
    sym.residual(max_abs_entry(uc * iso.matrix() * uc.adjoint() - iso.matrix()));
  }
  ctx.add(sym);

  Tally det("states", "seeded_determinism", 0.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const RandomSeed seed{ctx.options.seed, s};
    det.residual(max_abs_entry(random_density(2, 3, 4, seed).matrix() - random_density(2, 3, 4, seed).matrix()));
    det.residual(max_abs_entry(haar_unitary(3, seed) - haar_unitary(3, seed)));
  }
  ctx.add(det);
}

void measures_suite(Context& ctx) {
  const Spectrum sz = Spectrum::sigma_z();
  Rng rng = ctx.rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Tally order("measures", "ordering_avsk_at_least_lqu", 1e-9);
  for (int i = 0; i < 10000; ++i) {
    const DensityMatrix rho = random_density(2, 2, 4, rng);
    order.margin(ctx.avsk_under_test(rho, sz) - lqu_two_qubit(rho));
  }
  ctx.add(order);

  Tally lu("measures", "local_unitary_invariance", 1e-9);
  for (int i = 0; i < 100; ++i) {
    const std::size_t nA = 2 + static_cast<std::size_t>(i % 2);
    const Spectrum spec = harmonic_spectrum(nA);
    const DensityMatrix rho = random_density(nA, 2, 1 + static_cast<std::size_t>(i % (2 * nA)), rng);
    const DensityMatrix moved = apply_local_unitary(rho, haar_unitary(nA, rng), haar_unitary(2, rng));
    lu.residual(std::abs(ctx.avsk_under_test(moved, spec) - ctx.avsk_under_test(rho, spec)));
  }
  ctx.add(lu);

  Tally shift("measures", "shift_invariance", 1e-12);
  Tally scale("measures", "eta_squared_scaling", 1e-12);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = random_density(3, 2, 6, rng);
    const Spectrum spec({unit(rng), unit(rng), unit(rng) - 1.0});
    const double base = ctx.avsk_under_test(rho, spec);
    for (double eta : {-3.0, 0.7, 10.0}) {
      shift.residual(std::abs(ctx.avsk_under_test(rho, spec.shifted(eta)) - base));
      scale.residual(std::abs(ctx.avsk_under_test(rho, spec.scaled(eta)) - eta * eta * base));
    }
  }
  ctx.add(shift);
  ctx.add(scale);

  Tally convex("measures", "convexity", 1e-9);
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix r1 = random_density(2, 2, 1 + static_cast<std::size_t>(i % 4), rng);
    const DensityMatrix r2 = random_density(2, 2, 1 + static_cast<std::size_t>((i / 4) % 4), rng);
    const double p = unit(rng);
    const DensityMatrix mix(p * r1.matrix() + (1.0 - p) * r2.matrix(), 2, 2);
    convex.margin(p * ctx.avsk_under_test(r1, sz) + (1.0 - p) * ctx.avsk_under_test(r2, sz) -
                  ctx.avsk_under_test(mix, sz));
  }
  ctx.add(convex);

  Tally cptp("measures", "monotone_under_channels_on_b", 1e-9);
  for (int i = 0; i < 200; ++i) {
    const std::size_t nB = 2 + static_cast<std::size_t>(i % 2);
    const DensityMatrix rho = random_density(2, nB, 1 + static_cast<std::size_t>(i % (2 * nB)), rng);
    const auto kraus = i % 2 == 0 ? depolarizing_kraus(nB, unit(rng)) : amplitude_damping_kraus(nB, unit(rng));
    const DensityMatrix out = apply_channel_on_b(rho, kraus);
    cptp.margin(ctx.avsk_under_test(rho, sz) - ctx.avsk_under_test(out, sz));
  }
  ctx.add(cptp);

  Tally zero("measures", "zero_iff_maximally_mixed_marginal", 0.0);
  for (int i = 0; i < 1000; ++i) {
    const bool free_state = i % 2 == 0;
    DensityMatrix rho = random_density(2, 2, 1 + static_cast<std::size_t>(i % 4), rng);
    if (free_state) {
      const DensityMatrix b = random_density(2, 1, 1 + static_cast<std::size_t>(i % 2), rng);
      rho = DensityMatrix(tensor(0.5 * ComplexMatrix::Identity(2, 2), b.matrix()), 2, 2);
    }
    const bool is_zero = ctx.avsk_under_test(rho, sz) < 1e-9;
    const ComplexMatrix rebuilt = tensor(0.5 * ComplexMatrix::Identity(2, 2), rho.marginal(Subsystem::B));
    const bool factorizes = max_abs_entry(rebuilt - rho.matrix()) <= 1e-8;
    zero.residual(is_zero == factorizes ? 0.0 : 1.0);
  }
  ctx.add(zero);

  Tally sep("measures", "separable_cap", 1e-9);
  Tally witness("measures", "witness_silent_on_separable", 0.0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t nA = 2 + static_cast<std::size_t>(i % 2);
    const Spectrum spec = harmonic_spectrum(nA);
    const DensityMatrix rho = random_separable(nA, 2, 1 + static_cast<std::size_t>(i % 6), rng);
    sep.margin(spec.prefactor() * (static_cast<double>(nA) - 1.0) - ctx.avsk_under_test(rho, spec));
    witness.residual(entanglement_witness(rho, spec) ? 1.0 : 0.0);
  }
  ctx.add(sep);
  ctx.add(witness);

  Tally pqc("measures", "pqc_saturates_separable_cap", 1e-9);
  for (int i = 0; i < 100; ++i) {
    const double p = unit(rng);
    const ComplexVector a0 = random_pure(2, rng);
    const ComplexVector a1 = random_pure(2, rng);
    const DensityMatrix rho = make_pqc({p, 1.0 - p}, {a0, a1}, haar_unitary(2, rng));
    pqc.residual(std::abs(ctx.avsk_under_test(rho, sz) - sz.prefactor()));
  }
  ctx.add(pqc);

  Tally pure("measures", "pure_state_relation", 1e-9);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t nA = 2 + static_cast<std::size_t>(i % 3);
    const std::size_t nB = 1 + static_cast<std::size_t>((i / 3) % 4);
    const Spectrum spec = harmonic_spectrum(nA);
    const ComplexVector psi = random_pure(nA * nB, rng);
    const DensityMatrix rho = DensityMatrix::pure(psi, nA, nB);
    pure.residual(std::abs(ctx.avsk_under_test(rho, spec) - avsk_pure_relation(psi, nA, nB, spec)));
  }
  ctx.add(pure);
}

void moments_suite(Context& ctx) {
  const Spectrum sz = Spectrum::sigma_z();
  Rng rng = ctx.rng(4);

  Tally twirl("moments", "twirl_commutes_with_u_tensor_u", 1e-9);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
    const ComplexMatrix t = twirl2(ginibre(n * n, n * n, rng), n);
    const ComplexMatrix u = haar_unitary(n, rng);
    const ComplexMatrix uu = tensor(u, u);
    twirl.residual(max_abs_entry(uu * t - t * uu));
  }
  ctx.add(twirl);

  Tally sum_rule("moments", "weingarten_sum_rule", 0.0);
  for (long long n = 4; n <= 8; ++n) {
    BigRational total = 0;
    for (const Perm4& s : Perm4::all()) total += weingarten4_value(s, n);
    const BigRational expected(BigInt(1), BigInt(n * (n + 1) * (n + 2) * (n + 3)));
    sum_rule.residual(total == expected ? 0.0 : 1.0);
  }
  ctx.add(sum_rule);

  Tally poles("moments", "pole_cancellation_small_n", 0.0);
  for (long long n : {2LL, 3LL}) poles.residual(second_moment_pole_free(n) ? 0.0 : 1.0);
  ctx.add(poles);

  Tally nonneg("moments", "variance_nonnegative", 1e-9);
  Tally bounds("moments", "lqu_within_variance_bounds", 1e-6);
  for (int i = 0; i < 10000; ++i) {
    const DensityMatrix rho = random_density(2, 2, 4, rng);
    const double a = avsk(rho, sz);
    const double m2 = second_moment(rho, sz);
    nonneg.margin(m2 - a * a);
    const double l = lqu_two_qubit(rho);
    const auto b = lqu_bounds(a, variance(rho, sz));
    bounds.margin(std::min(l - b.lower, b.upper - l));
  }
  ctx.add(nonneg);
  ctx.add(bounds);

  Tally rel("moments", "boundary_family_relations", 1e-8);
  for (int k = 0; k <= 50; ++k) {
    const double t = k / 50.0;
    const DensityMatrix pure = make_state({FamilyTag::pure_schmidt, {0.5 * t}});
    const DensityMatrix prod = make_state({FamilyTag::family_product, {t}});
    const DensityMatrix sep = make_state({FamilyTag::family_sep, {t}});
    for (const auto* rho : {&pure, &prod}) {
      rel.residual(std::abs(std::sqrt(variance(*rho, sz)) -
                            (avsk(*rho, sz) - lqu_two_qubit(*rho)) / std::sqrt(5.0)));
    }
    rel.residual(std::abs(std::sqrt(variance(sep, sz)) -
                          2.0 * (avsk(sep, sz) - lqu_two_qubit(sep)) / std::sqrt(5.0)));
  }
  ctx.add(rel);

  Tally mc("moments", "variance_matches_sampling", 4.0);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const DensityMatrix rho = random_density(2, 2, 4, rng);
    const auto est = variance_monte_carlo(rho, sz, 100000, {ctx.options.seed, 100 + s});
    mc.residual(std::abs(est.variance - variance(rho, sz)) / est.stderr_variance);
  }
  ctx.add(mc);
}

}  // namespace

std::vector<InvariantResult> run_verify(const VerifyOptions& options) {
  const std::string& s = options.suite;
  if (s != "all" && s != "linalg" && s != "states" && s != "measures" && s != "moments")
    throw InvalidConfig("unknown suite '" + s + "'");
  Context ctx{options, {}};
  if (s == "all" || s == "linalg") linalg_suite(ctx);
  if (s == "all" || s == "states") states_suite(ctx);
  if (s == "all" || s == "measures") measures_suite(ctx);
  if (s == "all" || s == "moments") moments_suite(ctx);
  return ctx.results;
}

bool all_passed(const std::vector<InvariantResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return !results.empty();
}

void write_verify_json(std::ostream& out, const std::vector<InvariantResult>& results) {
  nlohmann::json doc;
  doc["passed"] = all_passed(results);
  doc["invariants"] = nlohmann::json::array();
  for (const auto& r : results) {
    doc["invariants"].push_back({{"suite", r.suite},
                                 {"name", r.name},
                                 {"passed", r.passed},
                                 {"count", r.count},
                                 {"worst_residual", r.worstResidual}});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace probe
