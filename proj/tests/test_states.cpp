#include <gtest/gtest.h>

#include <cmath>

#include "probe/errors.hpp"
#include "probe/states.hpp"

using namespace probe;

TEST(States, SeedDerivationIsStable) {
  const RandomSeed s{42, 0};
  EXPECT_EQ(s.derive(3).seed, s.derive(3).seed);
  EXPECT_EQ(s.derive(3).stream, s.derive(3).stream);
  Rng a = make_rng(s.derive(1));
  Rng b = make_rng(s.derive(2));
  EXPECT_NE(a(), b());
}

TEST(States, HaarUnitaryIsUnitary) {
  Rng rng = make_rng({1, 0});
  for (std::size_t n = 1; n <= 5; ++n) {
    const ComplexMatrix u = haar_unitary(n, rng);
    const auto d = static_cast<Eigen::Index>(n);
    EXPECT_LT(max_abs_entry(u * u.adjoint() - ComplexMatrix::Identity(d, d)), 1e-13);
  }
}

// E|U_00|^2 = 1/n and E|U_00|^4 = 2/(n(n+1)) for Haar U(n).
TEST(States, HaarSecondAndFourthMoments) {
  Rng rng = make_rng({5, 0});
  const int samples = 200000;
  const std::size_t n = 3;
  double m2 = 0;
  double m4 = 0;
  for (int i = 0; i < samples; ++i) {
    const double p = std::norm(haar_unitary(n, rng)(0, 0));
    m2 += p;
    m4 += p * p;
  }
  m2 /= samples;
  m4 /= samples;
  EXPECT_NEAR(m2, 1.0 / 3.0, 5 * std::sqrt(2.0 / 45.0 / samples) + 1e-12);
  EXPECT_NEAR(m4, 1.0 / 6.0, 3e-3);
}

TEST(States, RandomDensityRank) {
  Rng rng = make_rng({3, 0});
  for (std::size_t rank = 1; rank <= 4; ++rank) {
    const DensityMatrix rho = random_density(2, 2, rank, rng);
    std::size_t positive = 0;
    for (Eigen::Index i = 0; i < 4; ++i) positive += rho.eigenvalues()(i) > 1e-12 ? 1 : 0;
    EXPECT_EQ(positive, rank);
  }
  EXPECT_THROW(random_density(2, 2, 5, rng), InvalidRank);
  EXPECT_THROW(random_density(2, 2, 0, rng), InvalidRank);
}

TEST(States, SeededSamplersAreDeterministic) {
  const RandomSeed s{99, 4};
  EXPECT_EQ(random_density(3, 2, 6, s).matrix(), random_density(3, 2, 6, s).matrix());
  EXPECT_EQ(random_separable(2, 3, 4, s).matrix(), random_separable(2, 3, 4, s).matrix());
}

TEST(States, BellAndWerner) {
  const DensityMatrix bell = make_state({FamilyTag::bell, {}});
  EXPECT_NEAR(bell.purity(), 1.0, 1e-14);
  const ComplexVector phi = bell_vector();
  EXPECT_NEAR(std::norm((phi.adjoint() * bell.matrix() * phi).value()), 1.0, 1e-14);
  // q weights the symmetric subspace: q = 0 is the singlet, q = 3/4 is I/4.
  EXPECT_NEAR(make_state({FamilyTag::werner, {0.0}}).purity(), 1.0, 1e-14);
  EXPECT_NEAR(make_state({FamilyTag::werner, {0.75}}).purity(), 0.25, 1e-14);
}

TEST(States, IsotropicFidelity) {
  const ComplexVector phi = bell_vector();
  for (double f : {0.0, 0.25, 0.5, 1.0}) {
    const DensityMatrix rho = make_state({FamilyTag::isotropic, {f}});
    EXPECT_NEAR((phi.adjoint() * rho.matrix() * phi).value().real(), f, 1e-14);
  }
  const DensityMatrix iso3 = make_state({FamilyTag::isotropic, {0.3, 3}});
  EXPECT_EQ(iso3.dimA(), 3u);
}

TEST(States, ParameterValidation) {
  EXPECT_THROW(make_state({FamilyTag::werner, {1.5}}), InvalidParameter);
  EXPECT_THROW(make_state({FamilyTag::cq, {-0.1}}), InvalidParameter);
  EXPECT_THROW(parse_family("no-such-family"), InvalidParameter);
  EXPECT_EQ(parse_family("pure"), FamilyTag::pure_schmidt);
  EXPECT_EQ(parse_family("cq-line"), FamilyTag::cq_line);
  EXPECT_EQ(to_string(FamilyTag::family_pqc), "family_pqc");
}

TEST(States, PureSchmidt) {
  const DensityMatrix rho = make_state({FamilyTag::pure_schmidt, {0.2}});
  const ComplexMatrix a = rho.marginal(Subsystem::A);
  EXPECT_NEAR(a(0, 0).real(), 0.2, 1e-15);
  EXPECT_NEAR(a(1, 1).real(), 0.8, 1e-15);
}

TEST(States, ChannelsPreserveTrace) {
  Rng rng = make_rng({8, 0});
  const DensityMatrix rho = random_density(2, 3, 6, rng);
  for (const auto& kraus : {depolarizing_kraus(3, 0.4), amplitude_damping_kraus(3, 0.3)}) {
    ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
    for (const auto& k : kraus) sum += k.adjoint() * k;
    EXPECT_LT(max_abs_entry(sum - ComplexMatrix::Identity(3, 3)), 1e-14);
    const DensityMatrix out = apply_channel_on_b(rho, kraus);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-14);
    EXPECT_LT(max_abs_entry(out.marginal(Subsystem::A) - rho.marginal(Subsystem::A)), 1e-14);
  }
  // Full depolarization leaves rho_A (x) I/3.
  const DensityMatrix full = apply_channel_on_b(rho, depolarizing_kraus(3, 1.0));
  const ComplexMatrix expected = tensor(rho.marginal(Subsystem::A), ComplexMatrix::Identity(3, 3) / 3.0);
  EXPECT_LT(max_abs_entry(full.matrix() - expected), 1e-14);
}

TEST(States, SeparableSamplerProducesStates) {
  Rng rng = make_rng({11, 0});
  for (std::size_t terms = 1; terms <= 8; ++terms) {
    const DensityMatrix rho = random_separable(2, 2, terms, rng);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
  }
}
