#include <gtest/gtest.h>

#include <cmath>

#include "probe/errors.hpp"
#include "probe/measures.hpp"
#include "probe/states.hpp"

using namespace probe;

namespace {

const Spectrum kSz = Spectrum::sigma_z();

// Closed form along the isotropic line, checked independently at F = 1/4 and 1.
double isotropic_oracle(double f) {
  return 1.0 - (2.0 * (1.0 - f) / 3.0 + 2.0 * std::sqrt(f) * std::sqrt((1.0 - f) / 3.0));
}

}  // namespace

TEST(Spectrum, PrefactorAndTransforms) {
  EXPECT_DOUBLE_EQ(kSz.prefactor(), 2.0 / 3.0);
  const Spectrum s({0.0, 1.0, 2.0});
  // (3 * 5 - 9) / (3 * 8)
  EXPECT_DOUBLE_EQ(s.prefactor(), 0.25);
  EXPECT_NEAR(s.shifted(4.0).prefactor(), 0.25, 1e-15);
  EXPECT_NEAR(s.scaled(-2.0).prefactor(), 1.0, 1e-15);
  const auto t = s.traceless();
  EXPECT_NEAR(t[0] + t[1] + t[2], 0.0, 1e-15);
  EXPECT_TRUE(Spectrum({1.0, 1.0}).degenerate());
  EXPECT_EQ(Spectrum({5.0}).prefactor(), 0.0);
  const Spectrum d = s.as_density_spectrum();
  EXPECT_NEAR(d.values()[0] + d.values()[1] + d.values()[2], 1.0, 1e-15);
  EXPECT_THROW(Spectrum({1.0, 1.0}).as_density_spectrum(), InvalidParameter);
}

TEST(SkewInformation, PureStateEqualsVariance) {
  Rng rng = make_rng({21, 0});
  const ComplexVector psi = random_pure(6, rng);
  const DensityMatrix rho = DensityMatrix::pure(psi, 3, 2);
  const LocalObservable h = LocalObservable::from(haar_unitary(3, rng), harmonic_spectrum(3));
  const ComplexMatrix H = h.embedded(2);
  const Complex mean = (psi.adjoint() * H * psi).value();
  const Complex sq = (psi.adjoint() * H * H * psi).value();
  EXPECT_NEAR(skew_information(rho, h), sq.real() - std::norm(mean), 1e-12);
}

TEST(SkewInformation, KernelMatchesDirect) {
  Rng rng = make_rng({22, 0});
  for (std::size_t nB : {1u, 2u, 3u}) {
    const DensityMatrix rho = random_density(3, nB, 2, rng);
    const SkewKernel kernel(rho);
    for (int i = 0; i < 5; ++i) {
      const LocalObservable h = LocalObservable::from(haar_unitary(3, rng), Spectrum({0.3, -1.0, 2.0}));
      EXPECT_NEAR(kernel(h.matrix), skew_information(rho, h), 1e-12);
    }
  }
}

TEST(SkewInformation, CommutingObservableGivesZero) {
  const DensityMatrix rho = make_state({FamilyTag::cc, {0.3}});
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  EXPECT_NEAR(skew_information(rho, LocalObservable{z}), 0.0, 1e-14);
}

TEST(Avsk, Anchors) {
  EXPECT_NEAR(avsk(make_state({FamilyTag::bell, {}}), kSz), 1.0, 1e-12);
  EXPECT_NEAR(avsk(make_state({FamilyTag::product, {1.0, 1.0}}), kSz), 2.0 / 3.0, 1e-12);
  Rng rng = make_rng({23, 0});
  const DensityMatrix rb = random_density(3, 1, 3, rng);
  const DensityMatrix free(tensor(ComplexMatrix::Identity(2, 2) / 2.0, rb.matrix()), 2, 3);
  EXPECT_NEAR(avsk(free, kSz), 0.0, 1e-12);
  const DensityMatrix md = make_state({FamilyTag::max_discordant, {}});
  EXPECT_NEAR(avsk(md, kSz), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(lqu_two_qubit(md), 0.5, 1e-12);
}

TEST(Avsk, MatchesMonteCarlo) {
  Rng rng = make_rng({24, 0});
  for (std::size_t nA : {2u, 3u}) {
    const DensityMatrix rho = random_density(nA, 2, 2 * nA, rng);
    const Spectrum spec = harmonic_spectrum(nA);
    const auto est = avsk_monte_carlo(rho, spec, 40000, {24, nA});
    EXPECT_LT(std::abs(est.mean - avsk(rho, spec)), 4.0 * est.stderr) << "N_A=" << nA;
  }
}

TEST(Avsk, PureRelationAndConcurrence) {
  const ComplexVector psi = schmidt_state(0.2);
  EXPECT_NEAR(concurrence_pure(psi, 2, 2), 2.0 * std::sqrt(0.2 * 0.8), 1e-14);
  const DensityMatrix rho = DensityMatrix::pure(psi, 2, 2);
  const double c = 2.0 * std::sqrt(0.16);
  EXPECT_NEAR(avsk(rho, kSz), (2.0 / 3.0) * (1.0 + c * c / 2.0), 1e-12);
  EXPECT_NEAR(avsk_pure_relation(psi, 2, 2, kSz), avsk(rho, kSz), 1e-12);
}

TEST(Avsk, SeparableAndCorrelationParts) {
  // For a product state the correlation part vanishes.
  const DensityMatrix prod = make_state({FamilyTag::product, {0.3, 0.8}});
  EXPECT_NEAR(avsk_corr(prod, kSz), 0.0, 1e-12);
  EXPECT_FALSE(entanglement_witness(prod, kSz));
  EXPECT_TRUE(entanglement_witness(make_state({FamilyTag::bell, {}}), kSz));
}

TEST(Lqu, IsotropicClosedForm) {
  for (int k = 0; k <= 100; ++k) {
    const double f = k / 100.0;
    const DensityMatrix rho = make_state({FamilyTag::isotropic, {f}});
    EXPECT_NEAR(lqu_two_qubit(rho), isotropic_oracle(f), 1e-8) << "F=" << f;
    EXPECT_NEAR(avsk(rho, kSz), isotropic_oracle(f), 1e-8) << "F=" << f;
  }
  EXPECT_NEAR(isotropic_oracle(0.5), (2.0 - std::sqrt(3.0)) / 3.0, 1e-15);
}

TEST(Lqu, MinimizerAgreesWithClosedForm) {
  Rng rng = make_rng({25, 0});
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = random_density(2, 2, 1 + static_cast<std::size_t>(i % 4), rng);
    EXPECT_NEAR(lqu_minimize(rho, kSz, 8, {25, static_cast<std::uint64_t>(i)}), lqu_two_qubit(rho), 1e-6);
  }
}

TEST(Lqu, DispatcherScalesWithGap) {
  const DensityMatrix rho = make_state({FamilyTag::werner, {0.7}});
  EXPECT_NEAR(lqu(rho, Spectrum({3.0, -1.0})), 4.0 * lqu_two_qubit(rho), 1e-12);
  EXPECT_NEAR(lqu(rho, Spectrum({1.5, 0.5})), 0.25 * lqu_two_qubit(rho), 1e-12);
}

TEST(Lqu, QutritOracles) {
  const Spectrum spec = harmonic_spectrum(3);
  ComplexVector product = ComplexVector::Zero(9);
  product(0) = 1;
  EXPECT_NEAR(lqu(DensityMatrix::pure(product, 3, 3), spec, 4), 0.0, 1e-7);
  // Maximally entangled: every local observable has variance Tr[L^2] / 3.
  ComplexVector me = ComplexVector::Zero(9);
  for (int i = 0; i < 3; ++i) me(i * 3 + i) = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(lqu(DensityMatrix::pure(me, 3, 3), spec, 4), 2.0 / 3.0, 1e-7);
}

TEST(PrecisionBounds, InverseSkew) {
  const DensityMatrix bell = make_state({FamilyTag::bell, {}});
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  const auto b = precision_bounds(bell, LocalObservable{z});
  EXPECT_NEAR(b.lower, 1.0 / 8.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0 / 4.0, 1e-12);
  const DensityMatrix mixed = make_state({FamilyTag::werner, {0.75}});
  EXPECT_THROW(precision_bounds(mixed, LocalObservable{z}), ZeroSusceptibility);
}

TEST(Report, CheckFlagsOrderingViolation) {
  MeasureReport r;
  r.avsk = 0.2;
  r.lqu = 0.3;
  EXPECT_TRUE(check_report(r, kSz, 2).has_value());
  r.lqu = 0.2;
  EXPECT_FALSE(check_report(r, kSz, 2).has_value());
}
