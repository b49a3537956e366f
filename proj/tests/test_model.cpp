#include <gtest/gtest.h>

#include <random>

#include "xyness/model.hpp"
#include "xyness/skewlinalg.hpp"

using namespace xyness;

namespace {

// mpmath references (tests/oracles/scalar_oracles.py)
constexpr double kKappaRef = -0.17709047923452337;  // gamma=0.5 lambda=0.3 xi=1
constexpr double kMuRef = 0.58309518948453005;      // gamma=0.5 lambda=0.3 xi=pi/2
constexpr double kPhiRef = 0.6836327054524381;      // sh 2 / (ch 2 + ch 1)

std::vector<ModelParams> random_params(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> g(-0.95, 0.95), l(-2.0, 2.0), b(0.2, 6.0);
  std::vector<ModelParams> out;
  while (static_cast<int>(out.size()) < count) out.push_back(ModelParams::make(g(rng), l(rng), b(rng), b(rng)));
  return out;
}

}  // namespace

TEST(ModelParams, RejectsInvalid) {
  EXPECT_THROW(ModelParams::make(1.0, 0.3, 1, 3), std::invalid_argument);
  EXPECT_THROW(ModelParams::make(-1.2, 0.3, 1, 3), std::invalid_argument);
  EXPECT_THROW(ModelParams::make(0.5, 0.3, 0, 3), std::invalid_argument);
  EXPECT_THROW(ModelParams::make(0.5, 0.3, 1, -2), std::invalid_argument);
  EXPECT_THROW(ModelParams::make(NAN, 0.3, 1, 3), std::invalid_argument);
  EXPECT_THROW(ModelParams::make(0.5, INFINITY, 1, 3), std::invalid_argument);
}

TEST(ModelParams, NormalizesReservoirOrder) {
  const auto p = ModelParams::make(0.5, 0.3, 3, 1);
  EXPECT_TRUE(p.swapped());
  EXPECT_EQ(p.beta_l(), 1);
  EXPECT_EQ(p.beta_r(), 3);
  EXPECT_EQ(p.beta(), 2);
  EXPECT_EQ(p.delta(), 1);

  const auto q = ModelParams::make(0.5, 0.3, 3, 1, Orientation::AsGiven);
  EXPECT_FALSE(q.swapped());
  EXPECT_EQ(q.delta(), -1);
}

TEST(ModelParams, CriticalAndEquilibriumFlags) {
  EXPECT_TRUE(ModelParams::make(0, 0.5, 1, 3).critical());
  EXPECT_TRUE(ModelParams::make(0, -1, 1, 3).critical());
  EXPECT_FALSE(ModelParams::make(0, 1.5, 1, 3).critical());
  EXPECT_TRUE(ModelParams::make(0.4, 1, 1, 3).critical());
  EXPECT_TRUE(ModelParams::make(0.4, -1, 1, 3).critical());
  EXPECT_FALSE(ModelParams::make(0.4, 0.99, 1, 3).critical());
  EXPECT_TRUE(ModelParams::make(0.4, 0.2, 2, 2).equilibrium());
  EXPECT_FALSE(ModelParams::make(0.4, 0.2, 2, 2.5).equilibrium());
}

TEST(Dispersion, OracleValues) {
  const auto p = ModelParams::make(0.5, 0.3, 1, 3);
  EXPECT_NEAR(kappa(1.0, p), kKappaRef, 1e-15);
  EXPECT_NEAR(mu(std::numbers::pi / 2, p), kMuRef, 1e-15);
  // beta = 2, delta = 1, mu = 1
  EXPECT_NEAR(phi_of_mu(2.0, 1.0, p), kPhiRef, 1e-15);
}

TEST(Dispersion, KappaOddMuEven) {
  for (const auto& p : random_params(20, 1)) {
    for (int k = 1; k < 200; ++k) {
      const double xi = kTwoPi * k / 200;
      EXPECT_NEAR(kappa(-xi, p), -kappa(xi, p), 1e-14);
      EXPECT_NEAR(kappa(kTwoPi - xi, p), -kappa(xi, p), 1e-13);
      EXPECT_NEAR(mu(-xi, p), mu(xi, p), 1e-14);
      EXPECT_GE(mu(xi, p), 0);
    }
  }
}

TEST(Dispersion, SignOfZeroIsZero) {
  const auto p = ModelParams::make(0.5, 0.3, 1, 3);
  EXPECT_EQ(sign_kappa(0.0, p), 0);
  EXPECT_EQ(sign_of(0.0), 0);
  EXPECT_EQ(sign_of(-0.0), 0);
  EXPECT_EQ(sign_of(-3.0), -1);
}

TEST(Dispersion, KappaZerosAreZeros) {
  for (const auto& p : random_params(20, 2))
    for (double z : kappa_zeros(p)) {
      EXPECT_GE(z, 0);
      EXPECT_LT(z, kTwoPi);
      EXPECT_NEAR(kappa(z, p), 0, 1e-12);
    }
}

TEST(Dispersion, MuZerosAtCriticality) {
  const auto xx = ModelParams::make(0, 0.5, 1, 3);
  ASSERT_EQ(mu_zeros(xx).size(), 2u);
  for (double z : mu_zeros(xx)) EXPECT_NEAR(mu(z, xx), 0, 1e-15);
  const auto ising = ModelParams::make(0.6, 1, 1, 3);
  ASSERT_EQ(mu_zeros(ising).size(), 1u);
  EXPECT_EQ(mu(0.0, ising), 0.0);
  // cancellation-free near the zero: mu ~ gamma |xi| for small xi
  EXPECT_NEAR(mu(1e-9, ising) / 1e-9, 0.6, 1e-6);
  EXPECT_TRUE(mu_zeros(ModelParams::make(0.5, 0.3, 1, 3)).empty());
}

TEST(Dispersion, MuSupMatchesGrid) {
  for (const auto& p : random_params(30, 3)) {
    double grid = 0;
    for (int k = 0; k < 20000; ++k) grid = std::max(grid, mu(kTwoPi * k / 20000, p));
    EXPECT_GE(mu_sup(p) + 1e-15, grid);
    EXPECT_NEAR(mu_sup(p), grid, 1e-6);
    EXPECT_NEAR(mu_sup(p), 1 + std::abs(p.lambda()), 1e-14);
  }
}

TEST(Thermal, PhiSumDifferenceAreTanh) {
  for (const auto& p : random_params(20, 4))
    for (double m : {1e-6, 0.1, 0.7, 1.3, 2.9}) {
      const double fb = phi_of_mu(p.beta(), m, p), fd = phi_of_mu(p.delta(), m, p);
      EXPECT_NEAR(fb + fd, std::tanh(p.beta_r() * m / 2), 1e-14);
      EXPECT_NEAR(fb - fd, std::tanh(p.beta_l() * m / 2), 1e-14);
    }
}

TEST(Thermal, NoOverflowAtLargeBeta) {
  const auto p = ModelParams::make(0.5, 0.3, 800, 1500);
  const double v = phi_of_mu(p.beta(), 2.0, p);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(phi_of_mu(p.delta(), 2.0, p)));
  EXPECT_EQ(log_tanh(800.0), 0.0);
  EXPECT_NEAR(log_tanh(1e-8), std::log(1e-8), 1e-12);
}

TEST(Symbol, SingularValuesAreTanhPair) {
  for (const auto& p : random_params(20, 5)) {
    for (int k = 0; k < 64; ++k) {
      const double xi = kTwoPi * (k + 0.37) / 64;
      const auto sv = singular_values(symbol(xi, p).entries);
      const double m = mu(xi, p);
      EXPECT_NEAR(sv[0], std::tanh(p.beta_l() * m / 2), 1e-13);
      EXPECT_NEAR(sv[1], std::tanh(p.beta_r() * m / 2), 1e-13);
    }
  }
}

TEST(Symbol, QFactorIsUnimodular) {
  for (const auto& p : random_params(10, 6))
    for (int k = 0; k < 50; ++k) EXPECT_NEAR(std::abs(q_factor(kTwoPi * (k + 0.5) / 50, p)), 1.0, 1e-14);
  EXPECT_THROW(q_factor(0.0, ModelParams::make(0.6, 1, 1, 3)), DomainError);
}

TEST(Symbol, EquilibriumDiagonalVanishes) {
  const auto p = ModelParams::make(-0.3, 0.8, 2.5, 2.5);
  for (int k = 0; k < 100; ++k) {
    const auto a = symbol(kTwoPi * (k + 0.5) / 100, p).entries;
    EXPECT_EQ(a(0, 0), cplx(0));
    EXPECT_EQ(a(1, 1), cplx(0));
  }
}

TEST(TwoPoint, RoutesAgreeAndAreHermitianProjectionsOfOccupations) {
  for (const auto& p : random_params(20, 7)) {
    for (int k = 0; k < 64; ++k) {
      const double xi = kTwoPi * (k + 0.5) / 64;
      const Mat2 s = two_point_operator(xi, p);
      EXPECT_LE((s - two_point_fermi(xi, p)).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_LE((s - s.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
      Eigen::SelfAdjointEigenSolver<Mat2> es(s);
      EXPECT_GE(es.eigenvalues()(0), -1e-15);
      EXPECT_LE(es.eigenvalues()(1), 1 + 1e-15);
    }
  }
}

TEST(TwoPoint, CriticalPointIsDomainError) {
  const auto p = ModelParams::make(0.6, 1, 1, 3);
  EXPECT_THROW(two_point_pauli(0.0, p), DomainError);
  EXPECT_NO_THROW(two_point_fermi(0.0, p));
}
