#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gaugekit/circuit_model.hpp"
#include "oracles.hpp"

using namespace gaugekit;

namespace {

CircuitSpec spec_with(DriveSignal drive, int n = 64) {
  CircuitSpec spec;
  spec.C0 = 3.0;
  spec.C1 = 1.0;
  spec.flux_drive = drive;
  spec.basis = GridBasis(n, 8.0 * oracle::pi);
  return spec;
}

}  // namespace

TEST(ConstraintReduction, RowsAndInverse) {
  for (double a : {0.0, 0.25, 1.0, -0.7}) {
    const ConstraintReduction r = build_reduction(a);
    EXPECT_DOUBLE_EQ(r.G_row(0), a - 1.0);
    EXPECT_DOUBLE_EQ(r.G_row(1), a);
    EXPECT_DOUBLE_EQ(r.S.determinant(), -1.0);
    EXPECT_LT((r.S * r.S_inv - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ConstraintReduction, ReducedFluxesSatisfyConstraint) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng) / 5.0;
    const double q = u(rng);
    const double phi = u(rng);
    const BranchFluxes x = branch_fluxes(q, phi, a);
    EXPECT_NEAR(x.x0 + x.x1, phi, 4e-16 * (std::abs(x.x0) + std::abs(x.x1) + std::abs(phi)));
    const Eigen::Vector2d direct = build_reduction(a).S_inv * Eigen::Vector2d(q, phi);
    EXPECT_NEAR(direct(0), x.x0, 1e-14);
    EXPECT_NEAR(direct(1), x.x1, 1e-14);
  }
}

TEST(BranchFluxes, Examples) {
  const BranchFluxes a = branch_fluxes(0.3, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(a.x0, -0.3);
  EXPECT_DOUBLE_EQ(a.x1, 2.3);
  const BranchFluxes b = branch_fluxes(0.3, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(b.x0, 1.7);
  EXPECT_DOUBLE_EQ(b.x1, 0.3);
}

TEST(GeneralLinearReduction, InvertsRandomStacks) {
  std::mt19937 rng(12);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd G(3, 4);
    Eigen::MatrixXd R(1, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) G(i, j) = n(rng);
    for (int j = 0; j < 4; ++j) R(0, j) = n(rng);
    const LinearReduction red = general_linear_reduction(G, R);
    EXPECT_LT((red.S * red.S_inv - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(GeneralLinearReduction, RejectsSingularAndNonSquare) {
  Eigen::MatrixXd G(1, 2);
  G << 1.0, 1.0;
  Eigen::MatrixXd R(1, 2);
  R << 1.0, 1.0;
  EXPECT_THROW(general_linear_reduction(G, R), std::invalid_argument);
  Eigen::MatrixXd wide(1, 3);
  wide << 1.0, 0.0, 2.0;
  EXPECT_THROW(general_linear_reduction(wide, R), std::invalid_argument);
}

TEST(CircuitSpec, RejectsNonPositiveParameters) {
  CircuitSpec spec;
  spec.C0 = -1.0;
  try {
    spec.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("C0"), std::string::npos);
  }
  spec.C0 = 1.0;
  spec.EJ1 = 0.0;
  EXPECT_THROW(CircuitModel{spec}, std::invalid_argument);
}

TEST(CircuitModel, IrrotationalAlpha) {
  EXPECT_DOUBLE_EQ(CircuitModel(spec_with(DriveSignal::constant(0.0))).irrotational_alpha(), 0.25);
  CircuitSpec spec = spec_with(DriveSignal::constant(0.0));
  spec.C0 = 1.0;
  EXPECT_DOUBLE_EQ(CircuitModel(spec).irrotational_alpha(), 0.5);
}

TEST(CircuitModel, ZeroFluxIsGaugeIndependent) {
  const CircuitModel model(spec_with(DriveSignal::constant(0.0)));
  const Operator h0 = model.hamiltonian_naive(0.0, 1.0);
  for (double a : {0.25, 0.6, 1.0}) {
    EXPECT_LT(max_abs_difference(model.hamiltonian_naive(a, 1.0), h0), 1e-14);
    EXPECT_LT(max_abs_difference(model.hamiltonian_correct(a, 1.0), h0), 1e-14);
  }
}

TEST(CircuitModel, NaiveMatchesDenseOracle) {
  const CircuitModel model(spec_with(DriveSignal::sinusoid(0.7, 0.5)));
  const int n = 64;
  const Matrix p = oracle::momentum_matrix(n, 8.0 * oracle::pi);
  const double dx = 16.0 * oracle::pi / n;
  for (double a : {0.0, 0.4, 1.0}) {
    const double t = 0.8;
    const double phi = 0.7 * std::sin(0.5 * t);
    Matrix h = p * p / 8.0;
    for (int j = 0; j < n; ++j) {
      const double q = -8.0 * oracle::pi + j * dx;
      h(j, j) += -std::cos(a * phi - q) - std::cos((1.0 - a) * phi + q);
    }
    EXPECT_LT((model.hamiltonian_naive(a, t).matrix() - h).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Vector g = ground_state(model.hamiltonian_naive(a, t));
    const double e = g.dot(model.hamiltonian_naive(a, t).apply(g)).real();
    EXPECT_NEAR(e, es.eigenvalues()(0), 1e-10);
  }
}

TEST(CircuitModel, NoJunctionCouplingIsFree) {
  CircuitSpec spec = spec_with(DriveSignal::sinusoid(1.0, 1.0));
  spec.EJ0 = 1e-300;
  spec.EJ1 = 1e-300;
  const CircuitModel model(spec);
  const Operator expected = (0.5 / 4.0) * (model.charge() * model.charge());
  EXPECT_LT(max_abs_difference(model.hamiltonian_naive(0.3, 0.5), expected), 1e-12);
}

TEST(CircuitModel, CorrectionTermExamples) {
  const CircuitModel model(spec_with(DriveSignal::linear_ramp(2.0)));
  EXPECT_LT(max_abs_difference(model.correction_X(0.0, 0.4), -0.5 * model.charge()), 1e-15);
  EXPECT_LT(max_abs_difference(model.correction_X(1.0, 0.4), 1.5 * model.charge()), 1e-15);
  EXPECT_TRUE(model.correction_X(0.25, 0.4).is_zero());
  EXPECT_EQ(max_abs_difference(model.hamiltonian_correct(0.25, 0.4), model.hamiltonian_naive(0.25, 0.4)), 0.0);
}

TEST(CircuitModelProperty, CorrectionNormIsLinearInGauge) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  const CircuitModel model(spec_with(DriveSignal::sinusoid(0.9, 1.3)));
  const double norm_p = model.grid().max_momentum();
  for (int trial = 0; trial < 30; ++trial) {
    const double a = u(rng);
    const double t = u(rng);
    const double expected = std::abs(a - 0.25) * std::abs(0.9 * 1.3 * std::cos(1.3 * t)) * norm_p;
    const double measured = operator_norm(model.hamiltonian_correct(a, t) - model.hamiltonian_naive(a, t));
    EXPECT_NEAR(measured, expected, 1e-10 * std::max(1.0, expected));
  }
}

TEST(CircuitModel, GaugeUnitaryIsTranslation) {
  const CircuitModel model(spec_with(DriveSignal::sinusoid(0.6, 1.0)));
  EXPECT_LT(max_abs_difference(model.gauge_unitary(0.3, 0.3, 0.7), Operator::identity(64, model.basis())), 1e-13);
  const double t = 0.9;
  const Operator r = model.gauge_unitary(1.0, 0.0, t);
  EXPECT_TRUE(r.unitary(1e-12));
  EXPECT_LT(max_abs_difference(r, translation_unitary(model.grid(), 0.6 * std::sin(t))), 1e-12);
  const Operator back = model.gauge_unitary(0.0, 1.0, t);
  EXPECT_LT(max_abs_difference(r * back, Operator::identity(64, model.basis())), 1e-12);
}

TEST(CircuitModel, FrameMapRelatesCorrectHamiltonians) {
  const CircuitModel model(spec_with(DriveSignal::sinusoid(0.4, 1.0), 128));
  for (double t : {0.0, 1.1, 3.0}) {
    const Operator r = model.gauge_unitary(0.0, 1.0, t);
    const Operator frame = model.frame_generator(0.0, 1.0).frame_term(t);
    const Operator mapped = r * model.hamiltonian_correct(0.0, t) * r.adjoint() + frame;
    EXPECT_LT(model.band_limited_norm(mapped - model.hamiltonian_correct(1.0, t)), 1e-8);
    const Operator naive_mapped = r * model.hamiltonian_naive(0.0, t) * r.adjoint() + frame;
    if (std::abs(std::cos(t)) > 0.1) {
      EXPECT_GT(model.band_limited_norm(naive_mapped - model.hamiltonian_naive(1.0, t)), 1e-3);
    }
  }
}
