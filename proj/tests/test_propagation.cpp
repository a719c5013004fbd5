#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gaugekit/circuit_model.hpp"
#include "gaugekit/errors.hpp"
#include "gaugekit/propagation.hpp"
#include "oracles.hpp"

using namespace gaugekit;

namespace {

const BasisTag kTag{"test"};

TimeDependentHamiltonian constant_hamiltonian(const Matrix& h) {
  TimeDependentHamiltonian td(static_cast<int>(h.rows()), kTag);
  td.add_constant(Operator(h, kTag));
  return td;
}

/// H(t) = H0 + t H1 with generic non-commuting H0, H1.
TimeDependentHamiltonian ramped_hamiltonian(std::mt19937& rng, int n) {
  TimeDependentHamiltonian td(n, kTag);
  td.add_constant(Operator(oracle::random_hermitian(n, rng), kTag));
  td.add_term([](double t) { return t; }, Operator(oracle::random_hermitian(n, rng), kTag));
  return td;
}

/// Fine-step classical RK4 written out independently of the library.
Vector reference_rk4(const TimeDependentHamiltonian& h, Vector psi, double t0, double t1, int steps) {
  const double dt = (t1 - t0) / steps;
  const Complex mi(0.0, -1.0);
  auto f = [&](double t, const Vector& v) -> Vector { return mi * (h.evaluate(t).matrix() * v); };
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    const Vector k1 = f(t, psi);
    const Vector k2 = f(t + dt / 2, psi + dt / 2 * k1);
    const Vector k3 = f(t + dt / 2, psi + dt / 2 * k2);
    const Vector k4 = f(t + dt, psi + dt * k3);
    psi += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

}  // namespace

TEST(ExpmKrylov, MatchesDenseExponential) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 10 + static_cast<int>(rng() % 100);
    const Matrix h = oracle::random_hermitian(n, rng, 3.0);
    const Vector v = oracle::random_state(n, rng);
    const double s = 0.5 + trial;
    const Vector krylov = expm_krylov([&](const Vector& in, Vector& out) { out = h * in; }, v, s);
    const Vector dense = expm_hermitian(Operator(h, kTag), s).matrix() * v;
    EXPECT_LT((krylov - dense).norm(), 1e-10) << "n " << n;
    EXPECT_NEAR(krylov.norm(), 1.0, 1e-12);
  }
}

TEST(Propagate, ConstantHamiltonianEqualsSingleExponential) {
  std::mt19937 rng(3);
  const Matrix h = oracle::random_hermitian(20, rng);
  const Vector psi = oracle::random_state(20, rng);
  const Trajectory traj = propagate(constant_hamiltonian(h), psi, 0.0, 2.3, 0.01);
  const Vector exact = expm_hermitian(Operator(h, kTag), 2.3).matrix() * psi;
  EXPECT_LT((traj.final_state() - exact).norm(), 1e-10);
  EXPECT_NEAR(traj.times.back(), 2.3, 1e-14);
}

TEST(Propagate, CoherentStateRevival) {
  const double w = 1.3;
  const FockBasis basis(60, w);
  const LadderSet l = ladder_operators(basis);
  const BasisTag tag = l.a.basis();
  TimeDependentHamiltonian h(60, tag);
  h.add_constant(w * (l.a.adjoint() * l.a) + 0.5 * w * Operator::identity(60, tag));
  Vector psi(60);
  const Complex amplitude(1.5, 0.4);
  Complex term = std::exp(-0.5 * std::norm(amplitude));
  for (int n = 0; n < 60; ++n) {
    psi(n) = term;
    term *= amplitude / std::sqrt(static_cast<double>(n + 1));
  }
  psi /= psi.norm();
  const Trajectory traj = propagate(h, psi, 0.0, 2.0 * oracle::pi / w, 0.01);
  EXPECT_GE(fidelity(traj.final_state(), psi), 1.0 - 1e-6);
}

TEST(Propagate, MidpointIsSecondOrder) {
  std::mt19937 rng(8);
  const TimeDependentHamiltonian h = ramped_hamiltonian(rng, 8);
  const Vector psi = oracle::random_state(8, rng);
  const Vector exact = reference_rk4(h, psi, 0.0, 2.0, 20000);
  PropagationOptions options;
  options.record_stride = 0;
  const double e1 = (propagate(h, psi, 0.0, 2.0, 0.02, options).final_state() - exact).norm();
  const double e2 = (propagate(h, psi, 0.0, 2.0, 0.01, options).final_state() - exact).norm();
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
}

TEST(Propagate, Rk4AgreesWithMidpoint) {
  std::mt19937 rng(12);
  const int n = 6;
  TimeDependentHamiltonian h(n, kTag);
  h.add_constant(Operator(oracle::random_hermitian(n, rng), kTag));
  const DriveSignal drive = DriveSignal::sinusoid(0.5, 1.1);
  h.add_term([drive](double t) { return drive.value(t); }, Operator(oracle::random_hermitian(n, rng), kTag));
  const Vector psi = oracle::random_state(n, rng);
  PropagationOptions mid;
  mid.record_stride = 0;
  PropagationOptions rk = mid;
  rk.method = Method::rk4;
  const Vector a = propagate(h, psi, 0.0, 3.0, 1e-3, mid).final_state();
  const Vector b = propagate(h, psi, 0.0, 3.0, 1e-3, rk).final_state();
  EXPECT_LT((a - b).norm(), 1e-5);
}

TEST(Propagate, NormDriftOverThousandSteps) {
  CircuitSpec spec;
  spec.C0 = 3.0;
  spec.C1 = 1.0;
  spec.flux_drive = DriveSignal::sinusoid(0.4, 1.0);
  spec.basis = GridBasis(128, 8.0 * oracle::pi);
  const CircuitModel model(spec);
  const TimeDependentHamiltonian h = model.correct(0.0);
  const Vector psi = ground_state(h.evaluate(0.0));
  const Trajectory traj = propagate(h, psi, 0.0, 10.0, 0.01);
  EXPECT_EQ(traj.times.size(), 1001u);
  EXPECT_LT(traj.max_norm_drift(), 1e-9);
}

TEST(ExpectationSeries, IdentityIsOne) {
  std::mt19937 rng(4);
  const Matrix h = oracle::random_hermitian(5, rng);
  const Trajectory traj = propagate(constant_hamiltonian(h), oracle::random_state(5, rng), 0.0, 1.0, 0.1);
  for (double v : expectation_series(traj, Operator::identity(5, kTag))) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(ExpectationSeries, FreeParticleDrift) {
  const GridBasis grid(512, 40.0);
  const Operator p = momentum_operator(grid);
  TimeDependentHamiltonian h(512, p.basis());
  h.add_constant(0.5 * (p * p));
  const double k0 = 1.2;
  const double q0 = -5.0;
  Vector psi(512);
  for (int j = 0; j < 512; ++j) {
    const double x = grid.point(j) - q0;
    psi(j) = std::exp(-x * x / 4.0) * std::polar(1.0, k0 * x);
  }
  psi /= psi.norm();
  PropagationOptions options;
  options.observables = {{"q", position_operator(grid)}};
  options.record_stride = 50;
  const Trajectory traj = propagate(h, psi, 0.0, 5.0, 0.01, options);
  const auto& q = traj.expectations.front().second;
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(q[i], q0 + k0 * traj.times[i], 1e-4);
}

TEST(ExpectationSeries, EnergyConservedForStaticFlux) {
  CircuitSpec spec;
  spec.flux_drive = DriveSignal::constant(0.3);
  spec.basis = GridBasis(128, 8.0 * oracle::pi);
  const CircuitModel model(spec);
  const TimeDependentHamiltonian h = model.correct(0.4);
  std::mt19937 rng(2);
  Vector psi = ground_state(h.evaluate(0.0)) + 0.3 * oracle::random_state(128, rng);
  psi /= psi.norm();
  PropagationOptions options;
  options.record_stride = 20;
  const std::vector<double> energy = expectation_series(propagate(h, psi, 0.0, 3.0, 0.01, options), h);
  for (double e : energy) EXPECT_NEAR(e, energy.front(), 1e-9);
}

TEST(Fidelity, Basics) {
  std::mt19937 rng(5);
  const Vector psi = oracle::random_state(7, rng);
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(psi, std::polar(1.0, 0.8) * psi), 1.0, 1e-15);
  Vector a = Vector::Zero(3);
  Vector b = Vector::Zero(3);
  a(0) = 1.0;
  b(1) = 1.0;
  EXPECT_EQ(fidelity(a, b), 0.0);
}

TEST(Propagate, RejectsBadInput) {
  std::mt19937 rng(6);
  const TimeDependentHamiltonian h = constant_hamiltonian(oracle::random_hermitian(4, rng));
  const Vector psi = oracle::random_state(4, rng);
  EXPECT_THROW(propagate(h, 2.0 * psi, 0.0, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(propagate(h, psi, 0.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(propagate(h, psi, 1.0, 0.0, 0.1), std::invalid_argument);

  Matrix skew = Matrix::Zero(4, 4);
  skew(0, 1) = 1.0;
  const auto bad = TimeDependentHamiltonian::from_function([&](double) { return Operator(skew, kTag); }, 4, kTag);
  EXPECT_THROW(propagate(bad, psi, 0.0, 1.0, 0.1), std::invalid_argument);

  TimeDependentHamiltonian blowup(4, kTag);
  blowup.add_term([](double) { return std::nan(""); }, Operator::identity(4, kTag));
  EXPECT_THROW(propagate(blowup, psi, 0.0, 1.0, 0.1), InvariantError);
}

TEST(TrajectoryCsv, HeaderAndFormat) {
  std::mt19937 rng(7);
  PropagationOptions options;
  options.observables = {{"obs", Operator::identity(3, kTag)}};
  const Trajectory traj =
      propagate(constant_hamiltonian(oracle::random_hermitian(3, rng)), oracle::random_state(3, rng), 0.0, 0.2, 0.1,
                options);
  std::ostringstream out;
  write_trajectory_csv(traj, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,norm,obs");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  EXPECT_EQ(out.str().find('\r'), std::string::npos);
}
