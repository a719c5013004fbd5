#include "gaugekit/propagation.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gaugekit/csv_writer.hpp"
#include "gaugekit/errors.hpp"

namespace gaugekit {

std::string_view to_string(Method m) { return m == Method::midpoint_exp ? "midpoint_exp" : "rk4"; }

Method method_from_string(std::string_view name) {
  if (name == "midpoint_exp") return Method::midpoint_exp;
  if (name == "rk4") return Method::rk4;
  throw std::invalid_argument("unknown propagation method '" + std::string(name) + "'");
}

namespace {

struct LanczosAttempt {
  bool converged = false;
  Vector result;
};

LanczosAttempt lanczos_step(const LinearMap& apply, const Vector& v, double beta0, double s, double tol,
                            int max_krylov) {
  const auto n = v.size();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(max_krylov, n));
  Matrix basis(n, m_max);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = v / beta0;
  Vector w(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
  for (int j = 0; j < m_max; ++j) {
    apply(basis.col(j), w);
    alpha.push_back(basis.col(j).dot(w).real());
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector overlap = basis.leftCols(j + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(j + 1) * overlap;
    }
    const double b = w.norm();
    const int m = j + 1;

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd();
    small.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = small.eigenvectors();
    const Vector phases = (Complex(0.0, -s) * small.eigenvalues().cast<Complex>()).array().exp();
    const Vector y = q.cast<Complex>() * phases.cwiseProduct(q.row(0).transpose().cast<Complex>());

    const bool breakdown = b <= 1e-14 * beta0 || m == n;
    if (breakdown || b * std::abs(y(m - 1)) < tol) {
      return {true, beta0 * (basis.leftCols(m) * y)};
    }
    if (j + 1 < m_max) {
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
  }
  return {false, {}};
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

Vector expm_krylov(const LinearMap& apply, const Vector& v, double s, double tol, int max_krylov) {
  const double beta0 = v.norm();
  if (beta0 == 0.0 || s == 0.0) return v;
  Vector state = v;
  double remaining = s;
  double step = s;
  int halvings = 0;
  while (remaining != 0.0) {
    if (std::abs(step) > std::abs(remaining)) step = remaining;
    LanczosAttempt attempt = lanczos_step(apply, state, state.norm(), step, tol, max_krylov);
    if (!attempt.converged) {
      if (++halvings > 60) throw InvariantError("expm_krylov: Lanczos failed to converge");
      step *= 0.5;
      continue;
    }
    state = std::move(attempt.result);
    remaining -= step;
    if (std::abs(remaining) < 1e-15 * std::abs(s)) remaining = 0.0;
  }
  return state;
}

double Trajectory::max_norm_drift() const {
  double drift = 0.0;
  for (double n : norms) drift = std::max(drift, std::abs(n - 1.0));
  return drift;
}

Trajectory propagate(const TimeDependentHamiltonian& h, const Vector& psi0, double t0, double t1, double dt,
                     const PropagationOptions& options) {
  if (psi0.size() != h.dim()) throw std::invalid_argument("propagate: state dimension does not match Hamiltonian");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("propagate: initial state is not normalised");
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (t1 < t0) throw std::invalid_argument("propagate: t1 must not precede t0");
  if (h.is_function_based() && !h.evaluate(t0).hermitian()) {
    throw std::invalid_argument("propagate: H(t) is not Hermitian at t0");
  }

  const auto steps = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9));
  const double step = steps > 0 ? (t1 - t0) / static_cast<double>(steps) : 0.0;

  Trajectory traj;
  for (const auto& obs : options.observables) traj.expectations.emplace_back(obs.name, std::vector<double>{});
  auto record = [&](double t, const Vector& psi) {
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.norms.push_back(psi.norm());
    for (std::size_t i = 0; i < options.observables.size(); ++i) {
      traj.expectations[i].second.push_back(psi.dot(options.observables[i].op.apply(psi)).real());
    }
  };

  Vector psi = psi0;
  record(t0, psi);
  for (long n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * step;
    if (options.method == Method::midpoint_exp) {
      const FrozenHamiltonian frozen = h.freeze(t + 0.5 * step);
      psi = expm_krylov([&frozen](const Vector& in, Vector& out) { frozen.apply(in, out); }, psi, step,
                        options.krylov_tol);
    } else {
      const Complex minus_i(0.0, -1.0);
      const FrozenHamiltonian h0 = h.freeze(t);
      const FrozenHamiltonian hm = h.freeze(t + 0.5 * step);
      const FrozenHamiltonian h1 = h.freeze(t + step);
      const Vector k1 = minus_i * h0.apply(psi);
      const Vector k2 = minus_i * hm.apply(psi + 0.5 * step * k1);
      const Vector k3 = minus_i * hm.apply(psi + 0.5 * step * k2);
      const Vector k4 = minus_i * h1.apply(psi + step * k3);
      psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!all_finite(psi)) throw InvariantError("propagate: state became non-finite");
    const bool last = n + 1 == steps;
    const bool strided = options.record_stride > 0 && (n + 1) % options.record_stride == 0;
    if (last || strided) record(t0 + static_cast<double>(n + 1) * step, psi);
  }
  return traj;
}

std::vector<double> expectation_series(const Trajectory& trajectory, const Operator& op) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (const auto& psi : trajectory.states) out.push_back(psi.dot(op.apply(psi)).real());
  return out;
}

std::vector<double> expectation_series(const Trajectory& trajectory, const TimeDependentHamiltonian& h) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const auto& psi = trajectory.states[i];
    out.push_back(psi.dot(h.freeze(trajectory.times[i]).apply(psi)).real());
  }
  return out;
}

double fidelity(const Vector& psi, const Vector& chi) {
  if (psi.size() != chi.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::abs(psi.dot(chi));
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  std::vector<std::string> header{"t", "norm"};
  for (const auto& [name, _] : trajectory.expectations) header.push_back(name);
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    std::vector<double> row{trajectory.times[i], trajectory.norms[i]};
    for (const auto& [_, series] : trajectory.expectations) row.push_back(series[i]);
    csv.row(row);
  }
}

}  // namespace gaugekit
