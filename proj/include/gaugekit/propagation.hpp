#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gaugekit/hamiltonian.hpp"
#include "gaugekit/operator_core.hpp"

namespace gaugekit {

enum class Method { midpoint_exp, rk4 };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

using LinearMap = std::function<void(const Vector& in, Vector& out)>;

/// exp(-i s A) v for Hermitian A given only through its action, by Lanczos with full
/// reorthogonalisation. Steps are subdivided until the a-posteriori error estimate is below
/// tol * |v|. The result is unitary up to the orthogonality of the Krylov basis.
Vector expm_krylov(const LinearMap& apply, const Vector& v, double s, double tol = 1e-13, int max_krylov = 40);

struct Observable {
  std::string name;
  Operator op;
};

struct PropagationOptions {
  Method method = Method::midpoint_exp;
  /// Record every stride-th step; 0 records only the initial and final states.
  int record_stride = 1;
  std::vector<Observable> observables;
  double krylov_tol = 1e-13;
};

/// Schrodinger-picture trajectory. Norms are recorded, never renormalised.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> norms;
  std::vector<std::pair<std::string, std::vector<double>>> expectations;

  const Vector& final_state() const { return states.back(); }
  double max_norm_drift() const;
};

/// Integrates i dpsi/dt = H(t) psi from t0 to t1 with a step no larger than dt.
/// midpoint_exp: psi <- exp(-i H(t + dt/2) dt) psi. rk4: classical Runge-Kutta.
/// Throws std::invalid_argument for a non-normalised psi0 or a non-Hermitian H(t) sample,
/// InvariantError for a non-finite state.
Trajectory propagate(const TimeDependentHamiltonian& h, const Vector& psi0, double t0, double t1, double dt,
                     const PropagationOptions& options = {});

std::vector<double> expectation_series(const Trajectory& trajectory, const Operator& op);
/// <H(t)> along the trajectory.
std::vector<double> expectation_series(const Trajectory& trajectory, const TimeDependentHamiltonian& h);

/// |<psi|chi>|.
double fidelity(const Vector& psi, const Vector& chi);

/// Columns: t, norm, then one per named observable.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace gaugekit
