#pragma once

#include <Eigen/Dense>

#include "gaugekit/drive_signal.hpp"
#include "gaugekit/gauge_engine.hpp"
#include "gaugekit/operator_core.hpp"

namespace gaugekit {

/// Two Josephson junctions in a loop threaded by an external flux phi(t).
/// Fluxes are in units where the flux quantum is 2*pi.
struct CircuitSpec {
  double C0 = 1.0;
  double C1 = 1.0;
  double EJ0 = 1.0;
  double EJ1 = 1.0;
  DriveSignal flux_drive = DriveSignal::constant(0.0);
  GridBasis basis{512, 8.0 * 3.14159265358979323846};

  double total_capacitance() const { return C0 + C1; }
  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

/// Node-flux reduction x = S^-1 (q, phi) for the gauge with G = (alpha - 1, alpha), R = (1, 1).
struct ConstraintReduction {
  double alpha = 0.0;
  Eigen::RowVector2d G_row;
  Eigen::RowVector2d R_row;
  Eigen::Matrix2d S;
  Eigen::Matrix2d S_inv;
};

ConstraintReduction build_reduction(double alpha);

struct LinearReduction {
  Eigen::MatrixXd S;
  Eigen::MatrixXd S_inv;
};

/// Stacks G over R and inverts. Throws std::invalid_argument when the stack is not square
/// or is singular (the gauge choice does not eliminate the constraint).
LinearReduction general_linear_reduction(const Eigen::MatrixXd& G, const Eigen::MatrixXd& R);

struct BranchFluxes {
  double x0;
  double x1;
};

/// x0 = alpha*phi - q, x1 = (1 - alpha)*phi + q.
BranchFluxes branch_fluxes(double q, double phi, double alpha);

class CircuitModel : public GaugeModel {
 public:
  explicit CircuitModel(CircuitSpec spec);

  const CircuitSpec& spec() const { return spec_; }
  const GridBasis& grid() const { return spec_.basis; }
  const Operator& charge() const { return p_; }

  int dim() const override { return spec_.basis.n_points(); }
  BasisTag basis() const override { return p_.basis(); }
  double irrotational_alpha() const override;

  /// p^2/(2C) - EJ0 cos(alpha phi - q) - EJ1 cos((1 - alpha) phi + q).
  TimeDependentHamiltonian naive(double alpha) const override;
  /// naive + (alpha - C1/C) dphi/dt p.
  TimeDependentHamiltonian correct(double alpha) const override;
  /// G(t) = (alpha - alpha') phi(t) p.
  GeneratorRecipe frame_generator(double alpha, double alpha_prime) const override;

  double correction_coefficient(double alpha, double t) const;
  Operator hamiltonian_naive(double alpha, double t) const;
  Operator correction_X(double alpha, double t) const;
  Operator hamiltonian_correct(double alpha, double t) const;

  /// Drops the correction term from correct(); used to check that the verification suite notices.
  void set_omit_correction(bool omit) { omit_correction_ = omit; }

  /// Spectral norm of P A P with P the projector on |k| <= k_max - 2, where cos(q) cannot alias.
  double band_limited_norm(const Operator& a) const;

 private:
  CircuitSpec spec_;
  Operator p_;
  Operator kinetic_;
  Operator cos_q_;
  Operator sin_q_;
  Operator band_;
  bool omit_correction_ = false;
};

}  // namespace gaugekit
