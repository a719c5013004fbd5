#pragma once

#include <memory>

#include "gaugekit/drive_signal.hpp"
#include "gaugekit/gauge_engine.hpp"
#include "gaugekit/operator_core.hpp"

namespace gaugekit {

/// Harmonic dipole carried through a single cavity mode. mu(t) is the mode function seen
/// by the dipole and theta the angle between the polarisation and the velocity.
struct DipoleSpec {
  double m = 1.0;
  double e = 0.2;
  double omega0 = 1.0;
  double omega_c = 1.0;
  double theta = 0.0;
  DriveSignal mu = DriveSignal::gaussian_pulse(1.0, 2.0);
  int n_matter = 24;
  int n_field = 24;
  /// Extra Fock levels per factor kept above the compared block.
  int padding = 4;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

/// Operators live on (n_matter + padding) x (n_field + padding) levels, matter first.
class DipoleModel : public GaugeModel {
 public:
  explicit DipoleModel(DipoleSpec spec);

  const DipoleSpec& spec() const { return spec_; }
  int matter_dim() const { return spec_.n_matter + spec_.padding; }
  int field_dim() const { return spec_.n_field + spec_.padding; }
  int dim() const override { return matter_dim() * field_dim(); }
  BasisTag basis() const override { return coupling_.basis(); }
  /// cos^2 theta.
  double irrotational_alpha() const override;

  /// (p + e(1-a) mu X)^2/(2m) + m w0^2 x^2/2 + (P - e a mu x)^2/2 + wc^2 X^2/2.
  TimeDependentHamiltonian naive(double alpha) const override;
  /// naive - e dmu/dt (a - cos^2 theta) x X.
  TimeDependentHamiltonian correct(double alpha) const override;
  /// G(t) = -e (alpha - alpha') mu(t) x X.
  GeneratorRecipe frame_generator(double alpha, double alpha_prime) const override;
  Operator gauge_unitary(double alpha, double alpha_prime, double t) const override;
  Vector apply_gauge_unitary(double alpha, double alpha_prime, double t, const Vector& psi) const override;

  Operator hamiltonian_naive(double alpha, double t) const;
  Operator correction_X(double alpha, double t) const;
  /// -e a dmu/dt x X, the frame term that treats the Coulomb gauge as irrotational.
  Operator wrong_correction(double alpha, double t) const;
  Operator hamiltonian_correct(double alpha, double t) const;
  /// H_{a'}(t) + wrong_correction(a') - wrong_correction(a_base).
  Operator class_member(double alpha_base, double alpha_prime, double t) const;
  /// correction_X at alpha = 1.
  Operator roentgen_observable(double t) const;
  TimeDependentHamiltonian class_member_hamiltonian(double alpha_base, double alpha_prime) const;

  /// x (x) X.
  const Operator& coupling() const { return coupling_; }

  /// Spectral norm of the leading (n_matter/2) x (n_field/2) block, away from truncation edges.
  double leading_block_norm(const Operator& a) const;

  void set_omit_correction(bool omit) { omit_correction_ = omit; }

 private:
  DipoleSpec spec_;
  Operator h0_;
  Operator pX_;
  Operator xP_;
  Operator xx_;
  Operator XX_;
  Operator coupling_;
  // Eigenbases of x and X; x (x) X is diagonal in their tensor product.
  Matrix vx_;
  Matrix vX_;
  RealVector coupling_values_;
  std::shared_ptr<const GeneratorRecipe::Eigenpair> coupling_eigen_;
  bool omit_correction_ = false;
};

}  // namespace gaugekit
