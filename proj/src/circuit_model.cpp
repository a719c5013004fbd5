#include "gaugekit/circuit_model.hpp"

#include <cmath>
#include <stdexcept>

namespace gaugekit {

void CircuitSpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(C0, "C0");
  positive(C1, "C1");
  positive(EJ0, "EJ0");
  positive(EJ1, "EJ1");
}

ConstraintReduction build_reduction(double alpha) {
  ConstraintReduction r;
  r.alpha = alpha;
  r.G_row << alpha - 1.0, alpha;
  r.R_row << 1.0, 1.0;
  r.S << r.G_row, r.R_row;
  const double det = r.S.determinant();
  if (std::abs(det + 1.0) > 1e-12) throw std::logic_error("build_reduction: determinant is not -1");
  r.S_inv << -1.0, alpha, 1.0, 1.0 - alpha;
  return r;
}

LinearReduction general_linear_reduction(const Eigen::MatrixXd& G, const Eigen::MatrixXd& R) {
  if (G.cols() != R.cols() || G.rows() + R.rows() != G.cols()) {
    throw std::invalid_argument("general_linear_reduction: stacked (G; R) must be square");
  }
  const auto n = G.cols();
  Eigen::MatrixXd S(n, n);
  S << G, R;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("general_linear_reduction: singular reduction, constraint not eliminated");
  }
  return {S, lu.inverse()};
}

BranchFluxes branch_fluxes(double q, double phi, double alpha) {
  const double x0 = alpha * phi - q;
  return {x0, phi - x0};
}

CircuitModel::CircuitModel(CircuitSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const GridBasis& g = spec_.basis;
  p_ = momentum_operator(g);
  kinetic_ = (0.5 / spec_.total_capacitance()) * (p_ * p_);
  cos_q_ = position_function(g, [](double q) { return std::cos(q); });
  sin_q_ = position_function(g, [](double q) { return std::sin(q); });
  band_ = band_projector(g, g.max_momentum() - 2.0);
}

double CircuitModel::irrotational_alpha() const { return spec_.C1 / spec_.total_capacitance(); }

double CircuitModel::correction_coefficient(double alpha, double t) const {
  return (alpha - irrotational_alpha()) * spec_.flux_drive.derivative(t);
}

TimeDependentHamiltonian CircuitModel::naive(double alpha) const {
  TimeDependentHamiltonian h(dim(), basis(), {alpha, Variant::naive});
  const DriveSignal phi = spec_.flux_drive;
  const double ej0 = spec_.EJ0;
  const double ej1 = spec_.EJ1;
  // cos(a - q) = cos a cos q + sin a sin q; cos(b + q) = cos b cos q - sin b sin q.
  h.add_constant(kinetic_);
  h.add_term(
      [=](double t) {
        const double f = phi.value(t);
        return -ej0 * std::cos(alpha * f) - ej1 * std::cos((1.0 - alpha) * f);
      },
      cos_q_);
  h.add_term(
      [=](double t) {
        const double f = phi.value(t);
        return -ej0 * std::sin(alpha * f) + ej1 * std::sin((1.0 - alpha) * f);
      },
      sin_q_);
  return h;
}

TimeDependentHamiltonian CircuitModel::correct(double alpha) const {
  TimeDependentHamiltonian h = naive(alpha);
  h.set_label({alpha, Variant::correct});
  if (omit_correction_) return h;
  const double offset = alpha - irrotational_alpha();
  const DriveSignal phi = spec_.flux_drive;
  h.add_term([=](double t) { return offset * phi.derivative(t); }, p_);
  return h;
}

GeneratorRecipe CircuitModel::frame_generator(double alpha, double alpha_prime) const {
  return GeneratorRecipe(spec_.flux_drive.scaled(alpha - alpha_prime), p_);
}

Operator CircuitModel::hamiltonian_naive(double alpha, double t) const { return naive(alpha).evaluate(t); }

Operator CircuitModel::correction_X(double alpha, double t) const {
  return correction_coefficient(alpha, t) * p_;
}

Operator CircuitModel::hamiltonian_correct(double alpha, double t) const { return correct(alpha).evaluate(t); }

double CircuitModel::band_limited_norm(const Operator& a) const {
  const Matrix& p = band_.matrix();
  return operator_norm(Operator(p * a.matrix() * p, a.basis()));
}

}  // namespace gaugekit
