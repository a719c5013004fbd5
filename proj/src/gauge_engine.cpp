#include "gaugekit/gauge_engine.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gaugekit/errors.hpp"

namespace gaugekit {

GeneratorRecipe::GeneratorRecipe(DriveSignal profile, Operator generator) { add(profile, std::move(generator)); }

GeneratorRecipe& GeneratorRecipe::add(DriveSignal profile, Operator generator) {
  std::shared_ptr<const Eigenpair> eigen;
  if (generator.structure() == Structure::general && generator.hermitian()) {
    const Matrix h = 0.5 * (generator.matrix() + generator.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    eigen = std::make_shared<const Eigenpair>(solver.eigenvalues(), solver.eigenvectors());
  }
  return add(profile, std::move(generator), std::move(eigen));
}

GeneratorRecipe& GeneratorRecipe::add(DriveSignal profile, Operator generator,
                                      std::shared_ptr<const Eigenpair> eigen) {
  if (!generator.hermitian()) throw std::invalid_argument("GeneratorRecipe: generator must be Hermitian");
  if (!terms_.empty() && (generator.dim() != dim() || !(generator.basis() == terms_.front().generator.basis()))) {
    throw std::invalid_argument("GeneratorRecipe: generator dimension or basis mismatch");
  }
  if (eigen && eigen->first.size() != generator.dim()) {
    throw std::invalid_argument("GeneratorRecipe: eigendecomposition does not match generator");
  }
  terms_.push_back(Term{profile, std::move(generator), std::move(eigen)});
  return *this;
}

int GeneratorRecipe::dim() const { return terms_.empty() ? 0 : terms_.front().generator.dim(); }

bool GeneratorRecipe::commuting(double tol) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      const auto& a = terms_[i].generator;
      const auto& b = terms_[j].generator;
      const double scale = a.max_abs() * b.max_abs();
      if (commutator(a, b).max_abs() > tol * std::max(scale, 1e-300)) return false;
    }
  }
  return true;
}

Operator GeneratorRecipe::generator(double t) const {
  if (terms_.empty()) throw std::logic_error("GeneratorRecipe: empty recipe");
  Operator g = terms_.front().profile.value(t) * terms_.front().generator;
  for (std::size_t i = 1; i < terms_.size(); ++i) g += terms_[i].profile.value(t) * terms_[i].generator;
  return g;
}

Operator GeneratorRecipe::generator_rate(double t) const {
  if (terms_.empty()) throw std::logic_error("GeneratorRecipe: empty recipe");
  Operator g = terms_.front().profile.derivative(t) * terms_.front().generator;
  for (std::size_t i = 1; i < terms_.size(); ++i) g += terms_[i].profile.derivative(t) * terms_[i].generator;
  return g;
}

Operator GeneratorRecipe::unitary(double t) const {
  if (terms_.size() == 1 && terms_.front().eigen) {
    const auto& [values, vectors] = *terms_.front().eigen;
    const double c = terms_.front().profile.value(t);
    const Vector phases = (Complex(0.0, c) * values.cast<Complex>()).array().exp();
    return Operator(vectors * phases.asDiagonal() * vectors.adjoint(), terms_.front().generator.basis());
  }
  return expm_hermitian(generator(t), -1.0);
}

Operator GeneratorRecipe::frame_term(double t) const { return -1.0 * generator_rate(t); }

GeneratorRecipe GeneratorRecipe::negated() const {
  GeneratorRecipe out;
  for (const auto& term : terms_) {
    Term copy = term;
    copy.profile = term.profile.scaled(-1.0);
    out.terms_.push_back(std::move(copy));
  }
  return out;
}

TimeDependentHamiltonian transform(const TimeDependentHamiltonian& h, const GeneratorRecipe& recipe) {
  HamiltonianLabel label = h.label();
  label.variant = Variant::transformed;
  if (recipe.empty()) {
    TimeDependentHamiltonian copy = h;
    copy.set_label(label);
    return copy;
  }
  if (recipe.dim() != h.dim()) throw std::invalid_argument("transform: generator dimension does not match Hamiltonian");
  if (!recipe.commuting()) {
    throw NonCommutingGenerator("transform: generator terms do not commute; a time-ordered frame is required");
  }
  auto evaluator = [h, recipe](double t) {
    const Operator u = recipe.unitary(t);
    const Operator rotated(u.matrix() * h.evaluate(t).matrix() * u.matrix().adjoint(), h.basis());
    return rotated + recipe.frame_term(t);
  };
  return TimeDependentHamiltonian::from_function(evaluator, h.dim(), h.basis(), label);
}

double residual(const TimeDependentHamiltonian& naive, const TimeDependentHamiltonian& correct,
                const std::vector<double>& t_samples) {
  if (naive.dim() != correct.dim()) throw std::invalid_argument("residual: dimension mismatch");
  double worst = 0.0;
  for (double t : t_samples) {
    const Operator diff = correct.evaluate(t) - naive.evaluate(t);
    if (diff.is_zero()) continue;
    worst = std::max(worst, operator_norm(diff));
  }
  return worst;
}

std::vector<TimeDependentHamiltonian> equivalence_class(const TimeDependentHamiltonian& base,
                                                        const std::vector<GeneratorRecipe>& recipes) {
  std::vector<TimeDependentHamiltonian> members{base};
  for (const auto& recipe : recipes) members.push_back(transform(base, recipe));
  return members;
}

double verify_covariance(const GaugeModel& model, double alpha, double alpha_prime, const Vector& psi0, double t0,
                         double t1, const CovarianceOptions& options) {
  auto build = [&](double a, Variant variant) {
    switch (variant) {
      case Variant::naive:
        return model.naive(a);
      case Variant::correct:
        return model.correct(a);
      default:
        throw std::invalid_argument("verify_covariance: variant must be naive or correct");
    }
  };
  PropagationOptions prop;
  prop.method = options.method;
  prop.record_stride = 0;

  const Variant source = options.source_variant.value_or(options.variant);
  const Trajectory base = propagate(build(alpha, source), psi0, t0, t1, options.dt, prop);
  const Vector mapped0 = model.apply_gauge_unitary(alpha, alpha_prime, t0, psi0);
  const Trajectory other =
      propagate(build(alpha_prime, options.variant), mapped0 / mapped0.norm(), t0, t1, options.dt, prop);
  const Vector mapped1 = model.apply_gauge_unitary(alpha, alpha_prime, t1, base.final_state());
  return fidelity(mapped1, other.final_state());
}

Vector ground_state(const Operator& h) {
  const Matrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  Vector v = solver.eigenvectors().col(0);
  return v / v.norm();
}

}  // namespace gaugekit
