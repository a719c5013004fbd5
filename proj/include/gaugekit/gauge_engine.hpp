#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gaugekit/drive_signal.hpp"
#include "gaugekit/hamiltonian.hpp"
#include "gaugekit/operator_core.hpp"
#include "gaugekit/propagation.hpp"

namespace gaugekit {

/// Frame generator G(t) = sum_i c_i(t) G_i with time-independent Hermitian G_i.
/// The frame unitary is U(t) = exp(i G(t)); when the G_i commute, i dU/dt U^dagger = -dG/dt.
class GeneratorRecipe {
 public:
  /// Eigenvalues and eigenvectors of a time-independent generator.
  using Eigenpair = std::pair<RealVector, Matrix>;

  GeneratorRecipe() = default;
  GeneratorRecipe(DriveSignal profile, Operator generator);

  GeneratorRecipe& add(DriveSignal profile, Operator generator);
  /// As add, reusing a known eigendecomposition of the generator.
  GeneratorRecipe& add(DriveSignal profile, Operator generator, std::shared_ptr<const Eigenpair> eigen);

  bool empty() const { return terms_.empty(); }
  int dim() const;
  /// Pairwise commutators below tol * |G_i| |G_j|.
  bool commuting(double tol = 1e-10) const;

  Operator generator(double t) const;
  Operator generator_rate(double t) const;
  Operator unitary(double t) const;
  /// i dU/dt U^dagger = -dG/dt for commuting recipes.
  Operator frame_term(double t) const;
  GeneratorRecipe negated() const;

 private:
  struct Term {
    DriveSignal profile;
    Operator generator;
    // Eigendecomposition of a general single generator, shared by copies.
    std::shared_ptr<const Eigenpair> eigen;
  };
  std::vector<Term> terms_;
};

/// H'(t) = U(t) H(t) U(t)^dagger + i dU/dt U^dagger. Throws NonCommutingGenerator for
/// recipes whose terms do not commute and std::invalid_argument on dimension mismatch.
TimeDependentHamiltonian transform(const TimeDependentHamiltonian& h, const GeneratorRecipe& recipe);

/// max over samples of |correct(t) - naive(t)| (spectral norm).
double residual(const TimeDependentHamiltonian& naive, const TimeDependentHamiltonian& correct,
                const std::vector<double>& t_samples);

/// {base} followed by transform(base, r) for every recipe.
std::vector<TimeDependentHamiltonian> equivalence_class(const TimeDependentHamiltonian& base,
                                                        const std::vector<GeneratorRecipe>& recipes);

/// A light-matter model with a one-parameter gauge family.
class GaugeModel {
 public:
  virtual ~GaugeModel() = default;

  virtual int dim() const = 0;
  virtual BasisTag basis() const = 0;
  virtual TimeDependentHamiltonian naive(double alpha) const = 0;
  virtual TimeDependentHamiltonian correct(double alpha) const = 0;
  /// Recipe for R_{alpha alpha'}(t) = exp(i G(t)).
  virtual GeneratorRecipe frame_generator(double alpha, double alpha_prime) const = 0;
  virtual double irrotational_alpha() const = 0;

  virtual Operator gauge_unitary(double alpha, double alpha_prime, double t) const {
    return frame_generator(alpha, alpha_prime).unitary(t);
  }
  /// R_{alpha alpha'}(t) psi; models override this when R has a cheaper action than a dense matrix.
  virtual Vector apply_gauge_unitary(double alpha, double alpha_prime, double t, const Vector& psi) const {
    return gauge_unitary(alpha, alpha_prime, t).apply(psi);
  }
};

struct CovarianceOptions {
  /// Variant used for both evolutions unless source_variant is set.
  Variant variant = Variant::correct;
  std::optional<Variant> source_variant;
  double dt = 0.01;
  Method method = Method::midpoint_exp;
};

/// Evolves psi0 under H_alpha (source variant) from t0 to t1 and R_{alpha alpha'}(t0) psi0 under H_alpha';
/// returns |<R(t1) psi_alpha(t1) | psi_alpha'(t1)>|.
double verify_covariance(const GaugeModel& model, double alpha, double alpha_prime, const Vector& psi0, double t0,
                         double t1, const CovarianceOptions& options = {});

/// Ground state of an operator (lowest eigenvector).
Vector ground_state(const Operator& h);

}  // namespace gaugekit
