#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "gaugekit/operator_core.hpp"

namespace gaugekit {

using ScalarFn = std::function<double(double)>;

enum class Variant { naive, correct, class_member, transformed };

std::string_view to_string(Variant v);

struct HamiltonianLabel {
  double alpha = 0.0;
  Variant variant = Variant::naive;
};

/// A Hamiltonian frozen at one instant and prepared for repeated matrix-vector products.
/// Diagonal and Fourier-diagonal parts are merged; sparse parts keep their own storage.
class FrozenHamiltonian {
 public:
  int dim() const { return dim_; }
  void apply(const Vector& in, Vector& out) const;
  Vector apply(const Vector& in) const;

 private:
  friend class TimeDependentHamiltonian;
  using SparseMatrix = Eigen::SparseMatrix<Complex>;

  int dim_ = 0;
  Vector position_diag_;
  Vector fourier_diag_;
  Matrix dense_;
  std::vector<std::pair<double, std::shared_ptr<const SparseMatrix>>> sparse_;
};

/// t -> H(t), stored as sum_i c_i(t) O_i with Hermitian O_i and real c_i, or as an opaque
/// evaluator for Hamiltonians produced by frame transformations.
class TimeDependentHamiltonian {
 public:
  TimeDependentHamiltonian(int dim, BasisTag basis, HamiltonianLabel label = {});

  static TimeDependentHamiltonian from_function(std::function<Operator(double)> evaluator, int dim,
                                                BasisTag basis, HamiltonianLabel label = {});

  /// Adds c(t) * op. op must be Hermitian.
  TimeDependentHamiltonian& add_term(ScalarFn coefficient, const Operator& op);
  TimeDependentHamiltonian& add_constant(const Operator& op);

  int dim() const { return dim_; }
  const BasisTag& basis() const { return basis_; }
  const HamiltonianLabel& label() const { return label_; }
  void set_label(HamiltonianLabel label) { label_ = label; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_function_based() const { return static_cast<bool>(evaluator_); }

  Operator evaluate(double t) const;
  FrozenHamiltonian freeze(double t) const;

 private:
  struct Term {
    ScalarFn coefficient;
    Operator op;
    std::shared_ptr<const Eigen::SparseMatrix<Complex>> sparse;
  };

  int dim_;
  BasisTag basis_;
  HamiltonianLabel label_;
  std::vector<Term> terms_;
  std::function<Operator(double)> evaluator_;
};

}  // namespace gaugekit
