#include "gaugekit/hamiltonian.hpp"

#include <stdexcept>

namespace gaugekit {

namespace {

// Below this fill fraction a general term is applied through CSR storage.
constexpr double kSparseFill = 0.15;

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::naive:
      return "naive";
    case Variant::correct:
      return "correct";
    case Variant::class_member:
      return "class_member";
    case Variant::transformed:
      return "transformed";
  }
  return "unknown";
}

void FrozenHamiltonian::apply(const Vector& in, Vector& out) const {
  if (in.size() != dim_) throw std::invalid_argument("FrozenHamiltonian::apply: dimension mismatch");
  if (dense_.size() != 0) {
    out.noalias() = dense_ * in;
  } else {
    out.setZero(dim_);
  }
  if (position_diag_.size() != 0) out += position_diag_.cwiseProduct(in);
  if (fourier_diag_.size() != 0) out += fft_inverse(fourier_diag_.cwiseProduct(fft_forward(in)));
  for (const auto& [c, m] : sparse_) out += c * (*m * in);
}

Vector FrozenHamiltonian::apply(const Vector& in) const {
  Vector out(dim_);
  apply(in, out);
  return out;
}

TimeDependentHamiltonian::TimeDependentHamiltonian(int dim, BasisTag basis, HamiltonianLabel label)
    : dim_(dim), basis_(std::move(basis)), label_(label) {}

TimeDependentHamiltonian TimeDependentHamiltonian::from_function(std::function<Operator(double)> evaluator, int dim,
                                                                 BasisTag basis, HamiltonianLabel label) {
  TimeDependentHamiltonian h(dim, std::move(basis), label);
  h.evaluator_ = std::move(evaluator);
  return h;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_term(ScalarFn coefficient, const Operator& op) {
  if (evaluator_) throw std::logic_error("add_term: Hamiltonian is function-based");
  if (op.dim() != dim_ || !(op.basis() == basis_)) {
    throw std::invalid_argument("add_term: operator dimension or basis does not match Hamiltonian");
  }
  if (!op.hermitian()) throw std::invalid_argument("add_term: term operator must be Hermitian");
  Term term{std::move(coefficient), op, nullptr};
  if (op.structure() == Structure::general) {
    const auto nnz = (op.matrix().array() != Complex(0.0, 0.0)).count();
    if (static_cast<double>(nnz) < kSparseFill * static_cast<double>(op.matrix().size())) {
      term.sparse = std::make_shared<const Eigen::SparseMatrix<Complex>>(op.matrix().sparseView());
    }
  }
  terms_.push_back(std::move(term));
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_constant(const Operator& op) {
  return add_term([](double) { return 1.0; }, op);
}

Operator TimeDependentHamiltonian::evaluate(double t) const {
  if (evaluator_) return evaluator_(t);
  Operator sum = Operator::zero(dim_, basis_);
  for (const auto& term : terms_) {
    const double c = term.coefficient(t);
    if (c == 0.0) continue;
    sum += c == 1.0 ? term.op : c * term.op;
  }
  return sum;
}

FrozenHamiltonian TimeDependentHamiltonian::freeze(double t) const {
  FrozenHamiltonian f;
  f.dim_ = dim_;
  if (evaluator_) {
    f.dense_ = evaluator_(t).matrix();
    return f;
  }
  for (const auto& term : terms_) {
    const double c = term.coefficient(t);
    if (c == 0.0) continue;
    switch (term.op.structure()) {
      case Structure::position_diagonal:
        if (f.position_diag_.size() == 0) f.position_diag_ = Vector::Zero(dim_);
        f.position_diag_ += c * term.op.diagonal();
        break;
      case Structure::fourier_diagonal:
        if (f.fourier_diag_.size() == 0) f.fourier_diag_ = Vector::Zero(dim_);
        f.fourier_diag_ += c * term.op.diagonal();
        break;
      case Structure::general:
        if (term.sparse) {
          f.sparse_.emplace_back(c, term.sparse);
        } else {
          if (f.dense_.size() == 0) f.dense_ = Matrix::Zero(dim_, dim_);
          f.dense_ += c * term.op.matrix();
        }
        break;
    }
  }
  return f;
}

}  // namespace gaugekit
