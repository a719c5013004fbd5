#include "gaugekit/dipole_model.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gaugekit {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return k;
}

}  // namespace

void DipoleSpec::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(m, "m");
  positive(e, "e");
  positive(omega0, "omega0");
  positive(omega_c, "omega_c");
  if (!(theta >= 0.0 && theta <= 0.5 * 3.14159265358979323846 + 1e-15)) {
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  }
  if (n_matter < 2 || n_field < 2) throw std::invalid_argument("dims must be at least 2");
  if (padding < 0) throw std::invalid_argument("padding must be non-negative");
}

DipoleModel::DipoleModel(DipoleSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const FockBasis matter(matter_dim(), spec_.omega0, spec_.m);
  const FockBasis field(field_dim(), spec_.omega_c, 1.0);
  const LadderSet mat = ladder_operators(matter);
  const LadderSet fld = ladder_operators(field);
  const Operator im = Operator::identity(matter_dim(), mat.x.basis());
  const Operator idf = Operator::identity(field_dim(), fld.x.basis());

  const Operator x = tensor(mat.x, idf);
  const Operator p = tensor(mat.p, idf);
  const Operator X = tensor(im, fld.x);
  const Operator P = tensor(im, fld.p);
  const double m = spec_.m;
  h0_ = (0.5 / m) * (p * p) + (0.5 * m * spec_.omega0 * spec_.omega0) * (x * x) + 0.5 * (P * P) +
        (0.5 * spec_.omega_c * spec_.omega_c) * (X * X);
  pX_ = tensor(mat.p, fld.x);
  xP_ = tensor(mat.x, fld.p);
  xx_ = x * x;
  XX_ = X * X;
  coupling_ = tensor(mat.x, fld.x);

  Eigen::SelfAdjointEigenSolver<Matrix> sx(mat.x.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> sX(fld.x.matrix());
  vx_ = sx.eigenvectors();
  vX_ = sX.eigenvectors();
  coupling_values_.resize(dim());
  for (int i = 0; i < matter_dim(); ++i) {
    for (int j = 0; j < field_dim(); ++j) coupling_values_(i * field_dim() + j) = sx.eigenvalues()(i) * sX.eigenvalues()(j);
  }
  coupling_eigen_ = std::make_shared<const GeneratorRecipe::Eigenpair>(coupling_values_, kron(vx_, vX_));
}

double DipoleModel::irrotational_alpha() const {
  const double c = std::cos(spec_.theta);
  return c * c;
}

TimeDependentHamiltonian DipoleModel::naive(double alpha) const {
  TimeDependentHamiltonian h(dim(), basis(), {alpha, Variant::naive});
  const DriveSignal mu = spec_.mu;
  const double e = spec_.e;
  const double m = spec_.m;
  h.add_constant(h0_);
  h.add_term([=](double t) { return e * (1.0 - alpha) / m * mu.value(t); }, pX_);
  h.add_term([=](double t) { return -e * alpha * mu.value(t); }, xP_);
  h.add_term([=](double t) {
    const double f = e * (1.0 - alpha) * mu.value(t);
    return 0.5 * f * f / m;
  }, XX_);
  h.add_term([=](double t) {
    const double f = e * alpha * mu.value(t);
    return 0.5 * f * f;
  }, xx_);
  return h;
}

TimeDependentHamiltonian DipoleModel::correct(double alpha) const {
  TimeDependentHamiltonian h = naive(alpha);
  h.set_label({alpha, Variant::correct});
  if (omit_correction_) return h;
  const DriveSignal mu = spec_.mu;
  const double factor = -spec_.e * (alpha - irrotational_alpha());
  h.add_term([=](double t) { return factor * mu.derivative(t); }, coupling_);
  return h;
}

TimeDependentHamiltonian DipoleModel::class_member_hamiltonian(double alpha_base, double alpha_prime) const {
  TimeDependentHamiltonian h = naive(alpha_prime);
  h.set_label({alpha_prime, Variant::class_member});
  const DriveSignal mu = spec_.mu;
  const double factor = -spec_.e * (alpha_prime - alpha_base);
  h.add_term([=](double t) { return factor * mu.derivative(t); }, coupling_);
  return h;
}

GeneratorRecipe DipoleModel::frame_generator(double alpha, double alpha_prime) const {
  GeneratorRecipe recipe;
  recipe.add(spec_.mu.scaled(-spec_.e * (alpha - alpha_prime)), coupling_, coupling_eigen_);
  return recipe;
}

Operator DipoleModel::gauge_unitary(double alpha, double alpha_prime, double t) const {
  return frame_generator(alpha, alpha_prime).unitary(t);
}

Vector DipoleModel::apply_gauge_unitary(double alpha, double alpha_prime, double t, const Vector& psi) const {
  if (psi.size() != dim()) throw std::invalid_argument("apply_gauge_unitary: dimension mismatch");
  const double c = -spec_.e * (alpha - alpha_prime) * spec_.mu.value(t);
  // Row-major reshape: (A (x) B) psi corresponds to A Psi B^T.
  Matrix psi_m(matter_dim(), field_dim());
  for (int i = 0; i < matter_dim(); ++i) {
    for (int j = 0; j < field_dim(); ++j) psi_m(i, j) = psi(i * field_dim() + j);
  }
  Matrix rotated = vx_.adjoint() * psi_m * vX_.conjugate();
  for (int i = 0; i < matter_dim(); ++i) {
    for (int j = 0; j < field_dim(); ++j) rotated(i, j) *= std::polar(1.0, c * coupling_values_(i * field_dim() + j));
  }
  const Matrix back = vx_ * rotated * vX_.transpose();
  Vector out(dim());
  for (int i = 0; i < matter_dim(); ++i) {
    for (int j = 0; j < field_dim(); ++j) out(i * field_dim() + j) = back(i, j);
  }
  return out;
}

Operator DipoleModel::hamiltonian_naive(double alpha, double t) const { return naive(alpha).evaluate(t); }

Operator DipoleModel::correction_X(double alpha, double t) const {
  return (-spec_.e * spec_.mu.derivative(t) * (alpha - irrotational_alpha())) * coupling_;
}

Operator DipoleModel::wrong_correction(double alpha, double t) const {
  return (-spec_.e * alpha * spec_.mu.derivative(t)) * coupling_;
}

Operator DipoleModel::hamiltonian_correct(double alpha, double t) const { return correct(alpha).evaluate(t); }

Operator DipoleModel::class_member(double alpha_base, double alpha_prime, double t) const {
  if (alpha_base == alpha_prime) return hamiltonian_naive(alpha_prime, t);
  return hamiltonian_naive(alpha_prime, t) + wrong_correction(alpha_prime, t) - wrong_correction(alpha_base, t);
}

Operator DipoleModel::roentgen_observable(double t) const { return correction_X(1.0, t); }

double DipoleModel::leading_block_norm(const Operator& a) const {
  const int bm = spec_.n_matter / 2;
  const int bf = spec_.n_field / 2;
  Matrix block(bm * bf, bm * bf);
  for (int i = 0; i < bm; ++i) {
    for (int j = 0; j < bf; ++j) {
      for (int k = 0; k < bm; ++k) {
        for (int l = 0; l < bf; ++l) block(i * bf + j, k * bf + l) = a.matrix()(i * field_dim() + j, k * field_dim() + l);
      }
    }
  }
  Eigen::JacobiSVD<Matrix> svd(block);
  return svd.singularValues()(0);
}

}  // namespace gaugekit
