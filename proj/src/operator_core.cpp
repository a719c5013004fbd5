#include "gaugekit/operator_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

namespace gaugekit {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_diagonal_structure(Structure s) {
  return s == Structure::position_diagonal || s == Structure::fourier_diagonal;
}

// Circulant matrix C[n, l] = column[(n - l) mod N].
Matrix circulant(const Vector& column) {
  const auto n = column.size();
  Matrix m(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index r = 0; r < n; ++r) {
      m(r, l) = column((r - l + n) % n);
    }
  }
  return m;
}

Matrix dense_from_diagonal(Structure s, const Vector& diag) {
  if (s == Structure::position_diagonal) {
    return diag.asDiagonal();
  }
  // F^-1 diag(f) F is circulant with first column ifft(f).
  return circulant(fft_inverse(diag));
}

}  // namespace

// ---------------------------------------------------------------------------
// Bases

GridBasis::GridBasis(int n_points, double half_width) : n_points_(n_points), half_width_(half_width) {
  if (n_points < 2 || (n_points & (n_points - 1)) != 0) {
    throw std::invalid_argument("GridBasis: n_points must be a power of two >= 2");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("GridBasis: half_width must be positive");
  }
}

RealVector GridBasis::points() const {
  RealVector x(n_points_);
  for (int j = 0; j < n_points_; ++j) x(j) = point(j);
  return x;
}

double GridBasis::momentum_step() const { return 2.0 * kPi / (n_points_ * spacing()); }

double GridBasis::max_momentum() const { return kPi / spacing(); }

RealVector GridBasis::momenta() const {
  RealVector k(n_points_);
  const double dk = momentum_step();
  for (int m = 0; m < n_points_; ++m) {
    k(m) = (m < n_points_ / 2 ? m : m - n_points_) * dk;
  }
  return k;
}

std::string GridBasis::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << "grid(" << n_points_ << "," << half_width_ << ")";
  return os.str();
}

FockBasis::FockBasis(int dim, double frequency, double mass) : dim_(dim), frequency_(frequency), mass_(mass) {
  if (dim < 1) throw std::invalid_argument("FockBasis: dim must be positive");
  if (!(frequency > 0.0) || !(mass > 0.0)) {
    throw std::invalid_argument("FockBasis: frequency and mass must be positive");
  }
}

std::string FockBasis::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << "fock(" << dim_ << "," << frequency_ << "," << mass_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// FFT

Vector fft_forward(const Vector& v) {
  Eigen::FFT<double> fft;
  Vector out(v.size());
  fft.fwd(out, v);
  return out;
}

Vector fft_inverse(const Vector& v) {
  Eigen::FFT<double> fft;
  Vector out(v.size());
  fft.inv(out, v);
  return out;
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(Matrix entries, BasisTag basis) : entries_(std::move(entries)), basis_(std::move(basis)) {
  if (entries_.rows() != entries_.cols()) throw std::invalid_argument("Operator: matrix must be square");
}

Operator::Operator(Matrix entries, BasisTag basis, Structure structure, Vector diagonal)
    : entries_(std::move(entries)), basis_(std::move(basis)), structure_(structure), diagonal_(std::move(diagonal)) {}

Operator Operator::position_diagonal(const Vector& values, BasisTag basis) {
  return Operator(dense_from_diagonal(Structure::position_diagonal, values), std::move(basis),
                  Structure::position_diagonal, values);
}

Operator Operator::fourier_diagonal(const Vector& symbol, BasisTag basis) {
  return Operator(dense_from_diagonal(Structure::fourier_diagonal, symbol), std::move(basis),
                  Structure::fourier_diagonal, symbol);
}

Operator Operator::identity(int dim, BasisTag basis) {
  return position_diagonal(Vector::Ones(dim), std::move(basis));
}

Operator Operator::zero(int dim, BasisTag basis) { return Operator(Matrix::Zero(dim, dim), std::move(basis)); }

bool Operator::hermitian() const {
  const double scale = max_abs();
  if (scale == 0.0) return true;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * scale;
}

bool Operator::unitary(double tol) const {
  const auto n = entries_.rows();
  return (entries_.adjoint() * entries_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < tol;
}

double Operator::max_abs() const { return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff(); }

Operator Operator::adjoint() const {
  return Operator(entries_.adjoint(), basis_, structure_, diagonal_.conjugate());
}

Vector Operator::apply(const Vector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("Operator::apply: dimension mismatch");
  switch (structure_) {
    case Structure::position_diagonal:
      return diagonal_.cwiseProduct(v);
    case Structure::fourier_diagonal:
      return fft_inverse(diagonal_.cwiseProduct(fft_forward(v)));
    case Structure::general:
      break;
  }
  return entries_ * v;
}

void Operator::require_compatible(const Operator& other, const char* what) const {
  if (dim() != other.dim()) {
    throw std::invalid_argument(std::string("Operator ") + what + ": dimension mismatch");
  }
  if (!(basis_ == other.basis_)) {
    throw std::invalid_argument(std::string("Operator ") + what + ": basis mismatch (" + basis_.label + " vs " +
                                other.basis_.label + ")");
  }
}

Operator& Operator::operator+=(const Operator& other) {
  require_compatible(other, "sum");
  entries_ += other.entries_;
  if (is_diagonal_structure(structure_) && structure_ == other.structure_) {
    diagonal_ += other.diagonal_;
  } else {
    structure_ = Structure::general;
    diagonal_.resize(0);
  }
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_compatible(other, "difference");
  entries_ -= other.entries_;
  if (is_diagonal_structure(structure_) && structure_ == other.structure_) {
    diagonal_ -= other.diagonal_;
  } else {
    structure_ = Structure::general;
    diagonal_.resize(0);
  }
  return *this;
}

Operator& Operator::operator*=(Complex factor) {
  entries_ *= factor;
  if (is_diagonal_structure(structure_)) diagonal_ *= factor;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  lhs.require_compatible(rhs, "product");
  if (is_diagonal_structure(lhs.structure_) && lhs.structure_ == rhs.structure_) {
    Vector d = lhs.diagonal_.cwiseProduct(rhs.diagonal_);
    Matrix dense = dense_from_diagonal(lhs.structure_, d);
    return Operator(std::move(dense), lhs.basis_, lhs.structure_, std::move(d));
  }
  return Operator(lhs.entries_ * rhs.entries_, lhs.basis_);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator tensor(const Operator& a, const Operator& b) {
  const int na = a.dim();
  const int nb = b.dim();
  Matrix k(na * nb, na * nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      k.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  return Operator(std::move(k), BasisTag{a.basis().label + "⊗" + b.basis().label});
}

double operator_norm(const Operator& op) {
  if (op.dim() == 0) return 0.0;
  if (op.structure() != Structure::general) return op.diagonal().cwiseAbs().maxCoeff();
  if (op.hermitian()) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Matrix> svd(op.matrix());
  return svd.singularValues()(0);
}

double max_abs_difference(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_difference: dimension mismatch");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Canonical operators

Operator position_operator(const GridBasis& basis) {
  return Operator::position_diagonal(basis.points().cast<Complex>(), BasisTag{basis.tag()});
}

Operator momentum_operator(const GridBasis& basis) {
  return Operator::fourier_diagonal(basis.momenta().cast<Complex>(), BasisTag{basis.tag()});
}

Operator position_function(const GridBasis& basis, const std::function<double(double)>& f) {
  Vector values(basis.n_points());
  for (int j = 0; j < basis.n_points(); ++j) values(j) = f(basis.point(j));
  return Operator::position_diagonal(values, BasisTag{basis.tag()});
}

Operator band_projector(const GridBasis& basis, double k_cut) {
  const RealVector k = basis.momenta();
  Vector mask(k.size());
  for (Eigen::Index m = 0; m < k.size(); ++m) mask(m) = std::abs(k(m)) <= k_cut ? 1.0 : 0.0;
  return Operator::fourier_diagonal(mask, BasisTag{basis.tag()});
}

LadderSet ladder_operators(const FockBasis& basis) {
  const int n = basis.dim();
  if (n < 2) throw std::invalid_argument("ladder_operators: dim must be at least 2");
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Matrix ad = a.adjoint();
  const double mw = basis.mass() * basis.frequency();
  const BasisTag tag{basis.tag()};
  Matrix x = (a + ad) / std::sqrt(2.0 * mw);
  Matrix p = Complex(0.0, std::sqrt(mw / 2.0)) * (ad - a);
  return {Operator(a, tag), Operator(std::move(x), tag), Operator(std::move(p), tag)};
}

Operator expm_hermitian(const Operator& hamiltonian, double s) {
  if (!hamiltonian.hermitian()) throw std::invalid_argument("expm_hermitian: operator is not Hermitian");
  const Complex minus_is(0.0, -s);
  switch (hamiltonian.structure()) {
    case Structure::position_diagonal:
      return Operator::position_diagonal((minus_is * hamiltonian.diagonal().real().cast<Complex>()).array().exp(),
                                         hamiltonian.basis());
    case Structure::fourier_diagonal:
      return Operator::fourier_diagonal((minus_is * hamiltonian.diagonal().real().cast<Complex>()).array().exp(),
                                        hamiltonian.basis());
    case Structure::general:
      break;
  }
  // Symmetrise so round-off asymmetry does not leak into the eigenvectors.
  const Matrix h = 0.5 * (hamiltonian.matrix() + hamiltonian.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Vector phases = (minus_is * solver.eigenvalues().cast<Complex>()).array().exp();
  const Matrix& v = solver.eigenvectors();
  return Operator(v * phases.asDiagonal() * v.adjoint(), hamiltonian.basis());
}

Operator translation_unitary(const GridBasis& basis, double c) {
  const RealVector k = basis.momenta();
  Vector symbol(k.size());
  for (Eigen::Index m = 0; m < k.size(); ++m) symbol(m) = std::polar(1.0, k(m) * c);
  return Operator::fourier_diagonal(symbol, BasisTag{basis.tag()});
}

}  // namespace gaugekit
