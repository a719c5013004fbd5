#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace gaugekit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Periodic uniform grid for a single continuous coordinate.
///
/// Points are x_j = -half_width + j * spacing with spacing = 2 * half_width / n_points.
/// The conjugate momentum grid is returned in FFT order; its Nyquist entry is
/// -pi/spacing, so the set of momenta is {-pi/spacing, ..., pi/spacing - dk}.
class GridBasis {
 public:
  GridBasis(int n_points, double half_width);

  int n_points() const { return n_points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / n_points_; }
  double point(int j) const { return -half_width_ + j * spacing(); }
  RealVector points() const;

  /// Momentum values k_m in FFT order (m = 0 .. n-1).
  RealVector momenta() const;
  double momentum_step() const;
  double max_momentum() const;

  std::string tag() const;

 private:
  int n_points_;
  double half_width_;
};

/// Truncated harmonic-oscillator basis |0>, ..., |dim-1>.
class FockBasis {
 public:
  FockBasis(int dim, double frequency, double mass = 1.0);

  int dim() const { return dim_; }
  double frequency() const { return frequency_; }
  double mass() const { return mass_; }
  std::string tag() const;

 private:
  int dim_;
  double frequency_;
  double mass_;
};

struct BasisTag {
  std::string label;
  bool operator==(const BasisTag&) const = default;
};

/// How an operator can be applied without a dense matrix-vector product.
/// Fourier-diagonal operators are f(p) on a GridBasis; their diagonal holds f(k_m) in FFT order.
enum class Structure { general, position_diagonal, fourier_diagonal };

/// Dense complex matrix on a tagged basis. Values are immutable once built;
/// arithmetic returns new operators and requires matching dims and tags.
class Operator {
 public:
  Operator() = default;
  Operator(Matrix entries, BasisTag basis);

  static Operator position_diagonal(const Vector& values, BasisTag basis);
  static Operator fourier_diagonal(const Vector& symbol, BasisTag basis);
  static Operator identity(int dim, BasisTag basis);
  static Operator zero(int dim, BasisTag basis);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  const BasisTag& basis() const { return basis_; }
  Structure structure() const { return structure_; }
  /// Diagonal in the operator's native representation; empty for general operators.
  const Vector& diagonal() const { return diagonal_; }

  /// True iff max|M - M^dagger| < 1e-12 * max|M|.
  bool hermitian() const;
  bool unitary(double tol = 1e-12) const;
  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }

  Operator adjoint() const;
  Vector apply(const Vector& v) const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex factor);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Complex factor, Operator op) { return op *= factor; }
  friend Operator operator*(Operator op, Complex factor) { return op *= factor; }
  friend Operator operator*(double factor, Operator op) { return op *= Complex(factor, 0.0); }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  Operator(Matrix entries, BasisTag basis, Structure structure, Vector diagonal);
  void require_compatible(const Operator& other, const char* what) const;

  Matrix entries_;
  BasisTag basis_;
  Structure structure_ = Structure::general;
  Vector diagonal_;
};

Operator commutator(const Operator& a, const Operator& b);
Operator tensor(const Operator& a, const Operator& b);

/// Spectral (2-)norm.
double operator_norm(const Operator& op);
double max_abs_difference(const Operator& a, const Operator& b);

/// Forward/inverse DFT used for Fourier-diagonal operators (inverse is normalised by 1/n).
Vector fft_forward(const Vector& v);
Vector fft_inverse(const Vector& v);

Operator position_operator(const GridBasis& basis);
Operator momentum_operator(const GridBasis& basis);
/// Multiplication operator f(x_j).
Operator position_function(const GridBasis& basis, const std::function<double(double)>& f);
/// Projector onto plane waves with |k| <= k_cut.
Operator band_projector(const GridBasis& basis, double k_cut);

struct LadderSet {
  Operator a;
  Operator x;
  Operator p;
};

/// a, x = (a + a^dagger)/sqrt(2 m w), p = i sqrt(m w / 2)(a^dagger - a). Requires dim >= 2.
LadderSet ladder_operators(const FockBasis& basis);

/// exp(-i s H) via Hermitian eigendecomposition (exact for diagonal structures).
/// Throws std::invalid_argument for non-Hermitian input.
Operator expm_hermitian(const Operator& hamiltonian, double s);

/// exp(i c p): maps psi(q) to psi(q + c) by Fourier phase multiplication.
Operator translation_unitary(const GridBasis& basis, double c);

}  // namespace gaugekit
