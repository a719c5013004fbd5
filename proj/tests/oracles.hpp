#pragma once

// Reference implementations that share no code with the library: explicit DFT sums,
// Taylor-series exponentials and closed-form formulas typed out independently.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double pi = 3.14159265358979323846;

/// exp(A) by scaling and squaring of a 30-term Taylor series.
inline Matrix expm_taylor(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  const Matrix scaled = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Spectral derivative matrix on a periodic grid by explicit plane-wave sums,
/// P_{jl} = (1/n) sum_m k_m exp(i k_m (x_j - x_l)) with k_m in FFT order.
inline Matrix momentum_matrix(int n, double half_width) {
  const double dx = 2.0 * half_width / n;
  const double dk = 2.0 * pi / (n * dx);
  Matrix p(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      Complex sum = 0.0;
      for (int m = 0; m < n; ++m) {
        const double k = (m < n / 2 ? m : m - n) * dk;
        sum += k * std::polar(1.0, k * (j - l) * dx);
      }
      p(j, l) = sum / static_cast<double>(n);
    }
  }
  return p;
}

inline double closed_spectrum(double alpha, double w, double weg, double gamma) {
  const double b = (1.0 - alpha) * weg + alpha * w;
  return gamma / (2.0 * pi) * w / (weg * weg * weg) * b * b / ((w - weg) * (w - weg) + gamma * gamma / 4.0);
}

inline Matrix random_hermitian(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  return 0.5 * (a + a.adjoint());
}

inline Vector random_state(int n, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

}  // namespace oracle
