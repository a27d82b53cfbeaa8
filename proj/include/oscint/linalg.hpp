#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oscint {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

/// Dense row-major complex square matrix.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), data_(n * n) {}

  static CMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const Complex> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  /// max_ij |M_ij|
  double max_abs() const;
  double frobenius() const;
  /// max_ij |M_ij - conj(M_ji)|
  double hermitian_defect() const;
  CMatrix adjoint() const;
  bool is_zero() const;

  CVector apply(std::span<const Complex> v) const;
  void apply_into(std::span<const Complex> v, std::span<Complex> out) const;

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(double s, const CMatrix& a);

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

double norm(std::span<const Complex> v);
double norm_squared(std::span<const Complex> v);
double max_abs(std::span<const Complex> v);
/// x* y
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
bool all_finite(std::span<const Complex> v);

/// Eigen-decomposition M = V diag(values) V*, eigenvalues ascending.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;  // columns are eigenvectors
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Throws DimensionError for a non-Hermitian input
/// (defect > 1e-12 max|M|) and EigenError if 100 sweeps do not reduce the
/// off-diagonal Frobenius norm below 1e-14 ||M||_F.
HermitianEigen hermitian_eig(const CMatrix& m);

/// Spectral norm of a Hermitian matrix through hermitian_eig.
double hermitian_spectral_norm(const CMatrix& m);

}  // namespace oscint
