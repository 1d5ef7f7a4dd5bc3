#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <limits>

#include "probe/errors.hpp"

namespace probe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Subsystem { A, B };

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNegativeEigenTol = 1e-10;

struct EigenSystem {
  RealVector values;  // ascending
  ComplexMatrix vectors;
};

double max_abs_entry(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Throws NonHermitianInput if max |m - m^dagger| exceeds 1e-12.
EigenSystem hermitian_eig(const ComplexMatrix& m);

/// Keeps `keep`, traces out the other factor of an (dimA*dimB)-square matrix.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Subsystem keep);

/// Unit-trace positive semidefinite operator on H_A (x) H_B.
///
/// The eigendecomposition is taken once at construction; eigenvalues in
/// [-1e-10, 0) are stored as 0 and anything below that is rejected.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix m, std::size_t dimA, std::size_t dimB);

  static DensityMatrix pure(const ComplexVector& psi, std::size_t dimA, std::size_t dimB);

  std::size_t dimA() const noexcept { return dimA_; }
  std::size_t dimB() const noexcept { return dimB_; }
  std::size_t dim() const noexcept { return dimA_ * dimB_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const RealVector& eigenvalues() const noexcept { return eig_.values; }
  const ComplexMatrix& eigenvectors() const noexcept { return eig_.vectors; }
  const ComplexMatrix& sqrt() const noexcept { return sqrt_; }

  ComplexMatrix marginal(Subsystem keep) const {
    return partial_trace(matrix_, dimA_, dimB_, keep);
  }
  double purity() const;

 private:
  std::size_t dimA_;
  std::size_t dimB_;
  ComplexMatrix matrix_;
  EigenSystem eig_;
  ComplexMatrix sqrt_;
};

ComplexMatrix sqrtm_psd(const DensityMatrix& rho);

struct SwapOperator {
  std::size_t dim;
  ComplexMatrix matrix;
};

SwapOperator swap_operator(std::size_t n);

namespace detail {

// Square root of a PSD matrix from its eigensystem. Eigenvalues below
// n * eps * lambda_max are solver noise and are treated as exact zeros; their
// square roots would otherwise inject ~sqrt(eps) errors.
template <class Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> psd_sqrt_from_eig(
    const Eigen::Matrix<Real, Eigen::Dynamic, 1>& values,
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& vectors) {
  const auto n = values.size();
  const Real top = values.size() > 0 ? values.maxCoeff() : Real(0);
  const Real floor = Real(n) * std::numeric_limits<Real>::epsilon() * (top > 0 ? top : Real(0));
  Eigen::Matrix<Real, Eigen::Dynamic, 1> roots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    roots(i) = values(i) > floor ? std::sqrt(values(i)) : Real(0);
  }
  return vectors * roots.asDiagonal() * vectors.adjoint();
}

}  // namespace detail

}  // namespace probe
