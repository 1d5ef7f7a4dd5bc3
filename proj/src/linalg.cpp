#include "probe/linalg.hpp"

#include <sstream>

namespace probe {

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_entry(m - m.adjoint()) <= tol;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max |M - M^dagger| = "
        << (m.rows() == m.cols() ? max_abs_entry(m - m.adjoint()) : -1.0) << ")";
    throw NonHermitianInput(msg.str());
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Subsystem keep) {
  const auto n = static_cast<Eigen::Index>(dimA * dimB);
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream msg;
    msg << "partial trace expects a " << n << "x" << n << " matrix, got " << m.rows() << "x"
        << m.cols();
    throw DimensionMismatch(msg.str());
  }
  const auto na = static_cast<Eigen::Index>(dimA);
  const auto nb = static_cast<Eigen::Index>(dimB);
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(na, na);
    for (Eigen::Index a = 0; a < na; ++a)
      for (Eigen::Index c = 0; c < na; ++c)
        for (Eigen::Index b = 0; b < nb; ++b) out(a, c) += m(a * nb + b, c * nb + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(nb, nb);
  for (Eigen::Index a = 0; a < na; ++a) out += m.block(a * nb, a * nb, nb, nb);
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, std::size_t dimA, std::size_t dimB)
    : dimA_(dimA), dimB_(dimB) {
  const auto n = static_cast<Eigen::Index>(dimA * dimB);
  if (dimA == 0 || dimB == 0 || m.rows() != n || m.cols() != n) {
    std::ostringstream msg;
    msg << "density matrix of size " << m.rows() << "x" << m.cols() << " does not match dims "
        << dimA << "x" << dimB;
    throw DimensionMismatch(msg.str());
  }
  eig_ = hermitian_eig(m);
  matrix_ = 0.5 * (m + m.adjoint());
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "trace is " << tr;
    throw NotNormalized(msg.str());
  }
  for (Eigen::Index i = 0; i < eig_.values.size(); ++i) {
    if (eig_.values(i) < -kNegativeEigenTol) {
      std::ostringstream msg;
      msg << "eigenvalue " << eig_.values(i) << " is negative";
      throw NotPositive(msg.str());
    }
    if (eig_.values(i) < 0.0) eig_.values(i) = 0.0;
  }
  sqrt_ = detail::psd_sqrt_from_eig<double>(eig_.values, eig_.vectors);
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi, std::size_t dimA, std::size_t dimB) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "state vector has norm " << norm;
    throw NotNormalized(msg.str());
  }
  return DensityMatrix(psi * psi.adjoint(), dimA, dimB);
}

double DensityMatrix::purity() const { return eig_.values.squaredNorm(); }

ComplexMatrix sqrtm_psd(const DensityMatrix& rho) { return rho.sqrt(); }

SwapOperator swap_operator(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return {n, s};
}

}  // namespace probe
