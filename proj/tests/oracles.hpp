// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive (direct summation, brute force,
// eigendecomposition) so that agreement with the optimized code is evidence,
// not tautology.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <numbers>
#include <vector>

#include "tubal/tensor.hpp"

namespace oracle {

using tubal::Index;
using tubal::Tensor3;

// Mode-3 DFT by direct O(n3^2) summation per tube:
//   xhat(i,j,k) = sum_t x(i,j,t) * exp(-2*pi*I*k*t/n3)
inline tubal::FourierTensor dft_mode3_naive(const Tensor3& x) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  tubal::FourierTensor xf(n1, n2, n3);
  const std::complex<double> minus_i(0.0, -1.0);
  for (Index k = 0; k < n3; ++k) {
    Eigen::MatrixXcd& s = xf.slices[static_cast<std::size_t>(k)];
    for (Index j = 0; j < n2; ++j)
      for (Index i = 0; i < n1; ++i) {
        std::complex<double> acc = 0.0;
        for (Index t = 0; t < n3; ++t)
          acc += x(i, j, t) * std::exp(minus_i * (2.0 * std::numbers::pi *
                                                  static_cast<double>(k * t) /
                                                  static_cast<double>(n3)));
        s(i, j) = acc;
      }
  }
  return xf;
}

// Inverse mode-3 DFT by direct summation, scaled by 1/n3. Returns the raw
// complex result so tests can inspect the imaginary part themselves.
inline std::vector<Eigen::MatrixXcd> idft_mode3_naive(
    const tubal::FourierTensor& xf) {
  const Index n1 = xf.n1, n2 = xf.n2, n3 = xf.n3;
  std::vector<Eigen::MatrixXcd> out(
      static_cast<std::size_t>(n3), Eigen::MatrixXcd::Zero(n1, n2));
  const std::complex<double> plus_i(0.0, 1.0);
  for (Index t = 0; t < n3; ++t)
    for (Index k = 0; k < n3; ++k)
      out[static_cast<std::size_t>(t)] +=
          xf.slices[static_cast<std::size_t>(k)] *
          std::exp(plus_i * (2.0 * std::numbers::pi *
                             static_cast<double>(k * t) /
                             static_cast<double>(n3))) /
          static_cast<double>(n3);
  return out;
}

// Tube-wise circular convolution: the mode-3 product of two tensors computed
// entirely in the spatial domain, without any Fourier transform.
//   c(i,j,k) = sum_l sum_t a(i,l,:) circ-conv b(l,j,:) evaluated at k
inline Tensor3 t_product_naive(const Tensor3& a, const Tensor3& b) {
  const Index n1 = a.n1(), p = a.n2(), n2 = b.n2(), n3 = a.n3();
  Tensor3 c(n1, n2, n3);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j)
      for (Index k = 0; k < n3; ++k) {
        double acc = 0.0;
        for (Index l = 0; l < p; ++l)
          for (Index t = 0; t < n3; ++t)
            acc += a(i, l, t) * b(l, j, (k - t + n3) % n3);
        c(i, j, k) = acc;
      }
  return c;
}

// Singular values of a complex matrix via the eigendecomposition of A^H A
// (and A A^H for the small side), entirely independent of LAPACK's SVD
// drivers. Returned in descending order, padded/truncated to min(m,n).
inline Eigen::VectorXd singular_values_eig(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd gram = a.rows() <= a.cols()
                                    ? (a * a.adjoint()).eval()
                                    : (a.adjoint() * a).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  Eigen::VectorXd ev = es.eigenvalues();  // ascending
  Eigen::VectorXd sv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    sv(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
  return sv;
}

// Block-diagonal matrix assembled from the Fourier slices: slice k occupies
// the kth diagonal block of an (n1*n3) x (n2*n3) complex matrix.
inline Eigen::MatrixXcd block_diag(const tubal::FourierTensor& xf) {
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(xf.n1 * xf.n3, xf.n2 * xf.n3);
  for (Index k = 0; k < xf.n3; ++k)
    m.block(k * xf.n1, k * xf.n2, xf.n1, xf.n2) =
        xf.slices[static_cast<std::size_t>(k)];
  return m;
}

// Analytic partial singular value thresholding built on the Gram-matrix
// eigendecomposition instead of a LAPACK SVD driver. Writing U = A V S^-1,
// each rank-one term sigma_i' u_i v_i^H becomes
//   (A v_i) v_i^H              when the value passes through (i < n_keep)
//   c_i (A v_i) v_i^H          with c_i = max(sigma_i-tau,0)/sigma_i  else.
inline Eigen::MatrixXcd psvt_naive(const Eigen::MatrixXcd& a,
                                   std::ptrdiff_t n_keep, double tau) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a);
  const Eigen::Index n = a.cols();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
  // eigenvalues ascend; walk them in descending order
  for (Eigen::Index rank_pos = 0; rank_pos < n; ++rank_pos) {
    const Eigen::Index e = n - 1 - rank_pos;
    const double sigma = std::sqrt(std::max(0.0, es.eigenvalues()(e)));
    const Eigen::VectorXcd v = es.eigenvectors().col(e);
    if (rank_pos < n_keep) {
      out += (a * v) * v.adjoint();
    } else if (sigma > tau) {
      out += ((sigma - tau) / sigma) * (a * v) * v.adjoint();
    }
  }
  return out;
}

// Largest absolute entry by explicit scan.
inline double inf_norm_naive(const Tensor3& x) {
  double s = 0.0;
  for (Index k = 0; k < x.n3(); ++k)
    for (Index j = 0; j < x.n2(); ++j)
      for (Index i = 0; i < x.n1(); ++i)
        s = std::max(s, std::abs(x(i, j, k)));
  return s;
}

}  // namespace oracle
