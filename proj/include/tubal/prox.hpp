#pragma once

#include <Eigen/Dense>

#include "tubal/t_algebra.hpp"
#include "tubal/tensor.hpp"

namespace tubal {

/// sign(x) * max(|x| - tau, 0)
double soft_threshold(double x, double tau);

/// Partial singular value thresholding. With y = U diag(sigma) V^H (sigma
/// non-increasing), returns U diag(sigma') V^H where the largest n_keep
/// values pass through untouched and the tail is soft-thresholded:
///   sigma'_i = sigma_i            for i <= n_keep
///   sigma'_i = max(sigma_i-tau,0) otherwise.
/// This is the global minimizer of tau*||X||_{p=N} + 0.5*||X-Y||_F^2.
/// n_keep = 0 reduces to classical singular value thresholding.
/// Note the kept head is never clamped: sigma_i - tau < 0 can only occur in
/// the tail, which distinguishes this operator from plain SVT.
Eigen::MatrixXcd psvt_matrix(const Eigen::MatrixXcd& y, Index n_keep,
                             double tau);

/// Threshold tau = lambda/beta plus the per-slice rank targets N.
struct ProxParams {
  double tau = 0.0;
  RankTarget n_target = Index{0};
};

/// arg min over X of tau*||X||_PSTNN + 0.5*||X-B||_F^2, computed slice by
/// slice in the Fourier domain (the objective decouples across slices).
/// Conjugate-symmetric slice pairs share one PSVT evaluation, which requires
/// the rank targets to be mirror-symmetric (N_k == N_{n3-k}) and keeps the
/// result exactly real.
Tensor3 pstnn_prox_tensor(const Tensor3& b, const ProxParams& params);

}  // namespace tubal
