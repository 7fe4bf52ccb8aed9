#include "tubal/prox.hpp"

#include <cmath>
#include <string>

#include "tubal/errors.hpp"

namespace tubal {

double soft_threshold(double x, double tau) {
  const double mag = std::abs(x) - tau;
  return mag > 0.0 ? (x < 0.0 ? -mag : mag) : 0.0;
}

Eigen::MatrixXcd psvt_matrix(const Eigen::MatrixXcd& y, Index n_keep,
                             double tau) {
  const Index cap = std::min<Index>(y.rows(), y.cols());
  if (n_keep < 0 || n_keep > cap)
    throw InvalidRankTarget("psvt: n_keep " + std::to_string(n_keep) +
                            " outside [0, " + std::to_string(cap) + "]");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw InvalidConfig("psvt: tau must be positive");

  SliceSvd svd = slice_svd(y);
  Eigen::VectorXd sp = svd.s;
  for (Eigen::Index i = n_keep; i < sp.size(); ++i)
    sp(i) = std::max(sp(i) - tau, 0.0);

  // only the leading nonzero part of the spectrum contributes
  Eigen::Index r = sp.size();
  while (r > 0 && sp(r - 1) == 0.0) --r;
  if (r == 0) return Eigen::MatrixXcd::Zero(y.rows(), y.cols());
  return svd.u.leftCols(r) * sp.head(r).asDiagonal() * svd.vh.topRows(r);
}

Tensor3 pstnn_prox_tensor(const Tensor3& b, const ProxParams& params) {
  if (!(params.tau > 0.0) || !std::isfinite(params.tau))
    throw InvalidConfig("pstnn prox: tau must be positive");
  const Index n3 = b.n3();
  const std::vector<Index> n =
      resolve_rank_target(params.n_target, b.n1(), b.n2(), n3);
  // Mirrored slices are handled by conjugation, so their targets must agree.
  for (Index k = 1; k < n3; ++k)
    if (n[static_cast<std::size_t>(k)] != n[static_cast<std::size_t>(n3 - k)])
      throw InvalidRankTarget(
          "rank target must be mirror-symmetric: N[" + std::to_string(k) +
          "] != N[" + std::to_string(n3 - k) + "]");

  FourierTensor bf = fft_mode3(b);
  for (Index k = 0; k <= n3 / 2; ++k)
    bf.slices[static_cast<std::size_t>(k)] =
        psvt_matrix(bf.slices[static_cast<std::size_t>(k)],
                    n[static_cast<std::size_t>(k)], params.tau);
  for (Index k = n3 / 2 + 1; k < n3; ++k)
    bf.slices[static_cast<std::size_t>(k)] =
        bf.slices[static_cast<std::size_t>(n3 - k)].conjugate();
  return ifft_mode3(bf);
}

}  // namespace tubal
