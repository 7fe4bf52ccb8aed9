#include "tubal/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tubal/errors.hpp"

namespace tubal {

namespace {

double peak_of(const Tensor3& t) {
  double peak = -std::numeric_limits<double>::infinity();
  for (Index p = 0; p < t.size(); ++p)
    peak = std::max(peak, t.data()[p]);
  return peak;
}

// Normalized 1-D Gaussian taps for a window of odd width w.
Eigen::VectorXd gaussian_taps(Index w, double sigma) {
  Eigen::VectorXd g(w);
  const Index h = (w - 1) / 2;
  for (Index u = 0; u < w; ++u) {
    const double d = static_cast<double>(u - h);
    g(u) = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return g / g.sum();
}

// Valid-mode separable Gaussian filter: filter columns then rows, so the
// result is (rows-w+1) x (cols-w+1).
Eigen::MatrixXd gauss_filter(const Eigen::MatrixXd& m,
                             const Eigen::VectorXd& g) {
  const Index w = g.size();
  Eigen::MatrixXd cols(m.rows() - w + 1, m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i + w <= m.rows(); ++i)
      cols(i, j) = g.dot(m.col(j).segment(i, w));
  Eigen::MatrixXd out(cols.rows(), m.cols() - w + 1);
  for (Index i = 0; i < cols.rows(); ++i)
    for (Index j = 0; j + w <= m.cols(); ++j)
      out(i, j) = g.dot(cols.row(i).segment(j, w).transpose());
  return out;
}

}  // namespace

double psnr(const Tensor3& y, const Tensor3& y_true) {
  if (!y.same_dims(y_true))
    throw DimensionMismatch("psnr: dims differ");
  const double peak = peak_of(y_true);
  if (peak == 0.0)
    throw ZeroReference("psnr: reference peak is zero");
  double se = 0.0;
  for (Index p = 0; p < y.size(); ++p) {
    const double d = y.data()[p] - y_true.data()[p];
    se += d * d;
  }
  if (se == 0.0) return kInfinitePsnr;
  const double mse = se / static_cast<double>(y.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Tensor3& y, const Tensor3& y_true) {
  if (!y.same_dims(y_true))
    throw DimensionMismatch("ssim: dims differ");
  const double range = peak_of(y_true);
  if (range <= 0.0)
    throw ZeroReference("ssim: dynamic range of the reference is not positive");
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);

  Index w = std::min<Index>(11, std::min(y.n1(), y.n2()));
  if (w % 2 == 0) --w;
  const Eigen::VectorXd g = gaussian_taps(w, 1.5);

  double total = 0.0;
  for (Index k = 0; k < y.n3(); ++k) {
    const Eigen::MatrixXd a = y.slice(k);
    const Eigen::MatrixXd b = y_true.slice(k);
    const Eigen::MatrixXd mu_a = gauss_filter(a, g);
    const Eigen::MatrixXd mu_b = gauss_filter(b, g);
    const Eigen::MatrixXd raw_aa = gauss_filter(a.cwiseProduct(a), g);
    const Eigen::MatrixXd raw_bb = gauss_filter(b.cwiseProduct(b), g);
    const Eigen::MatrixXd raw_ab = gauss_filter(a.cwiseProduct(b), g);

    double slice_sum = 0.0;
    for (Index j = 0; j < mu_a.cols(); ++j)
      for (Index i = 0; i < mu_a.rows(); ++i) {
        const double va = raw_aa(i, j) - mu_a(i, j) * mu_a(i, j);
        const double vb = raw_bb(i, j) - mu_b(i, j) * mu_b(i, j);
        const double cov = raw_ab(i, j) - mu_a(i, j) * mu_b(i, j);
        slice_sum += (2.0 * mu_a(i, j) * mu_b(i, j) + c1) *
                     (2.0 * cov + c2) /
                     ((mu_a(i, j) * mu_a(i, j) + mu_b(i, j) * mu_b(i, j) + c1) *
                      (va + vb + c2));
      }
    total += slice_sum / static_cast<double>(mu_a.rows() * mu_a.cols());
  }
  return total / static_cast<double>(y.n3());
}

double rse(const Tensor3& y, const Tensor3& y_true) {
  if (!y.same_dims(y_true))
    throw DimensionMismatch("rse: dims differ");
  double num = 0.0, den = 0.0;
  for (Index p = 0; p < y.size(); ++p) {
    const double d = y.data()[p] - y_true.data()[p];
    num += d * d;
    den += y_true.data()[p] * y_true.data()[p];
  }
  if (den == 0.0) throw ZeroReference("rse: reference tensor is zero");
  return num / den;
}

MetricReport compute_metrics(const Tensor3& y, const Tensor3& y_true) {
  return {psnr(y, y_true), ssim(y, y_true), rse(y, y_true)};
}

}  // namespace tubal
