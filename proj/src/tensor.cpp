#include "tubal/tensor.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

namespace tubal {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One batched 1-D c2c transform over all n1*n2 tubes. Tubes stride n1*n2
// in the linear layout and consecutive tubes are adjacent (dist 1).
void dft_mode3(std::complex<double>* in, std::complex<double>* out, Index n1,
               Index n2, Index n3, int sign) {
  int n = static_cast<int>(n3);
  int howmany = static_cast<int>(n1 * n2);
  int stride = static_cast<int>(n1 * n2);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(
        1, &n, howmany, reinterpret_cast<fftw_complex*>(in), nullptr, stride,
        1, reinterpret_cast<fftw_complex*>(out), nullptr, stride, 1, sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

FourierTensor fft_mode3(const Tensor3& x) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  std::vector<std::complex<double>> in(static_cast<std::size_t>(x.size()));
  std::vector<std::complex<double>> out(in.size());
  for (Index p = 0; p < x.size(); ++p) in[static_cast<std::size_t>(p)] = x.data()[p];
  dft_mode3(in.data(), out.data(), n1, n2, n3, FFTW_FORWARD);

  FourierTensor xf(n1, n2, n3);
  for (Index k = 0; k < n3; ++k)
    xf.slices[static_cast<std::size_t>(k)] =
        Eigen::Map<const Eigen::MatrixXcd>(out.data() + k * n1 * n2, n1, n2);
  return xf;
}

Tensor3 ifft_mode3(const FourierTensor& xf) {
  const Index n1 = xf.n1, n2 = xf.n2, n3 = xf.n3;
  if (n1 < 1 || n2 < 1 || n3 < 1 ||
      xf.slices.size() != static_cast<std::size_t>(n3))
    throw DimensionMismatch("FourierTensor has inconsistent dims");
  for (const auto& s : xf.slices)
    if (s.rows() != n1 || s.cols() != n2)
      throw DimensionMismatch("FourierTensor slice has wrong shape");

  std::vector<std::complex<double>> in(static_cast<std::size_t>(n1 * n2 * n3));
  std::vector<std::complex<double>> out(in.size());
  for (Index k = 0; k < n3; ++k)
    Eigen::Map<Eigen::MatrixXcd>(in.data() + k * n1 * n2, n1, n2) =
        xf.slices[static_cast<std::size_t>(k)];
  dft_mode3(in.data(), out.data(), n1, n2, n3, FFTW_BACKWARD);

  const double scale = 1.0 / static_cast<double>(n3);
  double norm_sq = 0.0, max_imag = 0.0;
  Tensor3 x(n1, n2, n3);
  for (Index p = 0; p < x.size(); ++p) {
    const std::complex<double> z = out[static_cast<std::size_t>(p)] * scale;
    x.data()[p] = z.real();
    norm_sq += std::norm(z);
    max_imag = std::max(max_imag, std::abs(z.imag()));
  }
  if (max_imag > 1e-10 * std::sqrt(norm_sq))
    throw NonRealResult("inverse mode-3 DFT has imaginary residue " +
                        std::to_string(max_imag) +
                        "; input is not conjugate symmetric");
  return x;
}

Eigen::MatrixXd unfold(const Tensor3& x, int mode) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  Eigen::MatrixXd m;
  switch (mode) {
    case 1:
      m.resize(n1, n2 * n3);
      for (Index k = 0; k < n3; ++k)
        for (Index j = 0; j < n2; ++j)
          for (Index i = 0; i < n1; ++i) m(i, j + k * n2) = x(i, j, k);
      break;
    case 2:
      m.resize(n2, n1 * n3);
      for (Index k = 0; k < n3; ++k)
        for (Index j = 0; j < n2; ++j)
          for (Index i = 0; i < n1; ++i) m(j, i + k * n1) = x(i, j, k);
      break;
    case 3:
      m.resize(n3, n1 * n2);
      for (Index k = 0; k < n3; ++k)
        for (Index j = 0; j < n2; ++j)
          for (Index i = 0; i < n1; ++i) m(k, i + j * n1) = x(i, j, k);
      break;
    default:
      throw DimensionMismatch("unfold mode must be 1, 2, or 3");
  }
  return m;
}

Tensor3 fold(const Eigen::MatrixXd& m, int mode, Index n1, Index n2,
             Index n3) {
  Index rows = 0, cols = 0;
  switch (mode) {
    case 1: rows = n1; cols = n2 * n3; break;
    case 2: rows = n2; cols = n1 * n3; break;
    case 3: rows = n3; cols = n1 * n2; break;
    default:
      throw DimensionMismatch("fold mode must be 1, 2, or 3");
  }
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionMismatch("fold: matrix shape does not match target dims");

  Tensor3 x(n1, n2, n3);
  for (Index k = 0; k < n3; ++k)
    for (Index j = 0; j < n2; ++j)
      for (Index i = 0; i < n1; ++i) {
        switch (mode) {
          case 1: x(i, j, k) = m(i, j + k * n2); break;
          case 2: x(i, j, k) = m(j, i + k * n1); break;
          case 3: x(i, j, k) = m(k, i + j * n1); break;
        }
      }
  return x;
}

double inner(const Tensor3& x, const Tensor3& y) {
  if (!x.same_dims(y)) throw DimensionMismatch("inner: dims differ");
  double s = 0.0;
  for (Index p = 0; p < x.size(); ++p) s += x.data()[p] * y.data()[p];
  return s;
}

double fro_norm(const Tensor3& x) {
  double s = 0.0;
  for (Index p = 0; p < x.size(); ++p) s += x.data()[p] * x.data()[p];
  return std::sqrt(s);
}

double inf_norm(const Tensor3& x) {
  double s = 0.0;
  for (Index p = 0; p < x.size(); ++p) s = std::max(s, std::abs(x.data()[p]));
  return s;
}

}  // namespace tubal
