#include "tubal/t_algebra.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace tubal {

namespace {

// Fill slices n3/2+1 .. n3-1 as conjugates of their mirrors so the inverse
// transform is exactly real.
void mirror_conjugate(FourierTensor& xf) {
  for (Index k = xf.n3 / 2 + 1; k < xf.n3; ++k)
    xf.slices[static_cast<std::size_t>(k)] =
        xf.slices[static_cast<std::size_t>(xf.n3 - k)].conjugate();
}

// Singular values only (no vectors); divide-and-conquer with a QR-based
// retry, like slice_svd below.
Eigen::VectorXd singular_values(Eigen::MatrixXcd work) {
  const auto m = static_cast<lapack_int>(work.rows());
  const auto n = static_cast<lapack_int>(work.cols());
  Eigen::VectorXd s(std::min(m, n));
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(),
                                   m, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    std::vector<double> superb(
        static_cast<std::size_t>(std::max<lapack_int>(1, std::min(m, n))));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, work.data(), m,
                          s.data(), nullptr, 1, nullptr, 1, superb.data());
    if (info != 0)
      throw SvdFailure("complex SVD failed (info=" + std::to_string(info) +
                       ")");
  }
  return s;
}

}  // namespace

std::vector<Index> resolve_rank_target(const RankTarget& n_target, Index n1,
                                       Index n2, Index n3) {
  const Index cap = std::min(n1, n2);
  auto check = [cap](Index v) {
    if (v < 0 || v > cap)
      throw InvalidRankTarget("rank target " + std::to_string(v) +
                              " outside [0, " + std::to_string(cap) + "]");
  };
  std::vector<Index> n(static_cast<std::size_t>(n3));
  if (const Index* scalar = std::get_if<Index>(&n_target)) {
    check(*scalar);
    std::fill(n.begin(), n.end(), *scalar);
  } else {
    const auto& vec = std::get<std::vector<Index>>(n_target);
    if (vec.size() != static_cast<std::size_t>(n3))
      throw InvalidRankTarget("rank target has " +
                              std::to_string(vec.size()) +
                              " entries, tensor has n3=" + std::to_string(n3));
    for (Index v : vec) check(v);
    n = vec;
  }
  return n;
}

SliceSvd slice_svd(const Eigen::MatrixXcd& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  if (m < 1 || n < 1) throw DimensionMismatch("slice_svd: empty matrix");
  SliceSvd out;
  out.u.resize(m, m);
  out.s.resize(std::min(m, n));
  out.vh.resize(n, n);

  Eigen::MatrixXcd work = a;
  lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, work.data(), m,
                     out.s.data(), out.u.data(), m, out.vh.data(), n);
  if (info != 0) {
    // The divide-and-conquer driver can fail to converge on rare inputs;
    // retry with the slower QR-based one before giving up.
    work = a;
    std::vector<double> superb(
        static_cast<std::size_t>(std::max<lapack_int>(1, std::min(m, n))));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'A', 'A', m, n, work.data(), m,
                          out.s.data(), out.u.data(), m, out.vh.data(), n,
                          superb.data());
    if (info != 0)
      throw SvdFailure("complex SVD failed (info=" + std::to_string(info) +
                       ")");
  }
  return out;
}

std::vector<Eigen::VectorXd> slice_singular_values(const Tensor3& a) {
  const FourierTensor af = fft_mode3(a);
  const Index n3 = a.n3();
  std::vector<Eigen::VectorXd> sv(static_cast<std::size_t>(n3));
  for (Index k = 0; k <= n3 / 2; ++k)
    sv[static_cast<std::size_t>(k)] =
        singular_values(af.slices[static_cast<std::size_t>(k)]);
  for (Index k = n3 / 2 + 1; k < n3; ++k)
    sv[static_cast<std::size_t>(k)] = sv[static_cast<std::size_t>(n3 - k)];
  return sv;
}

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3())
    throw DimensionMismatch(
        "t_product: " + std::to_string(a.n1()) + "x" +
        std::to_string(a.n2()) + "x" + std::to_string(a.n3()) + " by " +
        std::to_string(b.n1()) + "x" + std::to_string(b.n2()) + "x" +
        std::to_string(b.n3()));
  const FourierTensor af = fft_mode3(a);
  const FourierTensor bf = fft_mode3(b);
  FourierTensor cf(a.n1(), b.n2(), a.n3());
  for (Index k = 0; k <= a.n3() / 2; ++k)
    cf.slices[static_cast<std::size_t>(k)] =
        af.slices[static_cast<std::size_t>(k)] *
        bf.slices[static_cast<std::size_t>(k)];
  mirror_conjugate(cf);
  return ifft_mode3(cf);
}

Tensor3 conj_transpose(const Tensor3& a) {
  Tensor3 at(a.n2(), a.n1(), a.n3());
  at.slice(0) = a.slice(0).transpose();
  for (Index k = 1; k < a.n3(); ++k)
    at.slice(k) = a.slice(a.n3() - k).transpose();
  return at;
}

Tensor3 identity_tensor(Index n, Index n3) {
  Tensor3 id(n, n, n3);
  id.slice(0).setIdentity();
  return id;
}

TSvdFactors t_svd(const Tensor3& a) {
  if (!a.all_finite())
    throw SvdFailure("t_svd: input has non-finite entries");
  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  const FourierTensor af = fft_mode3(a);
  FourierTensor uf(n1, n1, n3), sf(n1, n2, n3), vf(n2, n2, n3);
  for (Index k = 0; k <= n3 / 2; ++k) {
    const auto ki = static_cast<std::size_t>(k);
    SliceSvd svd = slice_svd(af.slices[ki]);
    uf.slices[ki] = svd.u;
    sf.slices[ki].setZero();
    for (Index i = 0; i < svd.s.size(); ++i)
      sf.slices[ki](i, i) = svd.s(i);
    vf.slices[ki] = svd.vh.adjoint();
  }
  mirror_conjugate(uf);
  mirror_conjugate(sf);
  mirror_conjugate(vf);
  return {ifft_mode3(uf), ifft_mode3(sf), ifft_mode3(vf)};
}

MultiRank multi_rank(const Tensor3& a, std::optional<double> tol) {
  if (tol && (*tol < 0.0 || !std::isfinite(*tol)))
    throw InvalidConfig("rank tolerance must be finite and non-negative");
  const auto sv = slice_singular_values(a);
  double t;
  if (tol) {
    t = *tol;
  } else {
    double smax = 0.0;
    for (const auto& s : sv)
      if (s.size() > 0) smax = std::max(smax, s(0));
    t = static_cast<double>(std::max(a.n1(), a.n2())) *
        std::numeric_limits<double>::epsilon() * smax;
  }
  MultiRank mr;
  mr.ranks.reserve(sv.size());
  for (const auto& s : sv) {
    Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > t) ++r;
    mr.ranks.push_back(r);
  }
  return mr;
}

Index tubal_rank(const Tensor3& a, std::optional<double> tol) {
  return multi_rank(a, tol).tubal();
}

double tnn(const Tensor3& a) {
  double sum = 0.0;
  for (const auto& s : slice_singular_values(a)) sum += s.sum();
  return sum;
}

double pstnn(const Tensor3& a, const RankTarget& n_target) {
  const std::vector<Index> n =
      resolve_rank_target(n_target, a.n1(), a.n2(), a.n3());
  const auto sv = slice_singular_values(a);
  double sum = 0.0;
  for (Index k = 0; k < a.n3(); ++k) {
    const Eigen::VectorXd& s = sv[static_cast<std::size_t>(k)];
    for (Eigen::Index i = n[static_cast<std::size_t>(k)]; i < s.size(); ++i)
      sum += s(i);
  }
  return sum;
}

}  // namespace tubal
