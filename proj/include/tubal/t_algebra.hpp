#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/tensor.hpp"

namespace tubal {

/// Factorization a = u * s * conj_transpose(v) with u (n1 x n1 x n3) and
/// v (n2 x n2 x n3) orthogonal and s (n1 x n2 x n3) f-diagonal. Fourier-domain
/// diagonal entries of s are real, non-negative and non-increasing per slice.
struct TSvdFactors {
  Tensor3 u, s, v;
};

/// Ranks of the Fourier-domain frontal slices; the tubal rank is their max.
struct MultiRank {
  std::vector<Index> ranks;
  Index tubal() const {
    Index m = 0;
    for (Index r : ranks) m = std::max(m, r);
    return m;
  }
};

/// Per-slice rank target N: a scalar broadcast to every slice, or one value
/// per slice.
using RankTarget = std::variant<Index, std::vector<Index>>;

/// Expands a RankTarget to n3 per-slice values, validating
/// 0 <= N_k <= min(n1,n2) and (vector form) length n3.
/// Throws InvalidRankTarget.
std::vector<Index> resolve_rank_target(const RankTarget& n_target, Index n1,
                                       Index n2, Index n3);

/// Full SVD of one complex slice: a = u * diag(s) * vh with u m x m,
/// vh n x n (vh is V^H, not V), s of length min(m,n) non-increasing.
struct SliceSvd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;
  Eigen::MatrixXcd vh;
};

/// Dense complex SVD. Throws SvdFailure if the decomposition fails.
SliceSvd slice_svd(const Eigen::MatrixXcd& a);

/// Singular values of every Fourier-domain frontal slice, non-increasing per
/// slice. Conjugate symmetry is exploited: slice n3-k shares slice k's
/// spectrum, so only the first half is decomposed.
std::vector<Eigen::VectorXd> slice_singular_values(const Tensor3& a);

/// Mode-3 tensor-tensor product: slice-wise matrix product in the Fourier
/// domain (equivalently, circular convolution of tubes).
/// a is n1 x p x n3, b is p x n2 x n3, result is n1 x n2 x n3.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

/// Slice 1 transposed; slice i (i >= 2, 1-based) becomes the transpose of
/// slice n3+2-i. An involution; for n3 = 1 it is the matrix transpose.
Tensor3 conj_transpose(const Tensor3& a);

/// First frontal slice is the n x n identity, all other slices zero; the
/// unit of t_product.
Tensor3 identity_tensor(Index n, Index n3);

/// t-SVD: DFT along mode 3, full complex SVD per Fourier slice, inverse DFT
/// of the stacked factors. SVDs are computed for slices 0..n3/2 only; the
/// rest follow by conjugation, so the outputs are exactly real.
TSvdFactors t_svd(const Tensor3& a);

/// Count of singular values above tol per Fourier slice. Default tol is
/// max(n1,n2) * machine epsilon * (largest singular value over all slices),
/// the standard numerical-rank convention.
MultiRank multi_rank(const Tensor3& a,
                     std::optional<double> tol = std::nullopt);
Index tubal_rank(const Tensor3& a, std::optional<double> tol = std::nullopt);

/// Tensor nuclear norm: sum of the singular values of every Fourier slice.
double tnn(const Tensor3& a);

/// Partial sum of the tensor nuclear norm: per slice k, the sum of singular
/// values beyond the largest N_k. pstnn(a, 0) == tnn(a).
double pstnn(const Tensor3& a, const RankTarget& n_target);

}  // namespace tubal
