#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tubal/errors.hpp"

namespace tubal {

using Index = std::int64_t;

/// Dense real 3-mode tensor.
///
/// Linear layout (frozen, shared with the .t3b file format): entry (i,j,k)
/// lives at offset i + j*n1 + k*n1*n2. The frontal-slice index k varies
/// slowest; within a slice values are column-major, so slice k maps directly
/// onto an n1 x n2 Eigen matrix.
class Tensor3 {
 public:
  Tensor3() = default;

  /// Zero-initialized tensor; dims must be positive.
  Tensor3(Index n1, Index n2, Index n3) : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1)
      throw DimensionMismatch("tensor dims must be positive");
    data_.assign(static_cast<std::size_t>(n1 * n2 * n3), 0.0);
  }

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }
  Index size() const { return n1_ * n2_ * n3_; }
  bool empty() const { return data_.empty(); }

  double operator()(Index i, Index j, Index k) const {
    return data_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)];
  }
  double& operator()(Index i, Index j, Index k) {
    return data_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)];
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  /// Frontal slice k as an n1 x n2 matrix view.
  Eigen::Map<const Eigen::MatrixXd> slice(Index k) const {
    return {data_.data() + k * n1_ * n2_, n1_, n2_};
  }
  Eigen::Map<Eigen::MatrixXd> slice(Index k) {
    return {data_.data() + k * n1_ * n2_, n1_, n2_};
  }

  bool same_dims(const Tensor3& o) const {
    return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  Index n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> data_;
};

/// Stack of complex frontal slices produced by the mode-3 DFT.
/// For a transform of a real tensor, slice k and slice n3-k (0-based,
/// k = 1..n3-1) are entrywise complex conjugates.
struct FourierTensor {
  Index n1 = 0, n2 = 0, n3 = 0;
  std::vector<Eigen::MatrixXcd> slices;

  FourierTensor() = default;
  FourierTensor(Index n1_, Index n2_, Index n3_) : n1(n1_), n2(n2_), n3(n3_) {
    slices.assign(static_cast<std::size_t>(n3),
                  Eigen::MatrixXcd::Zero(n1, n2));
  }
};

/// Observation set: boolean per entry, same layout as Tensor3.
class Mask {
 public:
  Mask() = default;
  Mask(Index n1, Index n2, Index n3, bool value = false)
      : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1)
      throw DimensionMismatch("mask dims must be positive");
    observed_.assign(static_cast<std::size_t>(n1 * n2 * n3),
                     value ? 1 : 0);
  }

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }
  Index size() const { return n1_ * n2_ * n3_; }

  bool operator[](Index linear) const {
    return observed_[static_cast<std::size_t>(linear)] != 0;
  }
  void set(Index linear, bool v) {
    observed_[static_cast<std::size_t>(linear)] = v ? 1 : 0;
  }
  void set(Index i, Index j, Index k, bool v) {
    set(i + j * n1_ + k * n1_ * n2_, v);
  }
  bool at(Index i, Index j, Index k) const {
    return (*this)[i + j * n1_ + k * n1_ * n2_];
  }

  Index count_observed() const {
    Index c = 0;
    for (auto v : observed_) c += v;
    return c;
  }

  bool same_dims(const Tensor3& t) const {
    return n1_ == t.n1() && n2_ == t.n2() && n3_ == t.n3();
  }

 private:
  Index n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<std::uint8_t> observed_;
};

/// Forward DFT along mode 3, one transform per tube x(i,j,:).
/// Convention: forward unscaled, inverse carries the 1/n3 factor
/// (the MATLAB/FFTW convention). Consequently
/// sum_k ||xhat(k)||_F^2 == n3 * ||x||_F^2.
FourierTensor fft_mode3(const Tensor3& x);

/// Inverse of fft_mode3. The result must be real: if the maximum imaginary
/// residue exceeds 1e-10 * ||result||_F the input was not conjugate
/// symmetric and NonRealResult is thrown.
Tensor3 ifft_mode3(const FourierTensor& xf);

/// Mode-n unfolding: element (i1,i2,i3) maps to row i_n and the column
/// indexed by the remaining indices, earlier modes varying fastest.
Eigen::MatrixXd unfold(const Tensor3& x, int mode);

/// Inverse of unfold for the given mode and target dims.
Tensor3 fold(const Eigen::MatrixXd& m, int mode, Index n1, Index n2, Index n3);

double inner(const Tensor3& x, const Tensor3& y);
double fro_norm(const Tensor3& x);
double inf_norm(const Tensor3& x);

}  // namespace tubal
