#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tubal/t_algebra.hpp"
#include "tubal/tensor.hpp"

namespace tubal {

inline constexpr double kDefaultBetaTc = 0.05;
inline constexpr double kDefaultBetaRpca = 0.1;
inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr Index kDefaultMaxIters = 500;

/// Standard sparsity weight for robust PCA.
double default_lambda(Index n1, Index n2, Index n3);

struct SolverConfig {
  /// ADMM penalty. Defaults: kDefaultBetaTc for complete(), kDefaultBetaRpca
  /// for rpca().
  std::optional<double> beta;
  /// Sparsity weight (rpca only). Default 1/sqrt(max(n1,n2)*n3).
  std::optional<double> lambda;
  /// Stopping tolerance on all three inf-norm criteria (inclusive).
  double epsilon = kDefaultEpsilon;
  /// Per-slice rank targets N for the PSTNN prox.
  RankTarget n_target = Index{0};
  Index max_iters = kDefaultMaxIters;
  /// Seed for the random initialization of the unobserved entries (complete
  /// only; rpca is deterministic without it).
  std::uint64_t seed = 0;
};

/// The three stopping quantities of one ADMM iteration.
struct TraceRow {
  Index iter = 0;                // 1-based
  double delta_primary = 0.0;    // inf-norm change of X (TC) or L (RPCA)
  double delta_secondary = 0.0;  // inf-norm change of Y (TC) or E (RPCA)
  double residual = 0.0;         // inf_norm(X-Y) or inf_norm(L+E-O)
};

/// Computes the three stopping quantities and whether all are <= epsilon.
/// feasibility_gap is the constraint violation tensor (X-Y, or O-L-E).
std::pair<bool, TraceRow> check_convergence(
    Index iter, const Tensor3& primary_prev, const Tensor3& primary_curr,
    const Tensor3& secondary_prev, const Tensor3& secondary_curr,
    const Tensor3& feasibility_gap, double epsilon);

struct RecoveryResult {
  /// Completed tensor (complete) or the low-rank part L (rpca). complete()
  /// returns the final Y iterate, so x matches the observations exactly.
  Tensor3 x;
  /// Sparse part E (rpca only).
  std::optional<Tensor3> e;
  Index iterations = 0;
  std::vector<TraceRow> trace;
  bool converged = false;
};

/// Tensor completion by ADMM:
///   X-step  arg min ||X||_PSTNN + (beta/2)||X - (Y - M/beta)||_F^2
///           (prox with tau = 1/beta),
///   Y-step  X + M/beta off the observation set, O on it,
///   M-step  M += beta (X - Y).
/// Initialization: X = O on the observed set, uniform [0,1) (seeded)
/// elsewhere; Y = X; M = 0. Stops when all three inf-norm criteria are
/// <= epsilon, or after max_iters.
RecoveryResult complete(const Tensor3& o, const Mask& mask,
                        const SolverConfig& cfg);

/// Robust PCA by ADMM (O = L + E):
///   L-step  prox at (O - E + M/beta) with tau = 1/beta,
///   E-step  entrywise soft-threshold of (O - L + M/beta) at lambda/beta,
///   M-step  M += beta (O - L - E).
/// Initialization: L = O, E = M = 0.
RecoveryResult rpca(const Tensor3& o, const SolverConfig& cfg);

}  // namespace tubal
