#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tubal/solvers.hpp"
#include "tubal/tensor.hpp"

namespace tubal::synth {

/// Random tensor of tubal-rank at most r (equal to r almost surely):
/// t_product(P, Q) with P: n1×r×n3 and Q: r×n2×n3 filled with i.i.d.
/// Gaussian entries of mean 0 and variance 1/sqrt(n1·n3), i.e. entry
/// std (n1·n3)^(-1/4). Deterministic under seed (P drawn from the child
/// stream {0}, Q from {1}).
/// Throws InvalidRank unless 1 <= r <= min(n1,n2).
Tensor3 gen_low_tubal_rank(Index n1, Index n2, Index n3, Index r,
                           std::uint64_t seed);

/// Observation set with exactly round(rate·n1·n2·n3) entries observed,
/// chosen uniformly without replacement. Deterministic under seed.
/// Throws InvalidConfig unless rate ∈ (0, 1].
Mask sample_mask(Index n1, Index n2, Index n3, double rate,
                 std::uint64_t seed);

/// Sparse corruption: exactly round(rho_s·total) entries (uniform without
/// replacement) receive additive noise drawn from Uniform[lo, hi); all other
/// entries are returned bit-identical. Returns the corrupted tensor and the
/// mask of corrupted positions. Deterministic under seed.
/// Throws InvalidConfig unless rho_s ∈ [0, 1) and lo < hi (lo == hi == 0
/// with rho_s == 0 is also accepted).
std::pair<Tensor3, Mask> corrupt_sparse(const Tensor3& a, double rho_s,
                                        double lo, double hi,
                                        std::uint64_t seed);

/// Default additive-noise range for corrupt_sparse.
inline constexpr double kNoiseLo = -1.0;
inline constexpr double kNoiseHi = 1.0;

inline std::pair<Tensor3, Mask> corrupt_sparse(const Tensor3& a, double rho_s,
                                               std::uint64_t seed) {
  return corrupt_sparse(a, rho_s, kNoiseLo, kNoiseHi, seed);
}

/// Low-rank surrogate used by a phase-diagram trial: the partial sum with
/// N = ground-truth rank (kPstnn) or the full nuclear norm, N = 0 (kTnn).
enum class Method { kPstnn, kTnn };

/// Phase-diagram experiment description: one (rank, rate) grid on fixed
/// dims. `rates` holds sampling rates for completion grids and corruption
/// sparsities for robust-PCA grids.
struct GridSpec {
  Index n1 = 0, n2 = 0, n3 = 0;
  std::vector<Index> ranks;
  std::vector<double> rates;
};

/// Success-ratio grid: cells[i*rates.size() + j] is the fraction of
/// successful recoveries at (ranks[i], rates[j]); every cell is a multiple
/// of 1/trials in [0, 1].
struct SuccessGrid {
  std::vector<Index> axis1;   // tubal-ranks
  std::vector<double> axis2;  // sampling rates or sparsities
  std::vector<double> cells;  // row-major, axis1 × axis2
  Index trials = 0;
  std::uint64_t seed = 0;

  double cell(std::size_t i, std::size_t j) const {
    return cells[i * axis2.size() + j];
  }
  double total() const;
};

/// Harness controls shared by both phase diagrams. `solver` supplies
/// epsilon / max_iters / beta / lambda overrides; its n_target and seed
/// fields are ignored (the harness sets both per trial).
struct PhaseParams {
  Method method = Method::kPstnn;
  Index trials = 10;
  std::uint64_t seed = 0;
  int jobs = 1;                       // >1 runs trials on a thread pool
  double success_threshold = 1e-3;    // success iff rse < threshold
  SolverConfig solver{};
};

/// Tensor-completion phase diagram. Each trial regenerates its ground truth
/// and mask from streams derived as {cell, trial, purpose} with purposes
/// 0 = ground truth, 1 = mask, 2 = solver initialization, so parallel and
/// sequential runs produce identical grids. A trial counts as a success iff
/// rse(recovered, truth) < success_threshold; solver exceptions count as
/// failures and the run continues.
SuccessGrid phase_diagram_tc(const GridSpec& grid, const PhaseParams& params);

/// Robust-PCA phase diagram over (rank, sparsity) cells; same seeding and
/// success rules as phase_diagram_tc, with purpose 1 seeding the corruption.
SuccessGrid phase_diagram_rpca(const GridSpec& grid,
                               const PhaseParams& params);

/// Sensitivity of completion to its random initialization: solves one fixed
/// problem (ground truth from child stream {0}, observation mask covering
/// 1 − missing_rate of the entries from {1}) `runs` times, run k using
/// solver seed {2, k}, and returns the RSE of every run. Deterministic
/// under seed.
std::vector<double> init_sensitivity(Index n1, Index n2, Index n3, Index r,
                                     double missing_rate, Index runs,
                                     std::uint64_t seed,
                                     const SolverConfig& solver = {});

}  // namespace tubal::synth
