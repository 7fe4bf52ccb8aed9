#include "tubal/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/metrics.hpp"
#include "tubal/rng.hpp"
#include "tubal/t_algebra.hpp"

namespace tubal::synth {

namespace {

Tensor3 gaussian_tensor(Index n1, Index n2, Index n3, double stddev,
                        std::uint64_t seed) {
  Tensor3 x(n1, n2, n3);
  rng::Stream s(seed);
  for (Index p = 0; p < x.size(); ++p) x.data()[p] = stddev * s.gaussian();
  return x;
}

/// First k entries of a uniform random permutation of [0, total), by
/// partial Fisher-Yates over an index table.
std::vector<Index> sample_without_replacement(Index total, Index k,
                                              rng::Stream& s) {
  std::vector<Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index t = 0; t < k; ++t) {
    const Index j =
        t + static_cast<Index>(s.below(static_cast<std::uint64_t>(total - t)));
    std::swap(idx[static_cast<std::size_t>(t)],
              idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

Index round_count(double fraction, Index total) {
  return static_cast<Index>(
      std::llround(fraction * static_cast<double>(total)));
}

}  // namespace

Tensor3 gen_low_tubal_rank(Index n1, Index n2, Index n3, Index r,
                           std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || n3 < 1)
    throw InvalidRank("gen_low_tubal_rank: dims must be positive");
  if (r < 1 || r > std::min(n1, n2))
    throw InvalidRank("gen_low_tubal_rank: rank " + std::to_string(r) +
                      " outside [1, " + std::to_string(std::min(n1, n2)) +
                      "]");
  // Factor entries ~ N(0, 1/sqrt(n1·n3)): variance (n1·n3)^(-1/2).
  const double stddev =
      std::pow(static_cast<double>(n1) * static_cast<double>(n3), -0.25);
  Tensor3 p =
      gaussian_tensor(n1, r, n3, stddev, rng::derive_seed(seed, {0}));
  Tensor3 q =
      gaussian_tensor(r, n2, n3, stddev, rng::derive_seed(seed, {1}));
  return t_product(p, q);
}

Mask sample_mask(Index n1, Index n2, Index n3, double rate,
                 std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || n3 < 1)
    throw InvalidConfig("sample_mask: dims must be positive");
  if (!(rate > 0.0) || rate > 1.0)
    throw InvalidConfig("sample_mask: rate must be in (0, 1]");
  Mask m(n1, n2, n3);
  const Index total = n1 * n2 * n3;
  const Index count = round_count(rate, total);
  rng::Stream s(seed);
  for (Index lin : sample_without_replacement(total, count, s))
    m.set(lin, true);
  return m;
}

std::pair<Tensor3, Mask> corrupt_sparse(const Tensor3& a, double rho_s,
                                        double lo, double hi,
                                        std::uint64_t seed) {
  if (!(rho_s >= 0.0) || rho_s >= 1.0)
    throw InvalidConfig("corrupt_sparse: rho_s must be in [0, 1)");
  if (!(lo < hi) && rho_s > 0.0)
    throw InvalidConfig("corrupt_sparse: empty noise range");
  Tensor3 out = a;
  Mask support(a.n1(), a.n2(), a.n3());
  const Index count = round_count(rho_s, a.size());
  rng::Stream s(seed);
  for (Index lin : sample_without_replacement(a.size(), count, s)) {
    out.data()[static_cast<std::size_t>(lin)] += s.uniform(lo, hi);
    support.set(lin, true);
  }
  return {std::move(out), std::move(support)};
}

double SuccessGrid::total() const {
  return std::accumulate(cells.begin(), cells.end(), 0.0);
}

namespace {

void validate_grid(const GridSpec& grid, const PhaseParams& params) {
  if (grid.n1 < 1 || grid.n2 < 1 || grid.n3 < 1)
    throw InvalidConfig("phase diagram: dims must be positive");
  if (grid.ranks.empty() || grid.rates.empty())
    throw InvalidConfig("phase diagram: empty grid axis");
  for (Index r : grid.ranks)
    if (r < 1 || r > std::min(grid.n1, grid.n2))
      throw InvalidConfig("phase diagram: rank out of range");
  if (params.trials < 1)
    throw InvalidConfig("phase diagram: trials must be >= 1");
  if (!(params.success_threshold > 0.0))
    throw InvalidConfig("phase diagram: threshold must be positive");
}

/// Runs `count` independent trials (possibly on a thread pool) and returns
/// each trial's success flag. Results depend only on the trial index, never
/// on scheduling, so jobs > 1 reproduces the sequential grid exactly.
std::vector<char> run_trials(Index count, int jobs,
                             const std::function<bool(Index)>& trial) {
  std::vector<char> ok(static_cast<std::size_t>(count), 0);
  if (jobs <= 1) {
    for (Index t = 0; t < count; ++t) ok[static_cast<std::size_t>(t)] = trial(t);
    return ok;
  }
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (;;) {
      const Index t = next.fetch_add(1);
      if (t >= count) return;
      ok[static_cast<std::size_t>(t)] = trial(t);
    }
  };
  const int n_threads = std::min<int>(
      jobs, static_cast<int>(std::min<Index>(count, 256)));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return ok;
}

enum class Task { kComplete, kRpca };

SuccessGrid phase_diagram(const GridSpec& grid, const PhaseParams& params,
                          Task task) {
  validate_grid(grid, params);
  SuccessGrid out;
  out.axis1 = grid.ranks;
  out.axis2 = grid.rates;
  out.trials = params.trials;
  out.seed = params.seed;
  const Index n_cells = static_cast<Index>(grid.ranks.size()) *
                        static_cast<Index>(grid.rates.size());
  const Index n_trials = n_cells * params.trials;

  auto trial = [&](Index flat) -> bool {
    const Index cell = flat / params.trials;
    const Index t = flat % params.trials;
    const std::size_t ci = static_cast<std::size_t>(cell);
    const Index r = grid.ranks[ci / grid.rates.size()];
    const double rate = grid.rates[ci % grid.rates.size()];
    const std::uint64_t c = static_cast<std::uint64_t>(cell);
    const std::uint64_t ti = static_cast<std::uint64_t>(t);
    try {
      Tensor3 truth =
          gen_low_tubal_rank(grid.n1, grid.n2, grid.n3, r,
                             rng::derive_seed(params.seed, {c, ti, 0}));
      SolverConfig cfg = params.solver;
      cfg.n_target = params.method == Method::kPstnn ? r : Index{0};
      cfg.seed = rng::derive_seed(params.seed, {c, ti, 2});
      const Tensor3 rec = [&]() -> Tensor3 {
        if (task == Task::kComplete) {
          Mask mask = sample_mask(grid.n1, grid.n2, grid.n3, rate,
                                  rng::derive_seed(params.seed, {c, ti, 1}));
          Tensor3 o(grid.n1, grid.n2, grid.n3);
          for (Index p = 0; p < o.size(); ++p)
            if (mask[p]) o.data()[p] = truth.data()[p];
          return complete(o, mask, cfg).x;
        }
        auto [o, support] = corrupt_sparse(
            truth, rate, rng::derive_seed(params.seed, {c, ti, 1}));
        return rpca(o, cfg).x;
      }();
      return rse(rec, truth) < params.success_threshold;
    } catch (const Error&) {
      return false;  // a failed trial is an unsuccessful recovery
    }
  };

  const std::vector<char> ok = run_trials(n_trials, params.jobs, trial);
  // integer success counts divided once, so saturated cells are exactly 1.0
  std::vector<Index> hits(static_cast<std::size_t>(n_cells), 0);
  for (Index f = 0; f < n_trials; ++f)
    if (ok[static_cast<std::size_t>(f)])
      ++hits[static_cast<std::size_t>(f / params.trials)];
  out.cells.resize(static_cast<std::size_t>(n_cells));
  for (std::size_t c = 0; c < out.cells.size(); ++c)
    out.cells[c] = static_cast<double>(hits[c]) /
                   static_cast<double>(params.trials);
  return out;
}

}  // namespace

SuccessGrid phase_diagram_tc(const GridSpec& grid, const PhaseParams& params) {
  return phase_diagram(grid, params, Task::kComplete);
}

SuccessGrid phase_diagram_rpca(const GridSpec& grid,
                               const PhaseParams& params) {
  return phase_diagram(grid, params, Task::kRpca);
}

std::vector<double> init_sensitivity(Index n1, Index n2, Index n3, Index r,
                                     double missing_rate, Index runs,
                                     std::uint64_t seed,
                                     const SolverConfig& solver) {
  if (runs < 1) throw InvalidConfig("init_sensitivity: runs must be >= 1");
  if (!(missing_rate >= 0.0) || missing_rate >= 1.0)
    throw InvalidConfig("init_sensitivity: missing_rate must be in [0, 1)");
  Tensor3 truth =
      gen_low_tubal_rank(n1, n2, n3, r, rng::derive_seed(seed, {0}));
  Mask mask = sample_mask(n1, n2, n3, 1.0 - missing_rate,
                          rng::derive_seed(seed, {1}));
  Tensor3 o(n1, n2, n3);
  for (Index p = 0; p < o.size(); ++p)
    if (mask[p]) o.data()[p] = truth.data()[p];
  std::vector<double> rses;
  rses.reserve(static_cast<std::size_t>(runs));
  for (Index k = 0; k < runs; ++k) {
    SolverConfig cfg = solver;
    cfg.n_target = r;
    cfg.seed = rng::derive_seed(seed, {2, static_cast<std::uint64_t>(k)});
    rses.push_back(rse(complete(o, mask, cfg).x, truth));
  }
  return rses;
}

}  // namespace tubal::synth
