#include "tubal/solvers.hpp"

#include <cmath>
#include <string>

#include "tubal/errors.hpp"
#include "tubal/prox.hpp"
#include "tubal/rng.hpp"

namespace tubal {

namespace {

double validated_beta(const SolverConfig& cfg, double fallback) {
  const double beta = cfg.beta.value_or(fallback);
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw InvalidConfig("beta must be positive");
  return beta;
}

void validate_common(const Tensor3& o, const SolverConfig& cfg) {
  if (!o.all_finite())
    throw InvalidConfig("observed tensor has non-finite entries");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
    throw InvalidConfig("epsilon must be positive");
  if (cfg.max_iters < 1) throw InvalidConfig("max_iters must be >= 1");
  // fail fast on a bad rank target instead of inside the first prox call
  resolve_rank_target(cfg.n_target, o.n1(), o.n2(), o.n3());
}

double inf_diff(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  for (Index p = 0; p < a.size(); ++p)
    m = std::max(m, std::abs(a.data()[p] - b.data()[p]));
  return m;
}

}  // namespace

double default_lambda(Index n1, Index n2, Index n3) {
  return 1.0 / std::sqrt(static_cast<double>(std::max(n1, n2) * n3));
}

std::pair<bool, TraceRow> check_convergence(
    Index iter, const Tensor3& primary_prev, const Tensor3& primary_curr,
    const Tensor3& secondary_prev, const Tensor3& secondary_curr,
    const Tensor3& feasibility_gap, double epsilon) {
  TraceRow row;
  row.iter = iter;
  row.delta_primary = inf_diff(primary_curr, primary_prev);
  row.delta_secondary = inf_diff(secondary_curr, secondary_prev);
  row.residual = inf_norm(feasibility_gap);
  const bool converged = row.delta_primary <= epsilon &&
                         row.delta_secondary <= epsilon &&
                         row.residual <= epsilon;
  return {converged, row};
}

RecoveryResult complete(const Tensor3& o, const Mask& mask,
                        const SolverConfig& cfg) {
  if (!mask.same_dims(o))
    throw DimensionMismatch("complete: mask and tensor dims differ");
  validate_common(o, cfg);
  if (mask.count_observed() == 0)
    throw InvalidConfig("complete: mask has no observed entries");
  const double beta = validated_beta(cfg, kDefaultBetaTc);
  const ProxParams prox{1.0 / beta, cfg.n_target};
  const Index n1 = o.n1(), n2 = o.n2(), n3 = o.n3();

  Tensor3 x = o;
  rng::Stream stream(cfg.seed);
  for (Index p = 0; p < x.size(); ++p)
    if (!mask[p]) x.data()[p] = stream.uniform();
  Tensor3 y = x;
  Tensor3 m(n1, n2, n3);

  RecoveryResult res;
  Tensor3 b(n1, n2, n3), gap(n1, n2, n3);
  for (Index it = 1; it <= cfg.max_iters; ++it) {
    for (Index p = 0; p < b.size(); ++p)
      b.data()[p] = y.data()[p] - m.data()[p] / beta;
    Tensor3 x_next = pstnn_prox_tensor(b, prox);

    Tensor3 y_next(n1, n2, n3);
    for (Index p = 0; p < y_next.size(); ++p)
      y_next.data()[p] = mask[p]
                             ? o.data()[p]
                             : x_next.data()[p] + m.data()[p] / beta;

    for (Index p = 0; p < gap.size(); ++p) {
      gap.data()[p] = x_next.data()[p] - y_next.data()[p];
      m.data()[p] += beta * gap.data()[p];
    }

    auto [converged, row] =
        check_convergence(it, x, x_next, y, y_next, gap, cfg.epsilon);
    res.trace.push_back(row);
    x = std::move(x_next);
    y = std::move(y_next);
    if (converged) {
      res.converged = true;
      break;
    }
  }
  res.iterations = static_cast<Index>(res.trace.size());
  res.x = std::move(y);  // the Y iterate satisfies the data constraint exactly
  return res;
}

RecoveryResult rpca(const Tensor3& o, const SolverConfig& cfg) {
  validate_common(o, cfg);
  const double beta = validated_beta(cfg, kDefaultBetaRpca);
  const double lambda =
      cfg.lambda.value_or(default_lambda(o.n1(), o.n2(), o.n3()));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidConfig("lambda must be positive");
  const ProxParams prox{1.0 / beta, cfg.n_target};
  const Index n1 = o.n1(), n2 = o.n2(), n3 = o.n3();

  Tensor3 l = o;
  Tensor3 e(n1, n2, n3), m(n1, n2, n3);

  RecoveryResult res;
  Tensor3 b(n1, n2, n3), gap(n1, n2, n3);
  for (Index it = 1; it <= cfg.max_iters; ++it) {
    for (Index p = 0; p < b.size(); ++p)
      b.data()[p] = o.data()[p] - e.data()[p] + m.data()[p] / beta;
    Tensor3 l_next = pstnn_prox_tensor(b, prox);

    Tensor3 e_next(n1, n2, n3);
    for (Index p = 0; p < e_next.size(); ++p)
      e_next.data()[p] = soft_threshold(
          o.data()[p] - l_next.data()[p] + m.data()[p] / beta, lambda / beta);

    for (Index p = 0; p < gap.size(); ++p) {
      gap.data()[p] = o.data()[p] - l_next.data()[p] - e_next.data()[p];
      m.data()[p] += beta * gap.data()[p];
    }

    auto [converged, row] =
        check_convergence(it, l, l_next, e, e_next, gap, cfg.epsilon);
    res.trace.push_back(row);
    l = std::move(l_next);
    e = std::move(e_next);
    if (converged) {
      res.converged = true;
      break;
    }
  }
  res.iterations = static_cast<Index>(res.trace.size());
  res.x = std::move(l);
  res.e = std::move(e);
  return res;
}

}  // namespace tubal
