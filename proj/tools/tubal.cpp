// tubal — t-SVD tensor algebra front end: completion, robust PCA,
// phase-transition benchmarks, fixture generation, and file inspection.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tubal/errors.hpp"
#include "tubal/io.hpp"
#include "tubal/metrics.hpp"
#include "tubal/solvers.hpp"
#include "tubal/synth.hpp"
#include "tubal/t_algebra.hpp"
#include "tubal/tensor.hpp"
#include "tubal/version.hpp"

namespace {

using tubal::Index;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

Index parse_index(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw tubal::InvalidConfig("not an integer: " + s);
  return static_cast<Index>(v);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw tubal::InvalidConfig("not a number: " + s);
  return v;
}

/// "3" → scalar target broadcast to all slices; "1,2,2,1" → per-slice list.
tubal::RankTarget parse_rank_target(const std::string& s) {
  const std::vector<std::string> parts = split(s, ',');
  if (parts.empty()) throw tubal::InvalidConfig("empty --n-target");
  if (parts.size() == 1) return parse_index(parts[0]);
  std::vector<Index> v;
  v.reserve(parts.size());
  for (const std::string& p : parts) v.push_back(parse_index(p));
  return v;
}

struct Dims {
  Index n1 = 0, n2 = 0, n3 = 0;
};

Dims parse_dims(const std::string& s) {
  const std::vector<std::string> parts = split(s, 'x');
  if (parts.size() != 3)
    throw tubal::InvalidConfig("dims must look like 30x30x20, got: " + s);
  return {parse_index(parts[0]), parse_index(parts[1]),
          parse_index(parts[2])};
}

/// Grid spec: "dims=30x30x20;ranks=1,2,4,8,12;rates=0.1,0.3,0.5,0.7,0.9"
/// (the rates list holds sparsities for rpca benches).
tubal::synth::GridSpec parse_grid_spec(const std::string& s) {
  tubal::synth::GridSpec g;
  bool have_dims = false;
  for (const std::string& field : split(s, ';')) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos)
      throw tubal::InvalidConfig("grid field without '=': " + field);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "dims") {
      const Dims d = parse_dims(value);
      g.n1 = d.n1;
      g.n2 = d.n2;
      g.n3 = d.n3;
      have_dims = true;
    } else if (key == "ranks") {
      for (const std::string& p : split(value, ','))
        g.ranks.push_back(parse_index(p));
    } else if (key == "rates") {
      for (const std::string& p : split(value, ','))
        g.rates.push_back(parse_double(p));
    } else {
      throw tubal::InvalidConfig("unknown grid field: " + key);
    }
  }
  if (!have_dims || g.ranks.empty() || g.rates.empty())
    throw tubal::InvalidConfig(
        "grid spec needs dims=, ranks= and rates= fields");
  return g;
}

// ------------------------------------------------------------------- io

/// A directory path loads as a PGM stack; anything else as .t3b.
tubal::Tensor3 load_any(const std::string& path) {
  if (std::filesystem::is_directory(path))
    return tubal::io::load_image_stack(path);
  return tubal::io::load_tensor(path);
}

nlohmann::ordered_json json_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

nlohmann::ordered_json report_json(const tubal::MetricReport& m,
                                   Index iterations, bool converged) {
  nlohmann::ordered_json j;
  j["psnr"] = json_metric(m.psnr);
  j["ssim"] = json_metric(m.ssim);
  j["rse"] = json_metric(m.rse);
  j["iterations"] = iterations;
  j["converged"] = converged;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw tubal::Error("cannot open for writing: " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.flush();
  if (!f) throw tubal::Error("write failed: " + path);
}

// --------------------------------------------------------------- manifest

struct ManifestBuilder {
  tubal::io::RunManifest m;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit ManifestBuilder(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
      if (i) m.command += ' ';
      m.command += argv[i];
    }
    m.version = tubal::kVersion;
  }

  void config(const std::string& key, const std::string& value) {
    m.config.emplace_back(key, value);
  }
  void config(const std::string& key, double value) {
    config(key, tubal::io::format_double(value));
  }
  void config(const std::string& key, Index value) {
    config(key, std::to_string(value));
  }

  /// Writes the manifest next to the primary output (= first recorded
  /// output). Commands that wrote no file skip the manifest.
  void finish() {
    if (m.outputs.empty()) return;
    m.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    tubal::io::write_manifest(m, m.outputs.front() + ".manifest.json");
  }
};

std::string rank_target_str(const tubal::RankTarget& t) {
  if (const auto* s = std::get_if<Index>(&t)) return std::to_string(*s);
  std::string out;
  for (Index v : std::get<std::vector<Index>>(t)) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

// ------------------------------------------------------------ subcommands

struct SolverFlags {
  std::string n_target_str;
  std::optional<double> beta;
  std::optional<double> lambda;  // rpca only
  double epsilon = tubal::kDefaultEpsilon;
  Index max_iters = tubal::kDefaultMaxIters;
  std::uint64_t seed = 0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags* f, bool with_lambda) {
  cmd->add_option("--n-target", f->n_target_str,
                  "rank target N: scalar or comma list per frontal slice")
      ->required();
  cmd->add_option("--beta", f->beta, "ADMM penalty parameter");
  if (with_lambda)
    cmd->add_option("--lambda", f->lambda,
                    "sparsity weight (default 1/sqrt(max(n1,n2)*n3))");
  cmd->add_option("--eps", f->epsilon, "convergence tolerance");
  cmd->add_option("--max-iters", f->max_iters, "iteration cap");
  cmd->add_option("--seed", f->seed, "RNG seed");
}

tubal::SolverConfig to_config(const SolverFlags& f) {
  tubal::SolverConfig cfg;
  cfg.n_target = parse_rank_target(f.n_target_str);
  cfg.beta = f.beta;
  cfg.lambda = f.lambda;
  cfg.epsilon = f.epsilon;
  cfg.max_iters = f.max_iters;
  cfg.seed = f.seed;
  return cfg;
}

void record_solver_config(ManifestBuilder& mb, const tubal::SolverConfig& cfg,
                          double beta_default, std::optional<double> lambda,
                          bool with_lambda) {
  mb.config("n_target", rank_target_str(cfg.n_target));
  mb.config("beta", cfg.beta.value_or(beta_default));
  if (with_lambda && lambda) mb.config("lambda", *lambda);
  mb.config("epsilon", cfg.epsilon);
  mb.config("max_iters", cfg.max_iters);
  mb.m.seed = cfg.seed;
}

int run_complete(const std::string& input, const std::string& mask_path,
                 const SolverFlags& flags, const std::string& output,
                 const std::string& truth_path, const std::string& report,
                 ManifestBuilder& mb) {
  const tubal::Tensor3 o = load_any(input);
  const tubal::Mask mask = tubal::io::tensor_to_mask(load_any(mask_path));
  mb.m.inputs = {input, mask_path};
  const tubal::SolverConfig cfg = to_config(flags);
  record_solver_config(mb, cfg, tubal::kDefaultBetaTc, std::nullopt, false);

  const tubal::RecoveryResult res = tubal::complete(o, mask, cfg);

  if (!output.empty()) {
    tubal::io::save_tensor(res.x, output);
    mb.m.outputs.push_back(output);
  }
  nlohmann::ordered_json rep;
  if (!truth_path.empty()) {
    const tubal::Tensor3 truth = load_any(truth_path);
    mb.m.inputs.push_back(truth_path);
    rep = report_json(tubal::compute_metrics(res.x, truth), res.iterations,
                      res.converged);
  } else {
    rep["iterations"] = res.iterations;
    rep["converged"] = res.converged;
  }
  if (!report.empty()) {
    write_text(report, rep.dump(2) + "\n");
    mb.m.outputs.push_back(report);
  }
  std::cout << rep.dump() << "\n";
  mb.finish();
  return res.converged ? kExitOk : kExitNotConverged;
}

int run_rpca(const std::string& input, const SolverFlags& flags,
             const std::string& output_l, const std::string& output_e,
             const std::string& truth_path, const std::string& report,
             ManifestBuilder& mb) {
  const tubal::Tensor3 o = load_any(input);
  mb.m.inputs = {input};
  const tubal::SolverConfig cfg = to_config(flags);
  record_solver_config(
      mb, cfg, tubal::kDefaultBetaRpca,
      cfg.lambda.value_or(tubal::default_lambda(o.n1(), o.n2(), o.n3())),
      true);

  const tubal::RecoveryResult res = tubal::rpca(o, cfg);

  if (!output_l.empty()) {
    tubal::io::save_tensor(res.x, output_l);
    mb.m.outputs.push_back(output_l);
  }
  if (!output_e.empty()) {
    tubal::io::save_tensor(*res.e, output_e);
    mb.m.outputs.push_back(output_e);
  }
  nlohmann::ordered_json rep;
  if (!truth_path.empty()) {
    const tubal::Tensor3 truth = load_any(truth_path);
    mb.m.inputs.push_back(truth_path);
    rep = report_json(tubal::compute_metrics(res.x, truth), res.iterations,
                      res.converged);
  } else {
    rep["iterations"] = res.iterations;
    rep["converged"] = res.converged;
  }
  if (!report.empty()) {
    write_text(report, rep.dump(2) + "\n");
    mb.m.outputs.push_back(report);
  }
  std::cout << rep.dump() << "\n";
  mb.finish();
  return res.converged ? kExitOk : kExitNotConverged;
}

int run_bench(const std::string& task, const std::string& grid_str,
              Index trials, std::uint64_t seed, int jobs, double threshold,
              const SolverFlags& flags, const std::string& out,
              ManifestBuilder& mb) {
  const tubal::synth::GridSpec grid = parse_grid_spec(grid_str);
  tubal::synth::PhaseParams params;
  params.trials = trials;
  params.seed = seed;
  params.jobs = jobs;
  params.success_threshold = threshold;
  params.solver.beta = flags.beta;
  params.solver.lambda = flags.lambda;
  params.solver.epsilon = flags.epsilon;
  params.solver.max_iters = flags.max_iters;

  mb.config("task", task);
  mb.config("grid", grid_str);
  mb.config("trials", trials);
  mb.config("jobs", std::to_string(jobs));
  mb.config("threshold", threshold);
  if (flags.beta) mb.config("beta", *flags.beta);
  if (flags.lambda) mb.config("lambda", *flags.lambda);
  mb.config("epsilon", flags.epsilon);
  mb.config("max_iters", flags.max_iters);
  mb.m.seed = seed;

  const bool tc = task == "tc";
  params.method = tubal::synth::Method::kPstnn;
  const tubal::synth::SuccessGrid pstnn =
      tc ? phase_diagram_tc(grid, params) : phase_diagram_rpca(grid, params);
  params.method = tubal::synth::Method::kTnn;
  const tubal::synth::SuccessGrid tnn =
      tc ? phase_diagram_tc(grid, params) : phase_diagram_rpca(grid, params);

  tubal::synth::SuccessGrid delta = pstnn;
  for (std::size_t i = 0; i < delta.cells.size(); ++i)
    delta.cells[i] -= tnn.cells[i];

  const std::filesystem::path base(out);
  const std::string stem = (base.parent_path() / base.stem()).string();
  const std::string p_pstnn = stem + "_pstnn.csv";
  const std::string p_tnn = stem + "_tnn.csv";
  const std::string p_delta = stem + "_delta.csv";
  tubal::io::write_grid_csv(pstnn, p_pstnn);
  tubal::io::write_grid_csv(tnn, p_tnn);
  tubal::io::write_grid_csv(delta, p_delta);
  mb.m.outputs = {p_pstnn, p_tnn, p_delta};

  std::cout << "pstnn_total=" << tubal::io::format_double(pstnn.total())
            << " tnn_total=" << tubal::io::format_double(tnn.total()) << "\n";
  mb.finish();
  return kExitOk;
}

int run_info(const std::string& input, const std::string& n_target_str,
             std::optional<double> tol) {
  const tubal::Tensor3 a = load_any(input);
  const tubal::MultiRank mr = tubal::multi_rank(a, tol);
  const tubal::RankTarget target = n_target_str.empty()
                                       ? tubal::RankTarget{Index{0}}
                                       : parse_rank_target(n_target_str);
  std::cout << "dims: " << a.n1() << "x" << a.n2() << "x" << a.n3() << "\n";
  std::cout << "tubal_rank: " << mr.tubal() << "\n";
  std::cout << "multi_rank: ";
  for (std::size_t k = 0; k < mr.ranks.size(); ++k)
    std::cout << (k ? "," : "") << mr.ranks[k];
  std::cout << "\n";
  std::cout << "tnn: " << tubal::io::format_double(tubal::tnn(a)) << "\n";
  std::cout << "pstnn[N=" << rank_target_str(target)
            << "]: " << tubal::io::format_double(tubal::pstnn(a, target))
            << "\n";
  std::cout << "fro_norm: " << tubal::io::format_double(tubal::fro_norm(a))
            << "\n";
  std::cout << "inf_norm: " << tubal::io::format_double(tubal::inf_norm(a))
            << "\n";
  return kExitOk;
}

int run_metrics(const std::string& a_path, const std::string& b_path) {
  const tubal::Tensor3 a = load_any(a_path);
  const tubal::Tensor3 b = load_any(b_path);
  const tubal::MetricReport m = tubal::compute_metrics(a, b);
  nlohmann::ordered_json j;
  j["psnr"] = json_metric(m.psnr);
  j["ssim"] = json_metric(m.ssim);
  j["rse"] = json_metric(m.rse);
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-SVD tensor toolbox: completion, robust PCA, benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tubal::kVersion));

  // ---- complete
  auto* c_complete =
      app.add_subcommand("complete", "low-rank tensor completion");
  std::string c_input, c_mask, c_output, c_truth, c_report;
  SolverFlags c_flags;
  c_complete->add_option("--input", c_input, ".t3b file or PGM directory")
      ->required();
  c_complete->add_option("--mask", c_mask, "observation mask (nonzero = seen)")
      ->required();
  add_solver_flags(c_complete, &c_flags, false);
  c_complete->add_option("--output", c_output, "recovered tensor (.t3b)");
  c_complete->add_option("--truth", c_truth, "ground truth for metrics");
  c_complete->add_option("--report", c_report, "metric report (JSON)");

  // ---- rpca
  auto* c_rpca = app.add_subcommand("rpca", "tensor robust PCA");
  std::string r_input, r_out_l, r_out_e, r_truth, r_report;
  SolverFlags r_flags;
  c_rpca->add_option("--input", r_input, ".t3b file or PGM directory")
      ->required();
  add_solver_flags(c_rpca, &r_flags, true);
  c_rpca->add_option("--output-l", r_out_l, "low-rank component (.t3b)");
  c_rpca->add_option("--output-e", r_out_e, "sparse component (.t3b)");
  c_rpca->add_option("--truth", r_truth, "ground truth for metrics");
  c_rpca->add_option("--report", r_report, "metric report (JSON)");

  // ---- bench
  auto* c_bench =
      app.add_subcommand("bench", "phase-transition success grids");
  std::string b_task, b_grid, b_out;
  Index b_trials = 10;
  std::uint64_t b_seed = 0;
  int b_jobs = 1;
  double b_threshold = 1e-3;
  SolverFlags b_flags;
  c_bench->add_option("task", b_task, "tc or rpca")
      ->required()
      ->check(CLI::IsMember({"tc", "rpca"}));
  c_bench
      ->add_option("--grid", b_grid,
                   "dims=30x30x20;ranks=1,2;rates=0.5,0.9")
      ->required();
  c_bench->add_option("--trials", b_trials, "trials per cell");
  c_bench->add_option("--seed", b_seed, "base seed");
  c_bench->add_option("--jobs", b_jobs, "parallel trial workers")
      ->envname("TUBAL_JOBS")
      ->check(CLI::Range(1, 1024));
  c_bench->add_option("--threshold", b_threshold, "success RSE threshold");
  c_bench->add_option("--beta", b_flags.beta, "ADMM penalty override");
  c_bench->add_option("--lambda", b_flags.lambda,
                      "sparsity weight override (rpca)");
  c_bench->add_option("--eps", b_flags.epsilon, "convergence tolerance");
  c_bench->add_option("--max-iters", b_flags.max_iters, "iteration cap");
  c_bench->add_option("--out", b_out, "CSV basename (three files written)")
      ->required();

  // ---- gen
  auto* c_gen = app.add_subcommand("gen", "write seeded synthetic fixtures");
  std::string g_kind, g_dims_str, g_input, g_out, g_support;
  Index g_rank = 1;
  double g_rate = 0.5, g_rho = 0.1, g_lo = tubal::synth::kNoiseLo,
         g_hi = tubal::synth::kNoiseHi;
  std::uint64_t g_seed = 0;
  c_gen->add_option("kind", g_kind, "lowrank, mask, or corrupt")
      ->required()
      ->check(CLI::IsMember({"lowrank", "mask", "corrupt"}));
  c_gen->add_option("--dims", g_dims_str, "n1xn2xn3 (lowrank, mask)");
  c_gen->add_option("--rank", g_rank, "tubal-rank (lowrank)");
  c_gen->add_option("--rate", g_rate, "observation rate (mask)");
  c_gen->add_option("--input", g_input, "tensor to corrupt (corrupt)");
  c_gen->add_option("--rho", g_rho, "corruption sparsity (corrupt)");
  c_gen->add_option("--lo", g_lo, "noise lower bound (corrupt)");
  c_gen->add_option("--hi", g_hi, "noise upper bound (corrupt)");
  c_gen->add_option("--seed", g_seed, "RNG seed");
  c_gen->add_option("--out", g_out, "output .t3b")->required();
  c_gen->add_option("--support", g_support,
                    "corrupted-entry mask output (corrupt)");

  // ---- info
  auto* c_info = app.add_subcommand("info", "inspect a tensor file");
  std::string i_input, i_n_target;
  std::optional<double> i_tol;
  c_info->add_option("file", i_input, ".t3b file or PGM directory")
      ->required();
  c_info->add_option("--n-target", i_n_target, "N for the partial sum");
  c_info->add_option("--tol", i_tol, "singular-value rank tolerance");

  // ---- metrics
  auto* c_metrics =
      app.add_subcommand("metrics", "psnr/ssim/rse between two tensors");
  std::string m_a, m_b;
  c_metrics->add_option("--a", m_a, "estimate")->required();
  c_metrics->add_option("--b", m_b, "reference")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    ManifestBuilder mb(argc, argv);
    if (c_complete->parsed())
      return run_complete(c_input, c_mask, c_flags, c_output, c_truth,
                          c_report, mb);
    if (c_rpca->parsed())
      return run_rpca(r_input, r_flags, r_out_l, r_out_e, r_truth, r_report,
                      mb);
    if (c_bench->parsed())
      return run_bench(b_task, b_grid, b_trials, b_seed, b_jobs, b_threshold,
                       b_flags, b_out, mb);
    if (c_gen->parsed()) {
      if (g_kind == "lowrank") {
        const Dims d = parse_dims(g_dims_str);
        mb.config("dims", g_dims_str);
        mb.config("rank", g_rank);
        mb.m.seed = g_seed;
        tubal::io::save_tensor(
            tubal::synth::gen_low_tubal_rank(d.n1, d.n2, d.n3, g_rank, g_seed),
            g_out);
        mb.m.outputs.push_back(g_out);
      } else if (g_kind == "mask") {
        const Dims d = parse_dims(g_dims_str);
        mb.config("dims", g_dims_str);
        mb.config("rate", g_rate);
        mb.m.seed = g_seed;
        tubal::io::save_tensor(
            tubal::io::mask_to_tensor(
                tubal::synth::sample_mask(d.n1, d.n2, d.n3, g_rate, g_seed)),
            g_out);
        mb.m.outputs.push_back(g_out);
      } else {  // corrupt
        if (g_input.empty())
          throw tubal::InvalidConfig("gen corrupt needs --input");
        const tubal::Tensor3 a = load_any(g_input);
        mb.m.inputs = {g_input};
        mb.config("rho", g_rho);
        mb.config("lo", g_lo);
        mb.config("hi", g_hi);
        mb.m.seed = g_seed;
        auto [o, support] =
            tubal::synth::corrupt_sparse(a, g_rho, g_lo, g_hi, g_seed);
        tubal::io::save_tensor(o, g_out);
        mb.m.outputs.push_back(g_out);
        if (!g_support.empty()) {
          tubal::io::save_tensor(tubal::io::mask_to_tensor(support),
                                 g_support);
          mb.m.outputs.push_back(g_support);
        }
      }
      mb.finish();
      return kExitOk;
    }
    if (c_info->parsed()) return run_info(i_input, i_n_target, i_tol);
    if (c_metrics->parsed()) return run_metrics(m_a, m_b);
    std::cerr << "no subcommand\n";
    return kExitError;
  } catch (const tubal::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
