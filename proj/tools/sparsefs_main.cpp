#include "sparsefs/awspca_psd.hpp"
#include "sparsefs/core_linalg.hpp"
#include "sparsefs/cspca_psd.hpp"
#include "sparsefs/dataset_io.hpp"
#include "sparsefs/eval_clustering.hpp"
#include "sparsefs/feature_scoring.hpp"
#include "sparsefs/solver_common.hpp"
#include "sparsefs/spca_psd.hpp"
#include "sparsefs/synth_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sparsefs;

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) {
    throw error("cannot open '" + path.string() + "' for writing");
  }
  file << text;
  if (!file) {
    throw error("write to '" + path.string() + "' failed");
  }
}

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

int worker_count(std::size_t cells) {
  long cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPARSEFS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (env[0] == '\0' || *end != '\0' || v < 1) {
      throw config_error("SPARSEFS_THREADS must be a positive integer, got '" +
                         std::string(env) + "'");
    }
    cap = v;
  }
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(cap), cells));
}

struct RunOutput {
  SolverRun run;
  std::optional<Vector> v;
};

RunOutput run_solver(const std::string& solver, const DataMatrix& X,
                     const SolverConfig& config) {
  if (solver == "spca_psd") return {solve_spca_psd(X, config), std::nullopt};
  if (solver == "cspca_psd") return {solve_cspca_psd(X, config), std::nullopt};
  if (solver == "awspca_psd") {
    AwRun aw = solve_awspca_psd(X, config);
    return {std::move(aw.run), std::move(aw.v)};
  }
  throw config_error("unknown solver '" + solver + "'");
}

// eta = 5% of tr(X X^T) and lambda = 5% of eta unless given explicitly; the
// mean-adaptive solver carries no trace term, so eta stays 0 and lambda
// defaults straight to 0.25% of the trace.
struct ParamChoice {
  double lambda = 0.0;
  double eta = 0.0;
  bool lambda_from_strategy = false;
  bool eta_from_strategy = false;
};

ParamChoice choose_params(const std::string& solver, double trace,
                          std::optional<double> lambda,
                          std::optional<double> eta) {
  ParamChoice p;
  if (solver == "awspca_psd") {
    p.eta = eta.value_or(0.0);
    p.eta_from_strategy = !eta.has_value();
    p.lambda = lambda.value_or(0.0025 * trace);
  } else {
    p.eta = eta.value_or(0.05 * trace);
    p.eta_from_strategy = !eta.has_value();
    p.lambda = lambda.value_or(0.05 * p.eta);
  }
  p.lambda_from_strategy = !lambda.has_value();
  return p;
}

std::string trace_to_csv(const std::vector<double>& trace) {
  std::string csv = "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    csv += std::to_string(i + 1) + ',' + fmt(trace[i]) + '\n';
  }
  return csv;
}

std::string sanitize(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return text;
}

// Ranking CSV reader for the eval subcommand: feature ids are taken from the
// first column, in file order; a non-numeric first row is a header.
std::vector<int> read_feature_list(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw error("cannot open features file '" + path + "'");
  }
  std::vector<int> features;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string cell = line.substr(0, line.find(','));
    int value = 0;
    const auto [p, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || p != cell.data() + cell.size()) {
      if (line_no == 1) continue;  // header row
      throw parse_error("feature id '" + cell + "' is not an integer", line_no,
                        1);
    }
    features.push_back(value);
  }
  if (features.empty()) {
    throw parse_error("no feature ids in '" + path + "'", 1, 1);
  }
  return features;
}

struct CommonOpts {
  std::string dataset;
  bool normalize = false;
  bool no_labels = false;
  std::string out_dir = ".";
};

Dataset load_prepared(const CommonOpts& opts, bool need_labels) {
  Dataset dataset = load_csv(opts.dataset, !opts.no_labels, SampleLayout::rows);
  if (need_labels && !dataset.labels) {
    throw config_error(
        "this command needs ground-truth labels in the last CSV column");
  }
  if (opts.normalize) {
    dataset.X = normalize_unit_range(dataset.X);
  }
  dataset.X = center_columns(dataset.X);
  return dataset;
}

struct SelectOpts {
  CommonOpts common;
  std::string solver;
  std::optional<double> lambda;
  std::optional<double> eta;
  int h = 2;
  SolverConfig config;
  bool no_psd_projection = false;
};

int cmd_select(const SelectOpts& opts) {
  Dataset dataset = load_prepared(opts.common, false);
  const double trace = trace_gram(dataset.X);
  const ParamChoice params =
      choose_params(opts.solver, trace, opts.lambda, opts.eta);

  SolverConfig config = opts.config;
  config.lambda = params.lambda;
  config.eta = params.eta;
  config.psd_projection = !opts.no_psd_projection;

  const RunOutput out = run_solver(opts.solver, dataset.X, config);
  const int h = std::min<int>(opts.h, static_cast<int>(dataset.X.d()));
  const FeatureRanking ranking =
      rank_and_select(score_features(out.run.omega), h);

  const fs::path dir(opts.common.out_dir);
  fs::create_directories(dir);
  write_text(dir / "ranking.csv", ranking_to_csv(ranking));
  write_text(dir / "trace.csv", trace_to_csv(out.run.objective_trace));

  json summary;
  summary["dataset"] = opts.common.dataset;
  summary["solver"] = opts.solver;
  summary["config"] = json::parse(config_to_json(config));
  summary["params_source"]["lambda"] =
      params.lambda_from_strategy ? "strategy" : "explicit";
  summary["params_source"]["eta"] =
      params.eta_from_strategy ? "strategy" : "explicit";
  summary["trace_gram"] = trace;
  summary["normalize"] = opts.common.normalize;
  summary["ablation"] = opts.no_psd_projection;
  summary["h"] = h;
  summary["iterations"] = out.run.iterations;
  summary["converged"] = out.run.converged;
  summary["objective_final"] = out.run.objective_trace.back();
  summary["wall_time_seconds"] = out.run.wall_time_seconds;
  summary["selected"] = ranking.selected;
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "selected:";
  for (int f : ranking.selected) std::cout << ' ' << f;
  std::cout << " (iterations " << out.run.iterations << ", converged "
            << (out.run.converged ? "yes" : "no") << ")\n";
  return 0;
}

struct GridOpts {
  CommonOpts common;
  std::string solver;
  std::vector<double> lambda_set;
  std::vector<double> eta_set;
  std::vector<int> h_set;
  int repeats = 30;
  SolverConfig config;
  bool no_psd_projection = false;
};

struct GridCellResult {
  bool ok = false;
  std::string message;
  EvalResult eval;
  int iterations = 0;
  bool converged = false;
};

int cmd_paramgrid(const GridOpts& opts) {
  Dataset dataset = load_prepared(opts.common, true);

  std::vector<double> lambda_set = opts.lambda_set;
  std::vector<double> eta_set = opts.eta_set;
  std::vector<int> h_set = opts.h_set;
  if (lambda_set.empty()) {
    for (int e = -4; e <= 4; ++e) lambda_set.push_back(std::pow(10.0, e));
  }
  if (eta_set.empty()) {
    if (opts.solver == "awspca_psd") {
      eta_set.push_back(0.0);
    } else {
      for (int e = -4; e <= 4; ++e) eta_set.push_back(std::pow(10.0, e));
    }
  }
  if (h_set.empty()) {
    h_set.push_back(std::min<int>(2, static_cast<int>(dataset.X.d())));
  }

  struct Cell {
    double lambda;
    double eta;
    int h;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double lambda : lambda_set) {
    for (double eta : eta_set) {
      for (int h : h_set) {
        cells.push_back(
            {lambda, eta, h, mix_seed(opts.config.seed, cells.size())});
      }
    }
  }

  std::vector<GridCellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      GridCellResult& r = results[i];
      try {
        SolverConfig config = opts.config;
        config.lambda = cells[i].lambda;
        config.eta = cells[i].eta;
        config.seed = cells[i].seed;
        config.psd_projection = !opts.no_psd_projection;
        const RunOutput out = run_solver(opts.solver, dataset.X, config);
        const FeatureRanking ranking =
            rank_and_select(score_features(out.run.omega), cells[i].h);
        r.eval = evaluate_selection(dataset.X, ranking.selected,
                                    *dataset.labels, opts.repeats);
        r.iterations = out.run.iterations;
        r.converged = out.run.converged;
        r.ok = true;
      } catch (const std::exception& e) {
        r.message = e.what();
      }
    }
  };
  const int workers = worker_count(cells.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::string csv =
      "index,lambda,eta,h,seed,status,acc_mean,acc_std,nmi_mean,nmi_std,"
      "repeats,iterations,converged,message\n";
  long best = -1;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const GridCellResult& r = results[i];
    csv += std::to_string(i) + ',' + fmt(c.lambda) + ',' + fmt(c.eta) + ',' +
           std::to_string(c.h) + ',' + std::to_string(c.seed) + ',';
    if (r.ok) {
      csv += "ok," + fmt(r.eval.acc_mean) + ',' + fmt(r.eval.acc_std) + ',' +
             fmt(r.eval.nmi_mean) + ',' + fmt(r.eval.nmi_std) + ',' +
             std::to_string(r.eval.repeats) + ',' +
             std::to_string(r.iterations) + ',' +
             (r.converged ? "true" : "false") + ",\n";
      if (best < 0 || r.eval.acc_mean > results[best].eval.acc_mean) {
        best = static_cast<long>(i);
      }
    } else {
      ++failed;
      csv += "error,,,,,,,," + sanitize(r.message) + '\n';
    }
  }

  const fs::path dir(opts.common.out_dir);
  fs::create_directories(dir);
  write_text(dir / "grid.csv", csv);

  json summary;
  summary["solver"] = opts.solver;
  summary["cells"] = cells.size();
  summary["failed"] = failed;
  summary["repeats"] = opts.repeats;
  summary["lambda_set"] = lambda_set;
  summary["eta_set"] = eta_set;
  summary["h_set"] = h_set;
  summary["best_index"] = best;
  if (best >= 0) {
    const Cell& c = cells[best];
    const GridCellResult& r = results[best];
    summary["best"] = {{"lambda", c.lambda},
                       {"eta", c.eta},
                       {"h", c.h},
                       {"seed", c.seed},
                       {"acc_mean", r.eval.acc_mean},
                       {"acc_std", r.eval.acc_std},
                       {"nmi_mean", r.eval.nmi_mean},
                       {"nmi_std", r.eval.nmi_std},
                       {"iterations", r.iterations},
                       {"converged", r.converged}};
  } else {
    summary["best"] = nullptr;
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "grid: " << cells.size() << " cells, " << failed
            << " failed, best index " << best;
  if (best >= 0) {
    std::cout << " (lambda " << cells[best].lambda << ", eta "
              << cells[best].eta << ", acc "
              << results[best].eval.acc_mean << ")";
  }
  std::cout << "\n";
  return 0;
}

int cmd_suggest_params(const CommonOpts& opts) {
  Dataset dataset = load_prepared(opts, false);
  const double trace = trace_gram(dataset.X);
  json out;
  out["trace_gram"] = trace;
  out["eta_range"] = {0.01 * trace, 0.10 * trace};
  out["eta"] = 0.05 * trace;
  out["lambda_cap"] = 0.10 * (0.10 * trace);
  out["lambda"] = 0.05 * (0.05 * trace);
  out["degenerate"] = trace == 0.0;
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SynthOpts {
  SyntheticSpec spec;
  std::string shape = "two_moon";
  std::string out_dir = ".";
  std::string out;
};

int cmd_synth(const SynthOpts& opts) {
  SyntheticSpec spec = opts.spec;
  spec.shape = synth_shape_from_string(opts.shape);
  const SynthResult result = generate(spec);
  fs::path out(opts.out);
  if (opts.out.empty()) {
    fs::create_directories(opts.out_dir);
    out = fs::path(opts.out_dir) / (opts.shape + ".csv");
  } else if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  write_dataset_csv(out.string(), result.X, result.labels);
  std::cout << "wrote " << out.string() << " (d " << result.X.d() << ", n "
            << result.X.n() << ", classes " << result.labels.c << ")\n";
  return 0;
}

struct EvalOpts {
  CommonOpts common;
  std::string features;
  std::optional<int> h;
  int repeats = 30;
};

int cmd_eval(const EvalOpts& opts) {
  Dataset dataset = load_prepared(opts.common, true);
  std::vector<int> selected = read_feature_list(opts.features);
  if (opts.h) {
    if (*opts.h < 1 || *opts.h > static_cast<int>(selected.size())) {
      throw config_error("--h must be in 1.." +
                         std::to_string(selected.size()) + ", got " +
                         std::to_string(*opts.h));
    }
    selected.resize(*opts.h);
  }
  const EvalResult result =
      evaluate_selection(dataset.X, selected, *dataset.labels, opts.repeats);

  const fs::path dir(opts.common.out_dir);
  fs::create_directories(dir);
  write_text(dir / "eval.csv", eval_to_csv(result));
  write_text(dir / "eval.json", eval_to_json(result) + "\n");
  std::cout << eval_to_json(result) << "\n";
  return 0;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool with_no_labels = true) {
  sub->add_option("dataset", opts.dataset, "Dataset CSV, one sample per line")
      ->required();
  sub->set_help_flag("--help", "Print help");
  sub->add_flag("--normalize", opts.normalize,
                "Rescale each feature to [0, 1] before centering");
  if (with_no_labels) {
    sub->add_flag("--no-labels", opts.no_labels,
                  "Treat the last CSV column as a feature, not labels");
  }
  sub->add_option("--out-dir", opts.out_dir, "Output directory")
      ->capture_default_str();
}

void add_config(CLI::App* sub, SolverConfig& config, bool& no_psd_projection,
                std::string& woodbury) {
  sub->add_option("--stop-tol", config.stop_tol,
                  "Objective-difference stopping threshold")
      ->capture_default_str();
  sub->add_option("--max-iter", config.max_iter, "Iteration cap")
      ->capture_default_str();
  sub->add_flag("--no-psd-projection", no_psd_projection,
                "Ablation: skip the PSD cone projection");
  sub->add_option("--woodbury", woodbury,
                  "Inverse branch: auto, direct or woodbury")
      ->check(CLI::IsMember({"auto", "direct", "woodbury"}))
      ->capture_default_str();
  sub->add_option("--seed", config.seed, "Solver RNG seed")
      ->capture_default_str();
}

WoodburyMode parse_woodbury_flag(const std::string& flag) {
  if (flag == "auto") return WoodburyMode::automatic;
  if (flag == "direct") return WoodburyMode::force_direct;
  return WoodburyMode::force_woodbury;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sparse-PCA feature selection: PSD-constrained solvers, grid search "
      "and clustering evaluation"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print help");

  SelectOpts select;
  double select_lambda = 0.0, select_eta = 0.0;
  std::string select_woodbury = "auto";
  CLI::App* sub_select = app.add_subcommand(
      "select", "Run a solver and rank features");
  add_common(sub_select, select.common);
  sub_select
      ->add_option("--solver", select.solver,
                   "spca_psd, cspca_psd or awspca_psd")
      ->required()
      ->check(CLI::IsMember({"spca_psd", "cspca_psd", "awspca_psd"}));
  CLI::Option* select_lambda_opt = sub_select->add_option(
      "--lambda", select_lambda, "Sparsity weight (default: 5% of eta)");
  CLI::Option* select_eta_opt = sub_select->add_option(
      "--eta", select_eta, "Trace weight (default: 5% of tr(X X^T))");
  sub_select->add_option("--h", select.h, "Number of features to keep")
      ->capture_default_str();
  add_config(sub_select, select.config, select.no_psd_projection,
             select_woodbury);

  GridOpts grid;
  std::string grid_woodbury = "auto";
  CLI::App* sub_grid = app.add_subcommand(
      "paramgrid", "Cross-product (lambda, eta, h) search with evaluation");
  add_common(sub_grid, grid.common);
  sub_grid
      ->add_option("--solver", grid.solver,
                   "spca_psd, cspca_psd or awspca_psd")
      ->required()
      ->check(CLI::IsMember({"spca_psd", "cspca_psd", "awspca_psd"}));
  sub_grid
      ->add_option("--lambda-set", grid.lambda_set,
                   "Comma-separated lambda values (default 10^-4..10^4)")
      ->delimiter(',');
  sub_grid
      ->add_option("--eta-set", grid.eta_set,
                   "Comma-separated eta values (default 10^-4..10^4; {0} for "
                   "awspca_psd)")
      ->delimiter(',');
  sub_grid->add_option("--h-set", grid.h_set, "h values (default {2})")
      ->delimiter(',');
  sub_grid->add_option("--repeats", grid.repeats, "K-means repeats per cell")
      ->capture_default_str();
  add_config(sub_grid, grid.config, grid.no_psd_projection, grid_woodbury);

  CommonOpts suggest;
  CLI::App* sub_suggest = app.add_subcommand(
      "suggest-params", "Print the trace-based parameter strategy");
  add_common(sub_suggest, suggest);

  SynthOpts synth;
  CLI::App* sub_synth =
      app.add_subcommand("synth", "Generate a synthetic dataset CSV");
  sub_synth->set_help_flag("--help", "Print help");
  sub_synth->add_option("--shape", synth.shape,
                        "two_moon, three_ring or three_curve")
      ->check(CLI::IsMember({"two_moon", "three_ring", "three_curve"}))
      ->capture_default_str();
  sub_synth->add_option("--n-per-class", synth.spec.n_per_class,
                        "Samples per class (0 = shape default)");
  sub_synth->add_option("--noise-dims", synth.spec.noise_dims,
                        "Number of Gaussian noise features")
      ->capture_default_str();
  sub_synth
      ->add_option("--noise-scales", synth.spec.noise_scales,
                   "Comma-separated noise standard deviations (default 0.05 "
                   "ladder)")
      ->delimiter(',');
  sub_synth->add_option("--jitter", synth.spec.structure_jitter,
                        "Jitter on the structured features")
      ->capture_default_str();
  sub_synth->add_option("--seed", synth.spec.seed, "Generator seed")
      ->capture_default_str();
  sub_synth->add_option("--out-dir", synth.out_dir, "Output directory")
      ->capture_default_str();
  sub_synth->add_option("--out", synth.out,
                        "Output file (default <out-dir>/<shape>.csv)");

  EvalOpts eval;
  int eval_h = 0;
  CLI::App* sub_eval = app.add_subcommand(
      "eval", "K-means + Kuhn-Munkres ACC/NMI on selected features");
  add_common(sub_eval, eval.common, false);
  sub_eval
      ->add_option("--features", eval.features,
                   "Ranking CSV (feature ids in the first column)")
      ->required();
  CLI::Option* eval_h_opt =
      sub_eval->add_option("--h", eval_h, "Keep only the first h features");
  sub_eval->add_option("--repeats", eval.repeats, "K-means repeats")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sub_select)) {
      if (select_lambda_opt->count() > 0) select.lambda = select_lambda;
      if (select_eta_opt->count() > 0) select.eta = select_eta;
      select.config.woodbury = parse_woodbury_flag(select_woodbury);
      return cmd_select(select);
    }
    if (app.got_subcommand(sub_grid)) {
      grid.config.woodbury = parse_woodbury_flag(grid_woodbury);
      return cmd_paramgrid(grid);
    }
    if (app.got_subcommand(sub_suggest)) {
      return cmd_suggest_params(suggest);
    }
    if (app.got_subcommand(sub_synth)) {
      return cmd_synth(synth);
    }
    if (app.got_subcommand(sub_eval)) {
      if (eval_h_opt->count() > 0) eval.h = eval_h;
      return cmd_eval(eval);
    }
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
