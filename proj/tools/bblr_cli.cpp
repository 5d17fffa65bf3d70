#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bblr/cv.hpp"
#include "bblr/dataset.hpp"
#include "bblr/losses.hpp"
#include "bblr/serialize.hpp"
#include "bblr/tables.hpp"

namespace {

using namespace bblr;

std::string default_data_dir() {
  if (const char* env = std::getenv("BBLR_DATA_DIR")) return env;
  return "datasets";
}

std::string infer_format(const std::string& path, const std::string& flag) {
  if (!flag.empty()) return flag;
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return "csv";
  if (ext == "libsvm" || ext == "svm" || ext == "txt") return "libsvm";
  throw CLI::ValidationError("--format",
                             "cannot infer the format of '" + path +
                                 "'; pass --format csv|libsvm");
}

// Shared flags for anything that trains. Config precedence is
// flags > --config file > built-in defaults.
struct RunArgs {
  std::string dataset;
  std::string format;
  std::string method = "bblr2";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string config_path;
  std::string out;
  SlaConfig cfg;
};

void add_common(CLI::App* cmd, RunArgs& a, bool needs_dataset) {
  auto* ds = cmd->add_option("--dataset", a.dataset, "input file");
  if (needs_dataset) ds->required();
  cmd->add_option("--format", a.format, "csv or libsvm (default: by extension)");
  cmd->add_option("--seed", a.seed, "master seed")->capture_default_str();
  cmd->add_option("--jobs", a.jobs, "worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--config", a.config_path, "annealing config JSON");
  cmd->add_option("--out", a.out, "output JSON path");
}

void add_schedule_overrides(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--gamma-min", a.cfg.gamma_min, "first annealing stage");
  cmd->add_option("--gamma-max", a.cfg.gamma_max, "last annealing stage");
  cmd->add_option("--r-gamma", a.cfg.r_gamma, "stage multiplier");
  cmd->add_option("--r0", a.cfg.r0, "initial probe range");
  cmd->add_option("--eps-s0", a.cfg.eps_s0, "initial probe resolution");
}

SlaConfig resolve_config(const CLI::App* cmd, const RunArgs& a) {
  SlaConfig cfg;
  if (!a.config_path.empty())
    cfg = sla_config_from_json(load_json(a.config_path));
  // A flag the user typed beats the file.
  if (cmd->count("--gamma-min") > 0) cfg.gamma_min = a.cfg.gamma_min;
  if (cmd->count("--gamma-max") > 0) cfg.gamma_max = a.cfg.gamma_max;
  if (cmd->count("--r-gamma") > 0) cfg.r_gamma = a.cfg.r_gamma;
  if (cmd->count("--r0") > 0) cfg.r0 = a.cfg.r0;
  if (cmd->count("--eps-s0") > 0) cfg.eps_s0 = a.cfg.eps_s0;
  cfg.validate();
  return cfg;
}

Json run_manifest(const std::string& command, const RunArgs& a,
                  double wall_ms) {
  return Json{{"command", command},
              {"dataset", a.dataset},
              {"method", a.method},
              {"seed", a.seed},
              {"jobs", a.jobs},
              {"config", a.config_path.empty() ? Json(nullptr)
                                               : Json(a.config_path)},
              {"wall_ms", wall_ms}};
}

void emit(const Json& result, const std::string& command, const RunArgs& a,
          double wall_ms) {
  if (a.out.empty()) {
    std::cout << result.dump(2) << "\n";
    return;
  }
  save_json(result, a.out);
  save_json(run_manifest(command, a, wall_ms), a.out + ".run.json");
  std::cout << "wrote " << a.out << "\n";
}

int cmd_train(RunArgs& a, const CLI::App* cmd) {
  const auto t0 = std::chrono::steady_clock::now();
  Dataset ds = load_dataset(a.dataset, infer_format(a.dataset, a.format));
  const Scaler scaler = standardize(ds);

  CvOptions opt;
  opt.cfg = resolve_config(cmd, a);
  const Method method = parse_method(a.method);
  const MethodFit fit = fit_method(ds, method, opt, a.seed);
  const int train01 = zero_one_total(method_predict(fit, ds), ds.y);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

  Json out{{"method", a.method},
           {"rows", ds.rows()},
           {"train01", train01},
           {"scaler",
            Json{{"mean", to_json(scaler.mean)}, {"std", to_json(scaler.std)}}}};
  if (fit.is_kernel) {
    KernelFitRef ref;
    ref.alphas = fit.kernel.alphas;
    ref.spec = fit.kernel.spec;
    ref.inputs = {a.dataset, infer_format(a.dataset, a.format), {}};
    ref.has_scaler = true;
    ref.scaler = scaler;
    out["kernel_fit"] = to_json(ref);
    out["support"] = method_support(fit);
  } else {
    out["linear_fit"] = to_json(LinearFit{{fit.coefficients}, fit.hyper});
  }
  emit(out, "train", a, ms);
  return 0;
}

int cmd_cv(RunArgs& a, const CLI::App* cmd, int folds, int reps,
           Scalar noise) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset raw =
      load_dataset(a.dataset, infer_format(a.dataset, a.format));
  CvOptions opt;
  opt.cfg = resolve_config(cmd, a);
  opt.jobs = a.jobs;
  opt.noise_rate = noise;
  const SplitPlan plan{a.seed, folds, reps, true};
  const CvResult res = cross_validate(raw, plan, parse_method(a.method), opt);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

  Json out{{"method", a.method},
           {"folds", folds},
           {"repetitions", reps},
           {"noise_rate", noise},
           {"mean_error_percent", res.mean_error_percent()},
           {"total_errors", res.total_errors()},
           {"sum_per_rep_mean01", res.sum_per_rep_mean01()}};
  if (res.mean_support() >= 0) out["mean_support"] = res.mean_support();
  emit(out, "cv", a, ms);
  return 0;
}

int cmd_tables(RunArgs& a, const std::string& table, const std::string& dir,
               bool full) {
  TableOptions opt;
  opt.seed = a.seed;
  opt.jobs = a.jobs;
  opt.full = full;

  std::vector<std::string> ids;
  if (table == "all")
    ids = table_ids();
  else
    ids.push_back(table);

  bool ok = true;
  Json all = Json::array();
  for (const auto& id : ids) {
    const TableReport rep = reproduce_table(id, dir, opt);
    std::cout << format_table(rep);
    ok = ok && rep.all_pass();
    Json rows = Json::array();
    for (const auto& r : rep.rows)
      rows.push_back(Json{{"dataset", r.dataset},
                          {"metric", r.metric},
                          {"ours", r.ours},
                          {"reference", r.reference},
                          {"pass", r.pass}});
    all.push_back(Json{{"table", id}, {"rows", std::move(rows)}});
  }
  if (!a.out.empty()) {
    save_json(all, a.out);
    save_json(run_manifest("reproduce-table", a, 0), a.out + ".run.json");
  }
  return ok ? 0 : 1;
}

int cmd_plot_loss(const std::string& out, Scalar alpha, Scalar beta, Scalar n,
                  const std::vector<Scalar>& gammas) {
  const BBHyper base = BBHyper::from_counts(alpha, beta, n);
  std::ostringstream os;
  os << "z";
  for (const Scalar g : gammas) os << "\tpos_g" << g << "\tneg_g" << g;
  os << "\n";
  for (int i = -300; i <= 300; ++i) {
    const Scalar z = i / 100.0;
    os << z;
    for (const Scalar g : gammas) {
      LossSpec pos{LossKind::BetaBernoulli, g, base.plateau(), 1};
      LossSpec neg{LossKind::BetaBernoulli, g, base.plateau(), -1};
      os << "\t" << eval_loss(pos, z) << "\t" << eval_loss(neg, z);
    }
    os << "\n";
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << os.str();
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_sparsity(RunArgs& a, const std::vector<Index>& sizes) {
  const Dataset raw =
      load_dataset(a.dataset, infer_format(a.dataset, a.format));
  CvOptions opt;
  const auto points = sparsity_sweep(raw, sizes, opt, a.seed);
  Json arr = Json::array();
  std::cout << "rows\tsupport\tsupport_frac\n";
  for (const auto& p : points) {
    const Scalar frac = static_cast<Scalar>(p.support) / p.rows;
    std::cout << p.rows << "\t" << p.support << "\t" << frac << "\n";
    arr.push_back(Json{{"rows", p.rows}, {"support", p.support}});
  }
  if (!a.out.empty()) {
    save_json(arr, a.out);
    save_json(run_manifest("sparsity-sweep", a, 0), a.out + ".run.json");
  }
  return 0;
}

int cmd_noise_sweep(RunArgs& a, const CLI::App* cmd,
                    const std::vector<Scalar>& rates, int folds, int reps) {
  const Dataset raw =
      load_dataset(a.dataset, infer_format(a.dataset, a.format));
  CvOptions opt;
  opt.cfg = resolve_config(cmd, a);
  opt.jobs = a.jobs;
  const Method method = parse_method(a.method);
  const SplitPlan plan{a.seed, folds, reps, true};

  Json arr = Json::array();
  std::cout << "noise_rate\tmean_error_percent\n";
  for (const Scalar rate : rates) {
    opt.noise_rate = rate;
    const CvResult res = cross_validate(raw, plan, method, opt);
    std::cout << rate << "\t" << res.mean_error_percent() << "\n";
    arr.push_back(Json{{"noise_rate", rate},
                       {"mean_error_percent", res.mean_error_percent()}});
  }
  if (!a.out.empty()) {
    save_json(arr, a.out);
    save_json(run_manifest("noise-sweep", a, 0), a.out + ".run.json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plateau-likelihood classifiers: train, evaluate, reproduce"};
  app.require_subcommand(1);

  RunArgs a;

  auto* train = app.add_subcommand("train", "fit one model on a whole file");
  add_common(train, a, true);
  train->add_option("--method", a.method,
                    "lr|sla|bblr1|bblr2|bblr3|bblr4|kbblr|sparse-kbblr")->capture_default_str();
  add_schedule_overrides(train, a);

  auto* cv = app.add_subcommand("cv", "repeated stratified k-fold evaluation");
  int folds = 5, reps = 10;
  Scalar noise = 0.0;
  add_common(cv, a, true);
  cv->add_option("--method", a.method, "method name")->capture_default_str();
  cv->add_option("--folds", folds, "folds per repetition")->capture_default_str();
  cv->add_option("--reps", reps, "repetitions")->capture_default_str();
  cv->add_option("--noise", noise, "training label flip rate")->capture_default_str();
  add_schedule_overrides(cv, a);

  auto* tab = app.add_subcommand("reproduce-table",
                                 "rerun a benchmark table and compare");
  std::string table = "all";
  std::string data_dir = default_data_dir();
  bool full = false;
  add_common(tab, a, false);
  tab->add_option("--table", table, "table id or 'all'")->capture_default_str();
  tab->add_option("--data-dir", data_dir, "benchmark CSV directory")->capture_default_str();
  tab->add_flag("--full", full, "also run the slow informational rows");

  auto* plot = app.add_subcommand("plot-loss", "tabulate the loss curves");
  std::string plot_out;
  Scalar pl_alpha = 1, pl_beta = 1, pl_n = 100;
  std::vector<Scalar> gammas = {2, 20, 200};
  plot->add_option("--alpha", pl_alpha, "pseudo-count of positives")->capture_default_str();
  plot->add_option("--beta", pl_beta, "pseudo-count of negatives")->capture_default_str();
  plot->add_option("--n", pl_n, "reference sample size")->capture_default_str();
  plot->add_option("--gamma", gammas, "steepness values");
  plot->add_option("--out", plot_out, "TSV path (default: stdout)");

  auto* sw = app.add_subcommand("sparsity-sweep",
                                "support size as training rows grow");
  std::vector<Index> sizes = {100, 200, 400, 800};
  add_common(sw, a, true);
  sw->add_option("--sizes", sizes, "subsample sizes");

  auto* ns = app.add_subcommand("noise-sweep",
                                "cv error as label noise grows");
  std::vector<Scalar> rates = {0.0, 0.1, 0.2};
  add_common(ns, a, true);
  ns->add_option("--method", a.method, "method name")->capture_default_str();
  ns->add_option("--rates", rates, "label flip rates");
  ns->add_option("--folds", folds, "folds per repetition")->capture_default_str();
  ns->add_option("--reps", reps, "repetitions")->capture_default_str();
  add_schedule_overrides(ns, a);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(a, train);
    if (cv->parsed()) return cmd_cv(a, cv, folds, reps, noise);
    if (tab->parsed()) return cmd_tables(a, table, data_dir, full);
    if (plot->parsed()) return cmd_plot_loss(plot_out, pl_alpha, pl_beta, pl_n, gammas);
    if (sw->parsed()) return cmd_sparsity(a, sizes);
    if (ns->parsed()) return cmd_noise_sweep(a, ns, rates, folds, reps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
