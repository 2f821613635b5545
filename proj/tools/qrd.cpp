// Command-line surface for the quantum rate-distortion laboratory.
//
// Exit codes: 0 success, 1 inequality violation found, 2 parse failure,
// 3 dimension mismatch, 4 internal numeric failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrd/rdopt.hpp"
#include "qrd/serialize.hpp"
#include "qrd/verify.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_grid(const std::string& spec) {
  double start = 0.0, end = 0.0;
  int count = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &start, &end, &count) != 3)
    throw qrd::ParseError("grid spec must be start:end:count");
  if (count < 1) throw qrd::ParseError("grid count must be >= 1");
  if (count == 1) return {start};
  if (end <= start) throw qrd::ParseError("grid end must exceed start");
  std::vector<double> grid(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    grid[static_cast<size_t>(i)] = start + (end - start) * i / (count - 1);
  return grid;
}

qrd::DensityMatrix load_state(const std::string& path) {
  return qrd::density_from_json(qrd::read_file(path));
}

struct Options {
  std::string state_path;
  std::string channel_path;
  std::string code_path;
  std::string curve_path;
  std::string out_path;
  std::string json_out_path;
  std::string regression_dir;
  std::string grid_spec = "0:0.75:9";
  std::uint64_t seed = 0;
  double tol = 5e-3;
  int restarts = 0;     // 0 = config default
  int max_iters = 0;    // 0 = config default
  int n = 1;
  int channel_dim = 1;
  int trials = 0;       // 0 = per-inequality defaults
  std::vector<int> dims = {2};
  double slack_floor = -1e-8;
};

qrd::OptimizerConfig make_config(const Options& opt, int dim) {
  qrd::OptimizerConfig cfg = qrd::OptimizerConfig::defaults_for(dim);
  cfg.seed = opt.seed;
  if (opt.restarts > 0) cfg.restarts = opt.restarts;
  if (opt.max_iters > 0) cfg.max_iterations = opt.max_iters;
  return cfg;
}

int run_entropy(const Options& opt) {
  qrd::DensityMatrix rho = load_state(opt.state_path);
  double s = qrd::von_neumann_entropy(rho);
  std::cout << qrd::format_double(s) << "\n";
  if (!opt.out_path.empty())
    qrd::atomic_write_file(opt.out_path, qrd::format_double(s) + "\n");
  return 0;
}

int run_channel_info(const Options& opt) {
  qrd::DensityMatrix rho = load_state(opt.state_path);
  qrd::KrausChannel ch = qrd::channel_from_json(qrd::read_file(opt.channel_path));
  json j{{"F_e", qrd::entanglement_fidelity(rho, ch)},
         {"S_e", qrd::entropy_exchange(rho, ch)},
         {"I_c", qrd::coherent_information(rho, ch)},
         {"d", qrd::entanglement_distortion(rho, ch)}};
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!opt.out_path.empty()) qrd::atomic_write_file(opt.out_path, text);
  return 0;
}

int run_rd_curve(const Options& opt) {
  qrd::DensityMatrix rho = load_state(opt.state_path);
  qrd::OptimizerConfig cfg = make_config(opt, rho.dim());
  qrd::RDCurve curve = qrd::rd_curve(rho, parse_grid(opt.grid_spec), cfg);

  std::vector<double> raw;
  for (const auto& p : curve.points) raw.push_back(p.rate_estimate);
  qrd::MonotoneConvexReport envelope_report = qrd::check_monotone_convex(curve, opt.tol);
  qrd::MonotoneConvexReport raw_report =
      qrd::check_monotone_convex_values(curve.grid, raw, opt.tol);

  std::cout << "envelope: max monotonicity violation " << envelope_report.max_monotonicity_violation
            << ", max convexity violation " << envelope_report.max_convexity_violation << " -> "
            << (envelope_report.pass ? "pass" : "fail") << " at tol " << envelope_report.tol << "\n";
  std::cout << "raw:      max monotonicity violation " << raw_report.max_monotonicity_violation
            << ", max convexity violation " << raw_report.max_convexity_violation << " -> "
            << (raw_report.pass ? "pass" : "fail") << " at tol " << raw_report.tol << "\n";
  for (size_t i = 0; i < curve.points.size(); ++i)
    std::cout << "D=" << curve.grid[i] << "  R_raw=" << curve.points[i].rate_estimate
              << "  R_envelope=" << curve.envelope[i] << "\n";

  if (!opt.out_path.empty()) qrd::atomic_write_file(opt.out_path, qrd::curve_to_csv(curve));
  if (!opt.json_out_path.empty())
    qrd::atomic_write_file(opt.json_out_path, qrd::curve_to_json(curve));
  return 0;
}

int run_code_eval(const Options& opt) {
  qrd::DensityMatrix rho = load_state(opt.state_path);
  qrd::RDCode code = qrd::code_from_json(qrd::read_file(opt.code_path));
  qrd::CodeEvaluation eval = qrd::evaluate_code(code, rho);
  json j{{"rate", eval.rate}, {"D_e", eval.distortion_e}, {"per_slot", eval.per_slot}};
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!opt.out_path.empty()) qrd::atomic_write_file(opt.out_path, text);
  return 0;
}

int run_code_search(const Options& opt) {
  qrd::DensityMatrix rho = load_state(opt.state_path);
  qrd::OptimizerConfig cfg = make_config(opt, rho.dim());
  qrd::RDCode code = qrd::search_codes(rho, opt.n, opt.channel_dim, cfg);
  qrd::CodeEvaluation eval = qrd::evaluate_code(code, rho);
  json j{{"rate", eval.rate}, {"D_e", eval.distortion_e}, {"per_slot", eval.per_slot}};
  std::cout << j.dump(2) << "\n";
  if (!opt.out_path.empty()) qrd::atomic_write_file(opt.out_path, qrd::to_json(code));
  return 0;
}

int run_fuzz(const Options& opt) {
  qrd::FuzzConfig cfg;
  if (opt.trials > 0) cfg = qrd::FuzzConfig::uniform(opt.trials);
  cfg.dims = opt.dims;
  cfg.seed = opt.seed;
  cfg.slack_floor = opt.slack_floor;
  std::vector<qrd::SlackReport> reports = qrd::fuzz(cfg);
  int violations = 0;
  for (const auto& r : reports) {
    violations += r.violations;
    std::cout << r.inequality_name << ": trials " << r.trials << ", min slack " << r.min_slack
              << ", violations " << r.violations << "\n";
  }
  if (!opt.out_path.empty())
    qrd::atomic_write_file(opt.out_path, qrd::reports_to_json(reports, cfg));
  if (!opt.regression_dir.empty())
    qrd::write_fuzz_regression_bundles(reports, cfg, opt.regression_dir);
  return violations > 0 ? 1 : 0;
}

int run_chain_verify(const Options& opt) {
  qrd::DensityMatrix rho = load_state(opt.state_path);
  qrd::RDCode code = qrd::code_from_json(qrd::read_file(opt.code_path));
  qrd::RDCurve curve = qrd::curve_from_json(qrd::read_file(opt.curve_path));
  qrd::ChainReport report = qrd::verify_theorem_chain(code, rho, curve);
  for (const auto& s : report.steps)
    std::cout << s.name << ": lhs " << s.lhs << ", rhs " << s.rhs << ", slack " << s.slack
              << " -> " << qrd::to_string(s.status) << "\n";
  if (!opt.out_path.empty())
    qrd::atomic_write_file(opt.out_path, qrd::chain_report_to_json(report));
  return report.exact_steps_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrd: quantum rate-distortion laboratory"};
  app.require_subcommand(1);
  Options opt;

  auto* entropy = app.add_subcommand("entropy", "Von Neumann entropy of a state in bits");
  entropy->add_option("--state", opt.state_path, "state JSON file")->required();
  entropy->add_option("--out", opt.out_path, "output path");

  auto* info = app.add_subcommand("channel-info", "Entropic functionals of a (state, channel) pair");
  info->add_option("--state", opt.state_path, "state JSON file")->required();
  info->add_option("--channel", opt.channel_path, "channel JSON file")->required();
  info->add_option("--out", opt.out_path, "output path");

  auto* curve = app.add_subcommand("rd-curve", "Estimate the rate-distortion curve on a grid");
  curve->add_option("--state", opt.state_path, "state JSON file")->required();
  curve->add_option("--grid", opt.grid_spec, "distortion grid start:end:count");
  curve->add_option("--seed", opt.seed, "master seed");
  curve->add_option("--tol", opt.tol, "reporting tolerance for the shape checks");
  curve->add_option("--restarts", opt.restarts, "optimizer restarts per grid point");
  curve->add_option("--max-iters", opt.max_iters, "max descent iterations per restart");
  curve->add_option("--out", opt.out_path, "CSV output path");
  curve->add_option("--json-out", opt.json_out_path, "JSON output path with witness channels");

  auto* code_eval = app.add_subcommand("code-eval", "Evaluate a rate-distortion code");
  code_eval->add_option("--code", opt.code_path, "code JSON file")->required();
  code_eval->add_option("--state", opt.state_path, "state JSON file")->required();
  code_eval->add_option("--out", opt.out_path, "output path");

  auto* search = app.add_subcommand("code-search", "Search for a low-distortion code");
  search->add_option("--state", opt.state_path, "state JSON file")->required();
  search->add_option("--n", opt.n, "block length")->required();
  search->add_option("--k", opt.channel_dim, "channel space dimension")->required();
  search->add_option("--seed", opt.seed, "master seed");
  search->add_option("--restarts", opt.restarts, "optimizer restarts");
  search->add_option("--max-iters", opt.max_iters, "max descent iterations per restart");
  search->add_option("--out", opt.out_path, "code JSON output path");

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Randomized verification of the proof inequalities");
  fuzz_cmd->add_option("--trials", opt.trials, "uniform trial count per inequality");
  fuzz_cmd->add_option("--dims", opt.dims, "subsystem dimensions to sample");
  fuzz_cmd->add_option("--seed", opt.seed, "master seed");
  fuzz_cmd->add_option("--slack-floor", opt.slack_floor, "violation floor for pure-entropy checks");
  fuzz_cmd->add_option("--out", opt.out_path, "report JSON output path");
  fuzz_cmd->add_option("--regression-dir", opt.regression_dir, "directory for worst-instance bundles");

  auto* chain = app.add_subcommand("chain-verify", "Check the rate-bound inequality chain for a code");
  chain->add_option("--code", opt.code_path, "code JSON file")->required();
  chain->add_option("--state", opt.state_path, "state JSON file")->required();
  chain->add_option("--curve", opt.curve_path, "curve JSON file (oracle)")->required();
  chain->add_option("--out", opt.out_path, "report JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(entropy)) return run_entropy(opt);
    if (app.got_subcommand(info)) return run_channel_info(opt);
    if (app.got_subcommand(curve)) return run_rd_curve(opt);
    if (app.got_subcommand(code_eval)) return run_code_eval(opt);
    if (app.got_subcommand(search)) return run_code_search(opt);
    if (app.got_subcommand(fuzz_cmd)) return run_fuzz(opt);
    if (app.got_subcommand(chain)) return run_chain_verify(opt);
  } catch (const qrd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qrd::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qrd::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
