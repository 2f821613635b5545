#include "qrd/serialize.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace qrd {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON input");
  return j;
}

json matrix_to_obj(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_obj(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw ParseError("matrix JSON requires rows, cols and entries");
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (rows < 0 || cols < 0 || !entries.is_array() ||
      static_cast<Eigen::Index>(entries.size()) != rows * cols)
    throw ParseError("matrix JSON entry count does not match rows*cols");
  Matrix m(rows, cols);
  Eigen::Index i = 0;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2) throw ParseError("matrix entries must be [re, im] pairs");
    m(i / cols, i % cols) = Complex(e[0].get<double>(), e[1].get<double>());
    ++i;
  }
  return m;
}

json density_to_obj(const DensityMatrix& rho) {
  json j = matrix_to_obj(rho.matrix());
  j["dims"] = rho.dims().factors();
  return j;
}

DensityMatrix density_from_obj(const json& j) {
  Matrix m = matrix_from_obj(j);
  if (j.contains("dims")) {
    auto dims = j.at("dims").get<std::vector<int>>();
    return DensityMatrix(std::move(m), DimensionSpec(std::move(dims)));
  }
  return DensityMatrix(std::move(m));
}

json channel_to_obj(const KrausChannel& ch) {
  json kraus = json::array();
  for (const auto& a : ch.kraus()) kraus.push_back(matrix_to_obj(a));
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(kraus)}};
}

KrausChannel channel_from_obj(const json& j) {
  if (!j.is_object() || !j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kraus"))
    throw ParseError("channel JSON requires dim_in, dim_out and kraus");
  std::vector<Matrix> ops;
  for (const auto& k : j.at("kraus")) ops.push_back(matrix_from_obj(k));
  return KrausChannel(j.at("dim_in").get<int>(), j.at("dim_out").get<int>(), std::move(ops));
}

Vector state_vector_from_obj(const json& j) {
  if (!j.is_array()) throw ParseError("state vectors must be arrays of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ParseError("state entries must be [re, im] pairs");
    v(i++) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

json state_vector_to_obj(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json config_to_obj(const OptimizerConfig& cfg) {
  return {{"restarts", cfg.restarts},
          {"max_iterations", cfg.max_iterations},
          {"step_size", cfg.step_size},
          {"penalty_weight", cfg.penalty_weight},
          {"gradient_tolerance", cfg.gradient_tolerance},
          {"env_dim", cfg.env_dim},
          {"seed", cfg.seed}};
}

OptimizerConfig config_from_obj(const json& j) {
  OptimizerConfig cfg;
  cfg.restarts = j.at("restarts").get<int>();
  cfg.max_iterations = j.at("max_iterations").get<int>();
  cfg.step_size = j.at("step_size").get<double>();
  cfg.penalty_weight = j.at("penalty_weight").get<double>();
  cfg.gradient_tolerance = j.at("gradient_tolerance").get<double>();
  cfg.env_dim = j.at("env_dim").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

json code_to_obj(const RDCode& code) {
  return {{"n", code.n()},
          {"K", code.channel_dim()},
          {"encoder", channel_to_obj(code.encoder())},
          {"decoder", channel_to_obj(code.decoder())}};
}

RDCode code_from_obj(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("K") || !j.contains("encoder") ||
      !j.contains("decoder"))
    throw ParseError("code JSON requires n, K, encoder and decoder");
  return RDCode(j.at("n").get<int>(), j.at("K").get<int>(), channel_from_obj(j.at("encoder")),
                channel_from_obj(j.at("decoder")));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const Matrix& m) { return dump(matrix_to_obj(m)); }

Matrix matrix_from_json(const std::string& text) { return matrix_from_obj(parse(text)); }

std::string to_json(const DensityMatrix& rho) { return dump(density_to_obj(rho)); }

DensityMatrix density_from_json(const std::string& text) { return density_from_obj(parse(text)); }

std::string to_json(const KrausChannel& ch) { return dump(channel_to_obj(ch)); }

KrausChannel channel_from_json(const std::string& text) { return channel_from_obj(parse(text)); }

std::string to_json(const Ensemble& ens) {
  json items = json::array();
  for (const auto& [p, state] : ens.items())
    items.push_back({{"p", p}, {"state", state_vector_to_obj(state.amplitudes())}});
  return dump(json{{"items", std::move(items)}});
}

Ensemble ensemble_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("items")) throw ParseError("ensemble JSON requires items");
  std::vector<std::pair<double, PureState>> items;
  for (const auto& item : j.at("items")) {
    if (!item.contains("p") || !item.contains("state"))
      throw ParseError("ensemble items require p and state");
    items.emplace_back(item.at("p").get<double>(),
                       PureState(state_vector_from_obj(item.at("state"))));
  }
  return Ensemble(std::move(items));
}

std::string to_json(const RDCode& code) { return dump(code_to_obj(code)); }

RDCode code_from_json(const std::string& text) { return code_from_obj(parse(text)); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string curve_to_csv(const RDCurve& curve) {
  std::string out = "D_target,R_estimate_raw,R_estimate_envelope,witness_distortion,restarts,iterations\n";
  for (size_t i = 0; i < curve.points.size(); ++i) {
    const RDPoint& p = curve.points[i];
    out += format_double(p.distortion_target);
    out += ',';
    out += format_double(p.rate_estimate);
    out += ',';
    out += format_double(curve.envelope[i]);
    out += ',';
    out += format_double(p.witness_distortion);
    out += ',';
    out += std::to_string(p.restarts_used);
    out += ',';
    out += std::to_string(p.iterations);
    out += '\n';
  }
  return out;
}

std::string curve_to_json(const RDCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"distortion_target", p.distortion_target},
                      {"rate_estimate", p.rate_estimate},
                      {"witness_distortion", p.witness_distortion},
                      {"restarts", p.restarts_used},
                      {"iterations", p.iterations},
                      {"penalty_residual", p.penalty_residual},
                      {"witness_channel", channel_to_obj(p.witness_channel)}});
  }
  json j{{"source", density_to_obj(curve.source)},
         {"grid", curve.grid},
         {"envelope", curve.envelope},
         {"seed", curve.seed},
         {"config", config_to_obj(curve.config)},
         {"points", std::move(points)}};
  return dump(j);
}

RDCurve curve_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("source") || !j.contains("grid") || !j.contains("points"))
    throw ParseError("curve JSON requires source, grid and points");
  std::vector<RDPoint> points;
  for (const auto& p : j.at("points")) {
    points.push_back(RDPoint{p.at("distortion_target").get<double>(),
                             p.at("rate_estimate").get<double>(),
                             channel_from_obj(p.at("witness_channel")),
                             p.at("witness_distortion").get<double>(),
                             p.at("restarts").get<int>(),
                             p.at("iterations").get<long>(),
                             p.at("penalty_residual").get<double>()});
  }
  RDCurve curve{density_from_obj(j.at("source")),
                j.at("grid").get<std::vector<double>>(),
                std::move(points),
                j.at("envelope").get<std::vector<double>>(),
                j.at("seed").get<std::uint64_t>(),
                j.contains("config") ? config_from_obj(j.at("config")) : OptimizerConfig{}};
  if (curve.grid.size() != curve.points.size() || curve.grid.size() != curve.envelope.size())
    throw ParseError("curve JSON: grid, points and envelope lengths differ");
  return curve;
}

std::string reports_to_json(const std::vector<SlackReport>& reports, const FuzzConfig& cfg) {
  json out = json::array();
  for (const auto& r : reports) {
    out.push_back({{"inequality", r.inequality_name},
                   {"trials", r.trials},
                   {"min_slack", r.min_slack},
                   {"mean_slack", r.mean_slack},
                   {"worst_instance_seed", r.worst_instance_seed},
                   {"slack_floor", r.slack_floor_applied},
                   {"violations", r.violations}});
  }
  json j{{"reports", std::move(out)},
         {"config",
          {{"ssa_trials", cfg.ssa_trials},
           {"four_party_trials", cfg.four_party_trials},
           {"marginal_trials", cfg.marginal_trials},
           {"data_processing_trials", cfg.data_processing_trials},
           {"entropy_exchange_trials", cfg.entropy_exchange_trials},
           {"dims", cfg.dims},
           {"seed", cfg.seed},
           {"slack_floor", cfg.slack_floor}}}};
  return dump(j);
}

std::string to_string(ChainStatus status) {
  switch (status) {
    case ChainStatus::holds: return "holds";
    case ChainStatus::consistent: return "consistent";
    case ChainStatus::gap_limited: return "gap-limited";
    case ChainStatus::violated: return "violated";
  }
  return "unknown";
}

std::string chain_report_to_json(const ChainReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"name", s.name},
                     {"lhs", s.lhs},
                     {"rhs", s.rhs},
                     {"slack", s.slack},
                     {"exact", s.exact},
                     {"status", to_string(s.status)}});
  }
  json j{{"steps", std::move(steps)},
         {"exact_steps_hold", report.exact_steps_hold},
         {"marginal_distortions", report.marginal_distortions},
         {"block_distortion", report.block_distortion}};
  return dump(j);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + tmp.string());
    out << content;
    out.close();
    if (!out) throw Error("write failed: " + tmp.string());
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

namespace {

json bundle_for(const SlackReport& report, const FuzzConfig& cfg) {
  json j{{"inequality", report.inequality_name},
         {"trial_seed", report.worst_instance_seed},
         {"dims", cfg.dims},
         {"slack", report.min_slack}};
  const std::string& name = report.inequality_name;
  if (name == "strong_subadditivity") {
    j["state"] = density_to_obj(make_fuzz_state(report.worst_instance_seed, cfg.dims, 3));
  } else if (name == "four_party_form") {
    j["state"] = density_to_obj(make_fuzz_state(report.worst_instance_seed, cfg.dims, 4));
  } else if (name == "marginal_superadditivity") {
    MarginalInstance inst = make_marginal_instance(report.worst_instance_seed, cfg.dims);
    j["rho1"] = density_to_obj(inst.rho1);
    j["rho2"] = density_to_obj(inst.rho2);
    j["joint"] = channel_to_obj(inst.joint);
  } else if (name == "data_processing") {
    DataProcessingInstance inst = make_data_processing_instance(report.worst_instance_seed, cfg.dims);
    j["rho"] = density_to_obj(inst.rho);
    j["e"] = channel_to_obj(inst.e);
    j["d"] = channel_to_obj(inst.d);
  } else if (name == "entropy_exchange_positivity") {
    StateChannelInstance inst = make_entropy_exchange_instance(report.worst_instance_seed, cfg.dims);
    j["rho"] = density_to_obj(inst.rho);
    j["channel"] = channel_to_obj(inst.ch);
  } else {
    throw ValidationError("unknown inequality name: " + name);
  }
  return j;
}

}  // namespace

void write_fuzz_regression_bundles(const std::vector<SlackReport>& reports, const FuzzConfig& cfg,
                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& report : reports)
    atomic_write_file(dir / (report.inequality_name + "_worst.json"),
                      dump(bundle_for(report, cfg)));
}

double reevaluate_bundle(const std::string& bundle_json) {
  json j = parse(bundle_json);
  const std::string name = j.at("inequality").get<std::string>();
  if (name == "strong_subadditivity") return check_ssa_instance(density_from_obj(j.at("state")));
  if (name == "four_party_form") return check_entanglement_form(density_from_obj(j.at("state")));
  if (name == "marginal_superadditivity")
    return check_marginal_superadditivity(density_from_obj(j.at("rho1")),
                                          density_from_obj(j.at("rho2")),
                                          channel_from_obj(j.at("joint")));
  if (name == "data_processing")
    return check_data_processing(density_from_obj(j.at("rho")), channel_from_obj(j.at("e")),
                                 channel_from_obj(j.at("d")));
  if (name == "entropy_exchange_positivity")
    return entropy_exchange(density_from_obj(j.at("rho")), channel_from_obj(j.at("channel")),
                            Eval::fast);
  throw ValidationError("unknown inequality name: " + name);
}

double bundle_recorded_slack(const std::string& bundle_json) {
  return parse(bundle_json).at("slack").get<double>();
}

}  // namespace qrd
