#include "qrd/rdopt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "qrd/random.hpp"
#include "qrd/verify.hpp"

namespace qrd {

namespace {

constexpr double kExactStepFloor = -1e-7;   // slack floor for the exact chain steps
constexpr double kFeasibilitySlack = 1e-6;  // witness_distortion <= target + this
constexpr double kTrackSlack = 9e-7;        // tracking margin inside the reported slack
constexpr double kFdStep = 1e-5;            // central-difference step
constexpr double kArmijo = 1e-4;
constexpr double kOracleNoiseFloor = 5e-3;  // optimizer noise assumed in oracle values

int checked_int_power(int base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > (1 << 30)) throw DimensionError("block dimension overflow");
  }
  return static_cast<int>(v);
}

int integer_nth_root(int value, int n) {
  int guess = std::max(1, static_cast<int>(std::llround(std::pow(value, 1.0 / n))));
  for (int c = std::max(1, guess - 1); c <= guess + 1; ++c)
    if (checked_int_power(c, n) == value) return c;
  throw DimensionError("code dimensions are not an integer power of the source dimension");
}

Matrix polar_retract(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Kraus slices of an isometry without channel-validation overhead.
std::vector<Matrix> kraus_from_isometry(const Matrix& v, int dim_out, int dim_env) {
  const int dim_in = static_cast<int>(v.cols());
  std::vector<Matrix> ops(static_cast<size_t>(dim_env));
  for (int k = 0; k < dim_env; ++k) {
    Matrix a(dim_out, dim_in);
    for (int r = 0; r < dim_out; ++r)
      for (int c = 0; c < dim_in; ++c)
        a(r, c) = v(static_cast<Eigen::Index>(r) * dim_env + k, c);
    ops[static_cast<size_t>(k)] = std::move(a);
  }
  return ops;
}

double distortion_fast(const Matrix& rho, const std::vector<Matrix>& ops) {
  double fe = 0.0;
  for (const auto& a : ops) fe += std::norm((rho * a).trace());
  return 1.0 - fe;
}

double coherent_info_fast(const Matrix& rho, const std::vector<Matrix>& ops, int dim_out) {
  Matrix out = Matrix::Zero(dim_out, dim_out);
  for (const auto& a : ops) out += a * rho * a.adjoint();
  const int m = static_cast<int>(ops.size());
  Matrix w(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      w(k, l) = (ops[static_cast<size_t>(k)] * rho * ops[static_cast<size_t>(l)].adjoint()).trace();
  return detail::entropy_psd_bits(out) - detail::entropy_psd_bits(w);
}

// ---------------------------------------------------------------------------
// Retracted finite-difference descent over one or more isometries.

using ObjectiveFn = std::function<double(const std::vector<Matrix>&)>;

struct DescentOutcome {
  std::vector<Matrix> point;
  double value = 0.0;
  long iterations = 0;
};

DescentOutcome descend(std::vector<Matrix> start, const ObjectiveFn& objective,
                       const OptimizerConfig& cfg) {
  DescentOutcome out;
  out.point = std::move(start);
  out.value = objective(out.point);
  std::vector<Matrix> probe;
  std::vector<Matrix> grad(out.point.size());
  std::vector<Matrix> candidate;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    double gnorm2 = 0.0;
    for (size_t mi = 0; mi < out.point.size(); ++mi) {
      const Eigen::Index rows = out.point[mi].rows();
      const Eigen::Index cols = out.point[mi].cols();
      grad[mi] = Matrix::Zero(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
          double parts[2];
          for (int im = 0; im < 2; ++im) {
            const Complex delta = im ? Complex(0.0, kFdStep) : Complex(kFdStep, 0.0);
            probe = out.point;
            probe[mi](r, c) += delta;
            probe[mi] = polar_retract(probe[mi]);
            const double fp = objective(probe);
            probe = out.point;
            probe[mi](r, c) -= delta;
            probe[mi] = polar_retract(probe[mi]);
            const double fm = objective(probe);
            parts[im] = (fp - fm) / (2.0 * kFdStep);
          }
          grad[mi](r, c) = Complex(parts[0], parts[1]);
          gnorm2 += parts[0] * parts[0] + parts[1] * parts[1];
        }
      }
    }
    if (std::sqrt(gnorm2) < cfg.gradient_tolerance) break;

    double alpha = cfg.step_size;
    bool accepted = false;
    double candidate_value = 0.0;
    for (int halving = 0; halving < 40; ++halving) {
      candidate = out.point;
      for (size_t mi = 0; mi < candidate.size(); ++mi)
        candidate[mi] = polar_retract(out.point[mi] - alpha * grad[mi]);
      candidate_value = objective(candidate);
      if (candidate_value <= out.value - kArmijo * alpha * gnorm2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    out.point.swap(candidate);
    out.value = candidate_value;
    ++out.iterations;
  }
  return out;
}

void validate_optimizer_config(const OptimizerConfig& cfg, int dim) {
  if (cfg.restarts < 1 || cfg.max_iterations < 1)
    throw ValidationError("OptimizerConfig: counts must be >= 1");
  if (cfg.step_size <= 0.0 || cfg.penalty_weight <= 0.0 || cfg.gradient_tolerance <= 0.0)
    throw ValidationError("OptimizerConfig: step size, penalty weight and gradient tolerance must be positive");
  if (cfg.env_dim < 1 || cfg.env_dim > dim * dim)
    throw ValidationError("OptimizerConfig: env_dim must lie in [1, dim^2]");
}

// ---------------------------------------------------------------------------
// R^I(D) point estimation.

struct WitnessTracker {
  double target = 0.0;
  bool found = false;
  double ic = std::numeric_limits<double>::infinity();
  double dist = std::numeric_limits<double>::infinity();
  Matrix isometry;
  int restart = -1;
  int current_restart = 0;

  void consider(double ic_value, double dist_value, const Matrix& v) {
    if (dist_value > target + kTrackSlack) return;
    const bool better =
        ic_value < ic || (ic_value == ic && (dist_value < dist ||
                                             (dist_value == dist && current_restart < restart)));
    if (!found || better) {
      found = true;
      ic = ic_value;
      dist = dist_value;
      isometry = v;
      restart = current_restart;
    }
  }
};

Matrix identity_seed_isometry(int dim, int env) {
  return kraus_to_stinespring(KrausChannel::identity(dim), env).matrix();
}

Matrix depolarizing_seed_isometry(int dim, int env) {
  return kraus_to_stinespring(KrausChannel::fully_depolarizing(dim), env).matrix();
}

Matrix restart_isometry(int restart, int dim, int env, std::uint64_t master,
                        const Matrix* warm_start) {
  if (restart == 0) return identity_seed_isometry(dim, env);
  if (restart == 1 && env >= dim * dim) return depolarizing_seed_isometry(dim, env);
  if (restart == 2 && warm_start != nullptr) return *warm_start;
  Rng rng(derive_seed(master, static_cast<std::uint64_t>(restart)));
  return random_isometry_matrix(dim * env, dim, rng);
}

struct MinCiResult {
  RDPoint point;
  Matrix witness_isometry;
};

MinCiResult min_ci_impl(const DensityMatrix& rho, double target, const OptimizerConfig& cfg,
                        std::uint64_t master_seed, const Matrix* warm_start) {
  if (target < 0.0 || target > 1.0)
    throw ValidationError("min_coherent_info_at_D: distortion target must lie in [0, 1]");
  const int d = rho.dim();
  validate_optimizer_config(cfg, d);
  const int env = cfg.env_dim;
  const Matrix& rho_m = rho.matrix();

  WitnessTracker tracker;
  tracker.target = target;
  auto objective = [&](const std::vector<Matrix>& vs) {
    std::vector<Matrix> ops = kraus_from_isometry(vs[0], d, env);
    const double ic = coherent_info_fast(rho_m, ops, d);
    const double dist = distortion_fast(rho_m, ops);
    tracker.consider(ic, dist, vs[0]);
    const double excess = std::max(0.0, dist - target);
    return ic + cfg.penalty_weight * excess * excess;
  };

  long total_iterations = 0;
  for (int k = 0; k < cfg.restarts; ++k) {
    tracker.current_restart = k;
    DescentOutcome outcome =
        descend({restart_isometry(k, d, env, master_seed, warm_start)}, objective, cfg);
    total_iterations += outcome.iterations;
  }
  if (!tracker.found)
    throw NumericError(
        "min_coherent_info_at_D: no feasible channel found; the identity seed should always "
        "be feasible");

  KrausChannel witness =
      canonical_reduce(stinespring_to_kraus(StinespringIsometry(d, d, env, tracker.isometry)));
  const double ic = coherent_information(rho, witness);
  const double dist = entanglement_distortion(rho, witness);
  RDPoint point{target, ic,  witness, dist, cfg.restarts, total_iterations,
                std::max(0.0, dist - target)};
  return {std::move(point), tracker.isometry};
}

}  // namespace

OptimizerConfig OptimizerConfig::defaults_for(int dim) {
  OptimizerConfig cfg;
  cfg.env_dim = dim * dim;
  return cfg;
}

RDPoint min_coherent_info_at_D(const DensityMatrix& rho, double distortion_target,
                               const OptimizerConfig& cfg) {
  return min_ci_impl(rho, distortion_target, cfg, cfg.seed, nullptr).point;
}

RDCurve rd_curve(const DensityMatrix& rho, const std::vector<double>& grid,
                 const OptimizerConfig& cfg) {
  if (grid.empty()) throw ValidationError("rd_curve: grid must be nonempty");
  for (size_t j = 0; j < grid.size(); ++j) {
    if (grid[j] < 0.0 || grid[j] > 1.0)
      throw ValidationError("rd_curve: grid values must lie in [0, 1]");
    if (j > 0 && grid[j] <= grid[j - 1])
      throw ValidationError("rd_curve: grid must be strictly ascending");
  }
  RDCurve curve{rho, grid, {}, {}, cfg.seed, cfg};
  curve.points.reserve(grid.size());
  Matrix warm;
  for (size_t j = 0; j < grid.size(); ++j) {
    const Matrix* warm_ptr = j > 0 ? &warm : nullptr;
    MinCiResult result =
        min_ci_impl(rho, grid[j], cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(j)),
                    warm_ptr);
    warm = result.witness_isometry;
    curve.points.push_back(std::move(result.point));
  }
  std::vector<double> raw;
  raw.reserve(curve.points.size());
  for (const auto& p : curve.points) raw.push_back(p.rate_estimate);
  curve.envelope = lower_convex_envelope(grid, raw);
  return curve;
}

std::vector<double> lower_convex_envelope(const std::vector<double>& grid,
                                          const std::vector<double>& values) {
  if (grid.size() != values.size())
    throw DimensionError("lower_convex_envelope: grid and values must have equal length");
  const size_t m = grid.size();
  if (m == 0) return {};
  std::vector<double> env(values);
  if (m >= 3) {
    // Greatest convex minorant via the lower hull of (D_i, R_i).
    std::vector<size_t> hull;
    auto cross = [&](size_t o, size_t a, size_t b) {
      return (grid[a] - grid[o]) * (values[b] - values[o]) -
             (values[a] - values[o]) * (grid[b] - grid[o]);
    };
    for (size_t i = 0; i < m; ++i) {
      while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0)
        hull.pop_back();
      hull.push_back(i);
    }
    size_t seg = 0;
    for (size_t i = 0; i < m; ++i) {
      while (seg + 1 < hull.size() && grid[hull[seg + 1]] < grid[i]) ++seg;
      if (seg + 1 >= hull.size()) {
        env[i] = values[hull.back()];
        continue;
      }
      const size_t a = hull[seg], b = hull[seg + 1];
      const double t = (grid[i] - grid[a]) / (grid[b] - grid[a]);
      env[i] = (1.0 - t) * values[a] + t * values[b];
    }
  }
  // Running minimum keeps convexity and enforces the nonincreasing shape.
  for (size_t i = 1; i < m; ++i) env[i] = std::min(env[i], env[i - 1]);
  return env;
}

MonotoneConvexReport check_monotone_convex_values(const std::vector<double>& grid,
                                                  const std::vector<double>& values, double tol) {
  if (grid.size() != values.size())
    throw DimensionError("check_monotone_convex: grid and values must have equal length");
  if (grid.size() < 3)
    throw ValidationError("check_monotone_convex: at least 3 points required");
  double mono = 0.0;
  for (size_t i = 0; i + 1 < values.size(); ++i)
    mono = std::max(mono, values[i + 1] - values[i]);
  double convex = 0.0;
  for (size_t i = 0; i + 2 < values.size(); ++i) {
    const double t = (grid[i + 1] - grid[i]) / (grid[i + 2] - grid[i]);
    const double chord = (1.0 - t) * values[i] + t * values[i + 2];
    convex = std::max(convex, values[i + 1] - chord);
  }
  MonotoneConvexReport report{mono, convex, tol, mono <= tol && convex <= tol};
  return report;
}

MonotoneConvexReport check_monotone_convex(const RDCurve& curve, double tol) {
  return check_monotone_convex_values(curve.grid, curve.envelope, tol);
}

// ---------------------------------------------------------------------------
// Rate-distortion codes.

RDCode::RDCode(int n, int channel_dim, KrausChannel encoder, KrausChannel decoder)
    : n_(n),
      channel_dim_(channel_dim),
      source_dim_(0),
      encoder_(std::move(encoder)),
      decoder_(std::move(decoder)) {
  if (n_ < 1) throw DimensionError("RDCode: block length must be >= 1");
  if (channel_dim_ < 1) throw DimensionError("RDCode: channel dimension must be >= 1");
  if (encoder_.dim_out() != channel_dim_ || decoder_.dim_in() != channel_dim_)
    throw DimensionError("RDCode: encoder output and decoder input must equal the channel dimension");
  if (encoder_.dim_in() != decoder_.dim_out())
    throw DimensionError("RDCode: encoder input and decoder output must agree");
  source_dim_ = integer_nth_root(encoder_.dim_in(), n_);
}

RDCode RDCode::identity_code(int source_dim, int n) {
  const int dn = checked_int_power(source_dim, n);
  return RDCode(n, dn, KrausChannel::identity(dn), KrausChannel::identity(dn));
}

double RDCode::rate() const {
  return std::log2(static_cast<double>(channel_dim_)) / static_cast<double>(n_);
}

CodeEvaluation evaluate_code(const RDCode& code, const DensityMatrix& rho) {
  if (rho.dim() != code.source_dim())
    throw DimensionError("evaluate_code: source dimension does not match the code");
  CodeEvaluation eval;
  eval.rate = code.rate();
  eval.per_slot = per_slot_distortions(code.encoder(), code.decoder(), rho, code.n());
  double sum = 0.0;
  for (double d : eval.per_slot) sum += d;
  eval.distortion_e = sum / static_cast<double>(code.n());
  return eval;
}

// ---------------------------------------------------------------------------
// Theorem chain.

double curve_upper_bound(const RDCurve& curve, double distortion) {
  const auto& g = curve.grid;
  const auto& e = curve.envelope;
  if (g.empty() || e.size() != g.size())
    throw ValidationError("curve oracle: curve has no envelope");
  if (distortion < g.front() - 1e-12 || distortion > g.back() + 1e-12) {
    std::ostringstream os;
    os << "curve oracle: no coverage for distortion " << distortion << " (grid spans ["
       << g.front() << ", " << g.back() << "])";
    throw ValidationError(os.str());
  }
  const double x = std::clamp(distortion, g.front(), g.back());
  size_t hi = 1;
  while (hi + 1 < g.size() && g[hi] < x) ++hi;
  if (g.size() == 1) return e.front();
  const size_t lo = hi - 1;
  const double t = (x - g[lo]) / (g[hi] - g[lo]);
  return (1.0 - t) * e[lo] + t * e[hi];
}

double curve_looseness(const RDCurve& curve, double distortion) {
  const auto& g = curve.grid;
  const double x = std::clamp(distortion, g.front(), g.back());
  size_t hi = g.size() > 1 ? 1 : 0;
  while (hi + 1 < g.size() && g[hi] < x) ++hi;
  const size_t lo = hi > 0 ? hi - 1 : 0;
  const double gap_lo = curve.points[lo].rate_estimate - curve.envelope[lo];
  const double gap_hi = curve.points[hi].rate_estimate - curve.envelope[hi];
  return std::max(gap_lo, gap_hi) + kOracleNoiseFloor;
}

ChainReport verify_theorem_chain(const RDCode& code, const DensityMatrix& rho,
                                 const RDCurve& curve_oracle) {
  if (rho.dim() != code.source_dim())
    throw DimensionError("verify_theorem_chain: source dimension does not match the code");
  const int n = code.n();
  const double n_rate = static_cast<double>(n) * code.rate();  // log2(channel_dim)

  DensityMatrix rho_n = tensor_power(rho, n);
  DensityMatrix rho_encoded = apply(code.encoder(), rho_n);
  const double s_encoded = von_neumann_entropy(rho_encoded);
  const double ic_encoder = coherent_information(rho_n, code.encoder());
  KrausChannel block = compose(code.decoder(), code.encoder());
  const double ic_block = coherent_information(rho_n, block);

  std::vector<double> marginal_ic, marginal_d;
  for (int i = 1; i <= n; ++i) {
    KrausChannel t_i = reduced_channel(block, rho, i, n);
    marginal_ic.push_back(coherent_information(rho, t_i));
    marginal_d.push_back(entanglement_distortion(rho, t_i));
  }
  const double sum_ic = std::accumulate(marginal_ic.begin(), marginal_ic.end(), 0.0);
  const double block_distortion =
      std::accumulate(marginal_d.begin(), marginal_d.end(), 0.0) / static_cast<double>(n);

  ChainReport report;
  report.marginal_distortions = marginal_d;
  report.block_distortion = block_distortion;

  auto exact_step = [&](const std::string& name, double lhs, double rhs) {
    const double slack = lhs - rhs;
    report.steps.push_back(
        {name, lhs, rhs, slack, true,
         slack >= kExactStepFloor ? ChainStatus::holds : ChainStatus::violated});
  };
  exact_step("dimension_bound", n_rate, s_encoded);
  exact_step("entropy_exchange_positivity", s_encoded, ic_encoder);
  exact_step("data_processing", ic_encoder, ic_block);
  exact_step("marginal_superadditivity", ic_block, sum_ic);

  // Oracle-backed steps: the curve values are upper bounds on the true
  // function, so a small negative slack may only reflect oracle looseness.
  auto oracle_status = [&](double slack, double looseness) {
    if (slack >= kExactStepFloor) return ChainStatus::consistent;
    if (slack >= -looseness) return ChainStatus::gap_limited;
    return ChainStatus::violated;
  };

  double sum_oracle = 0.0, sum_looseness = 0.0;
  for (double d : marginal_d) {
    sum_oracle += curve_upper_bound(curve_oracle, d);
    sum_looseness += curve_looseness(curve_oracle, d);
  }
  const double slack_definition = sum_ic - sum_oracle;
  report.steps.push_back({"rd_function_definition", sum_ic, sum_oracle, slack_definition, false,
                          oracle_status(slack_definition, sum_looseness)});

  const double mean_oracle = sum_oracle / static_cast<double>(n);
  const double oracle_at_block = curve_upper_bound(curve_oracle, block_distortion);
  const double slack_convexity = mean_oracle - oracle_at_block;
  const double looseness_convexity =
      sum_looseness / static_cast<double>(n) + curve_looseness(curve_oracle, block_distortion);
  report.steps.push_back({"rd_function_convexity", mean_oracle, oracle_at_block, slack_convexity,
                          false, oracle_status(slack_convexity, looseness_convexity)});

  report.exact_steps_hold = true;
  for (const auto& step : report.steps)
    if (step.exact && step.status != ChainStatus::holds) report.exact_steps_hold = false;
  return report;
}

// ---------------------------------------------------------------------------
// Code search.

namespace {

// Basis-embedding isometry: column x maps to basis vector (x mod dim_out) of
// the output paired with environment level (x / dim_out). Gives the identity
// code when dim_out = dim_in and env level 0.
Matrix embedding_seed(int dim_in, int dim_out, int dim_env) {
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(dim_out) * dim_env, dim_in);
  for (int x = 0; x < dim_in; ++x) {
    const int k = x % dim_out;
    const int e = x / dim_out;
    if (e >= dim_env) throw DimensionError("embedding_seed: environment too small");
    v(static_cast<Eigen::Index>(k) * dim_env + e, x) = 1.0;
  }
  return v;
}

struct CodeTracker {
  bool found = false;
  double distortion = std::numeric_limits<double>::infinity();
  std::vector<Matrix> isometries;

  void consider(double d, const std::vector<Matrix>& vs) {
    if (!found || d < distortion) {
      found = true;
      distortion = d;
      isometries = vs;
    }
  }
};

}  // namespace

RDCode search_codes(const DensityMatrix& rho, int n, int channel_dim,
                    const OptimizerConfig& cfg) {
  if (n < 1) throw DimensionError("search_codes: block length must be >= 1");
  if (channel_dim < 1) throw DimensionError("search_codes: channel dimension must be >= 1");
  const int d = rho.dim();
  const int dn = checked_int_power(d, n);
  if (cfg.restarts < 1 || cfg.max_iterations < 1)
    throw ValidationError("OptimizerConfig: counts must be >= 1");

  const int env_enc = dn * channel_dim;  // Kraus-rank maximum for each map
  const int env_dec = channel_dim * dn;

  // Slot input operators are fixed by the source; precompute them.
  std::vector<DensityMatrix> slots(static_cast<size_t>(n), rho);
  std::vector<Matrix> slot_inputs;
  slot_inputs.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i)
    slot_inputs.push_back(detail::marginal_input_operator(slots, i));
  std::vector<int> traced_dims(static_cast<size_t>(n), d);
  traced_dims.push_back(d);
  const DimensionSpec out_ref_dims(traced_dims);
  const Matrix i_ref = Matrix::Identity(d, d);

  CodeTracker tracker;
  auto objective = [&](const std::vector<Matrix>& vs) {
    std::vector<Matrix> enc = kraus_from_isometry(vs[0], channel_dim, env_enc);
    std::vector<Matrix> dec = kraus_from_isometry(vs[1], dn, env_dec);
    double fe_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      Matrix y1 = Matrix::Zero(static_cast<Eigen::Index>(channel_dim) * d,
                               static_cast<Eigen::Index>(channel_dim) * d);
      for (const auto& a : enc) {
        Matrix ext = tensor(a, i_ref);
        y1 += ext * slot_inputs[static_cast<size_t>(i)] * ext.adjoint();
      }
      Matrix y2 = Matrix::Zero(static_cast<Eigen::Index>(dn) * d,
                               static_cast<Eigen::Index>(dn) * d);
      for (const auto& b : dec) {
        Matrix ext = tensor(b, i_ref);
        y2 += ext * y1 * ext.adjoint();
      }
      Matrix choi = partial_trace(y2, out_ref_dims, {i + 1, n + 1});
      fe_sum += detail::fe_from_choi(rho.matrix(), choi);
    }
    const double distortion = 1.0 - fe_sum / static_cast<double>(n);
    tracker.consider(distortion, vs);
    return distortion;
  };

  for (int k = 0; k < cfg.restarts; ++k) {
    std::vector<Matrix> start;
    if (k == 0) {
      start = {embedding_seed(dn, channel_dim, env_enc), embedding_seed(channel_dim, dn, env_dec)};
    } else {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
      start = {random_isometry_matrix(channel_dim * env_enc, dn, rng),
               random_isometry_matrix(dn * env_dec, channel_dim, rng)};
    }
    descend(std::move(start), objective, cfg);
  }
  if (!tracker.found) throw NumericError("search_codes: no candidate code evaluated");

  KrausChannel encoder = canonical_reduce(stinespring_to_kraus(
      StinespringIsometry(dn, channel_dim, env_enc, tracker.isometries[0])));
  KrausChannel decoder = canonical_reduce(stinespring_to_kraus(
      StinespringIsometry(channel_dim, dn, env_dec, tracker.isometries[1])));
  return RDCode(n, channel_dim, std::move(encoder), std::move(decoder));
}

}  // namespace qrd
