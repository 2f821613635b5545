#include "qrd/verify.hpp"

#include <cmath>
#include <limits>

namespace qrd {

namespace {

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = rng.complex_gaussian();
  return g;
}

double entropy_of_marginal(const DensityMatrix& rho, const std::vector<int>& keep) {
  return detail::entropy_psd_bits(partial_trace(rho.matrix(), rho.dims(), keep));
}

constexpr const char* kSsa = "strong_subadditivity";
constexpr const char* kFourParty = "four_party_form";
constexpr const char* kMarginal = "marginal_superadditivity";
constexpr const char* kDataProc = "data_processing";
constexpr const char* kEntropyExchange = "entropy_exchange_positivity";

std::uint64_t family_tag(const std::string& name) {
  if (name == kSsa) return 1;
  if (name == kFourParty) return 2;
  if (name == kMarginal) return 3;
  if (name == kDataProc) return 4;
  if (name == kEntropyExchange) return 5;
  throw ValidationError("unknown inequality name: " + name);
}

int pick_dim(Rng& rng, const std::vector<int>& choices) {
  if (choices.empty()) throw ValidationError("fuzz: dimension list must be nonempty");
  return choices[static_cast<size_t>(rng.below(static_cast<int>(choices.size())))];
}

DensityMatrix ginibre_state(int dim, Rng& rng, DimensionSpec dims) {
  Matrix g = ginibre(dim, dim, rng);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  // enforce exact Hermiticity against rounding in the product
  m = ((m + m.adjoint()) / 2.0).eval();
  return DensityMatrix(std::move(m), std::move(dims));
}

}  // namespace

DensityMatrix random_density_matrix(int dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("random_density_matrix: dimension must be positive");
  Rng rng(seed);
  return ginibre_state(dim, rng, DimensionSpec::single(dim));
}

Matrix random_isometry_matrix(int rows, int cols, Rng& rng) {
  if (rows < cols) throw DimensionError("random_isometry: need rows >= cols");
  Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  // Fix the column phases so the distribution is Haar over isometries.
  for (int c = 0; c < cols; ++c) {
    Complex d = r(c, c);
    double a = std::abs(d);
    if (a > 0.0) q.col(c) *= d / a;
  }
  return q;
}

StinespringIsometry random_isometry(int dim_in, int dim_out, int dim_env, std::uint64_t seed) {
  if (dim_env < 1) throw DimensionError("random_isometry: environment dimension must be >= 1");
  Rng rng(seed);
  return StinespringIsometry(dim_in, dim_out, dim_env,
                             random_isometry_matrix(dim_out * dim_env, dim_in, rng));
}

KrausChannel random_channel(int dim_in, int dim_out, int env_dim, std::uint64_t seed) {
  return stinespring_to_kraus(random_isometry(dim_in, dim_out, env_dim, seed));
}

double check_ssa_instance(const DensityMatrix& rho_abc) {
  if (rho_abc.dims().count() != 3)
    throw DimensionError("check_ssa_instance: exactly 3 tensor factors required");
  double s_ab = entropy_of_marginal(rho_abc, {1, 2});
  double s_bc = entropy_of_marginal(rho_abc, {2, 3});
  double s_abc = detail::entropy_psd_bits(rho_abc.matrix());
  double s_b = entropy_of_marginal(rho_abc, {2});
  return s_ab + s_bc - s_abc - s_b;
}

double check_entanglement_form(const DensityMatrix& rho) {
  if (rho.dims().count() != 4)
    throw DimensionError("check_entanglement_form: exactly 4 tensor factors (R1,Q1,R2,Q2) required");
  double s_r1q1 = entropy_of_marginal(rho, {1, 2});
  double s_r2q2 = entropy_of_marginal(rho, {3, 4});
  double s_all = detail::entropy_psd_bits(rho.matrix());
  double s_q1 = entropy_of_marginal(rho, {2});
  double s_q2 = entropy_of_marginal(rho, {4});
  double s_q1q2 = entropy_of_marginal(rho, {2, 4});
  return (s_r1q1 + s_r2q2 - s_all) - (s_q1 + s_q2 - s_q1q2);
}

double check_marginal_superadditivity(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                      const KrausChannel& joint_ch) {
  const int d = rho1.dim() * rho2.dim();
  if (joint_ch.dim_in() != d || joint_ch.dim_out() != d)
    throw DimensionError("check_marginal_superadditivity: joint channel must act on the product space");
  DensityMatrix product = tensor(rho1, rho2);
  std::vector<DensityMatrix> slots{rho1, rho2};
  DimensionSpec out_dims({rho1.dim(), rho2.dim()});
  KrausChannel e1 = reduced_channel_general(joint_ch, slots, out_dims, 1);
  KrausChannel e2 = reduced_channel_general(joint_ch, slots, out_dims, 2);
  return coherent_information(product, joint_ch) - coherent_information(rho1, e1) -
         coherent_information(rho2, e2);
}

double check_data_processing(const DensityMatrix& rho, const KrausChannel& e,
                             const KrausChannel& d) {
  return coherent_information(rho, e) - coherent_information(rho, compose(d, e));
}

FuzzConfig FuzzConfig::uniform(int trials) {
  FuzzConfig cfg;
  cfg.ssa_trials = trials;
  cfg.four_party_trials = trials;
  cfg.marginal_trials = trials;
  cfg.data_processing_trials = trials;
  cfg.entropy_exchange_trials = trials;
  return cfg;
}

std::uint64_t fuzz_trial_seed(std::uint64_t master, const std::string& inequality_name,
                              std::uint64_t index) {
  return derive_seed(derive_seed(master, family_tag(inequality_name)), index);
}

DensityMatrix make_fuzz_state(std::uint64_t trial_seed, const std::vector<int>& dim_choices,
                              int n_factors) {
  Rng rng(trial_seed);
  std::vector<int> dims;
  dims.reserve(static_cast<size_t>(n_factors));
  int total = 1;
  for (int f = 0; f < n_factors; ++f) {
    dims.push_back(pick_dim(rng, dim_choices));
    total *= dims.back();
  }
  return ginibre_state(total, rng, DimensionSpec(std::move(dims)));
}

MarginalInstance make_marginal_instance(std::uint64_t trial_seed,
                                        const std::vector<int>& dim_choices) {
  Rng rng(trial_seed);
  int d1 = pick_dim(rng, dim_choices);
  int d2 = pick_dim(rng, dim_choices);
  DensityMatrix rho1 = ginibre_state(d1, rng, DimensionSpec::single(d1));
  DensityMatrix rho2 = ginibre_state(d2, rng, DimensionSpec::single(d2));
  int d = d1 * d2;
  int env = 1 + rng.below(d * d);  // up to the Kraus-rank maximum
  KrausChannel joint = stinespring_to_kraus(
      StinespringIsometry(d, d, env, random_isometry_matrix(d * env, d, rng)));
  return {std::move(rho1), std::move(rho2), std::move(joint)};
}

DataProcessingInstance make_data_processing_instance(std::uint64_t trial_seed,
                                                     const std::vector<int>& dim_choices) {
  Rng rng(trial_seed);
  int dim = pick_dim(rng, dim_choices);
  DensityMatrix rho = ginibre_state(dim, rng, DimensionSpec::single(dim));
  int env_e = 1 + rng.below(dim * dim);
  KrausChannel e = stinespring_to_kraus(
      StinespringIsometry(dim, dim, env_e, random_isometry_matrix(dim * env_e, dim, rng)));
  int env_d = 1 + rng.below(dim * dim);
  KrausChannel d = stinespring_to_kraus(
      StinespringIsometry(dim, dim, env_d, random_isometry_matrix(dim * env_d, dim, rng)));
  return {std::move(rho), std::move(e), std::move(d)};
}

StateChannelInstance make_entropy_exchange_instance(std::uint64_t trial_seed,
                                                    const std::vector<int>& dim_choices) {
  Rng rng(trial_seed);
  int dim = pick_dim(rng, dim_choices);
  DensityMatrix rho = ginibre_state(dim, rng, DimensionSpec::single(dim));
  int env = 1 + rng.below(dim * dim);
  KrausChannel ch = stinespring_to_kraus(
      StinespringIsometry(dim, dim, env, random_isometry_matrix(dim * env, dim, rng)));
  return {std::move(rho), std::move(ch)};
}

double evaluate_fuzz_slack(const std::string& inequality_name, std::uint64_t trial_seed,
                           const std::vector<int>& dim_choices) {
  if (inequality_name == kSsa) return check_ssa_instance(make_fuzz_state(trial_seed, dim_choices, 3));
  if (inequality_name == kFourParty)
    return check_entanglement_form(make_fuzz_state(trial_seed, dim_choices, 4));
  if (inequality_name == kMarginal) {
    MarginalInstance inst = make_marginal_instance(trial_seed, dim_choices);
    return check_marginal_superadditivity(inst.rho1, inst.rho2, inst.joint);
  }
  if (inequality_name == kDataProc) {
    DataProcessingInstance inst = make_data_processing_instance(trial_seed, dim_choices);
    return check_data_processing(inst.rho, inst.e, inst.d);
  }
  if (inequality_name == kEntropyExchange) {
    StateChannelInstance inst = make_entropy_exchange_instance(trial_seed, dim_choices);
    // Independent evaluation through the W-matrix definition.
    const int m = inst.ch.kraus_count();
    Matrix w(m, m);
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        w(k, l) = (inst.ch.kraus()[static_cast<size_t>(k)] * inst.rho.matrix() *
                   inst.ch.kraus()[static_cast<size_t>(l)].adjoint())
                      .trace();
    return detail::entropy_psd_bits(w);
  }
  throw ValidationError("unknown inequality name: " + inequality_name);
}

namespace {

SlackReport run_family(const std::string& name, int trials, const FuzzConfig& cfg,
                       double floor) {
  if (trials < 1) throw ValidationError("fuzz: trial counts must be >= 1");
  SlackReport report;
  report.inequality_name = name;
  report.trials = trials;
  report.min_slack = std::numeric_limits<double>::infinity();
  report.slack_floor_applied = floor;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t trial_seed = fuzz_trial_seed(cfg.seed, name, static_cast<std::uint64_t>(t));
    double slack = evaluate_fuzz_slack(name, trial_seed, cfg.dims);
    sum += slack;
    if (slack < report.min_slack) {
      report.min_slack = slack;
      report.worst_instance_seed = trial_seed;
    }
    if (slack < floor) ++report.violations;
  }
  report.mean_slack = sum / trials;
  return report;
}

}  // namespace

std::vector<SlackReport> fuzz(const FuzzConfig& cfg) {
  const double pure_floor = cfg.slack_floor;
  const double channel_floor = 10.0 * cfg.slack_floor;
  std::vector<SlackReport> reports;
  reports.push_back(run_family(kSsa, cfg.ssa_trials, cfg, pure_floor));
  reports.push_back(run_family(kFourParty, cfg.four_party_trials, cfg, pure_floor));
  reports.push_back(run_family(kMarginal, cfg.marginal_trials, cfg, channel_floor));
  reports.push_back(run_family(kDataProc, cfg.data_processing_trials, cfg, channel_floor));
  reports.push_back(run_family(kEntropyExchange, cfg.entropy_exchange_trials, cfg, channel_floor));
  return reports;
}

}  // namespace qrd
