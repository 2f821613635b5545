#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrd/channels.hpp"
#include "qrd/entropics.hpp"
#include "qrd/random.hpp"

namespace qrd {

/// Hilbert-Schmidt-induced random state: G G† / tr(G G†) with i.i.d. complex
/// Gaussian G. Deterministic per seed.
DensityMatrix random_density_matrix(int dim, std::uint64_t seed);

/// Haar-style isometry from QR orthonormalization of a Gaussian matrix with
/// the R-diagonal phase fix.
StinespringIsometry random_isometry(int dim_in, int dim_out, int dim_env, std::uint64_t seed);
Matrix random_isometry_matrix(int rows, int cols, Rng& rng);

KrausChannel random_channel(int dim_in, int dim_out, int env_dim, std::uint64_t seed);

/// Strong subadditivity slack S(AB) + S(BC) - S(ABC) - S(B) for a state with
/// three declared factors; nonnegative up to numerics.
double check_ssa_instance(const DensityMatrix& rho_abc);

/// Four-party form on factors (R1, Q1, R2, Q2):
///   [S(R1Q1) + S(R2Q2) - S(R1Q1R2Q2)] - [S(Q1) + S(Q2) - S(Q1Q2)]
/// — the excess of marginal over joint entropies shrinks when the references
/// are traced out. Follows from two applications of strong subadditivity.
double check_entanglement_form(const DensityMatrix& rho);

/// Two-system superadditivity slack
///   I_c(rho1 ⊗ rho2, joint) - I_c(rho1, E_1) - I_c(rho2, E_2)
/// with E_i the marginal operations of the joint channel against the product
/// source.
double check_marginal_superadditivity(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                      const KrausChannel& joint_ch);

/// Data processing slack I_c(rho, e) - I_c(rho, d ∘ e).
double check_data_processing(const DensityMatrix& rho, const KrausChannel& e,
                             const KrausChannel& d);

struct FuzzConfig {
  int ssa_trials = 1000;
  int four_party_trials = 500;
  int marginal_trials = 500;
  int data_processing_trials = 500;
  int entropy_exchange_trials = 500;
  std::vector<int> dims = {2};  // subsystem dimensions sampled per factor
  std::uint64_t seed = 0;
  /// Floor for pure-entropy inequalities; channel-mediated checks apply 10x
  /// (extra numerical depth from Choi extraction).
  double slack_floor = -1e-8;

  static FuzzConfig uniform(int trials);
};

struct SlackReport {
  std::string inequality_name;
  int trials = 0;
  double min_slack = 0.0;
  double mean_slack = 0.0;
  std::uint64_t worst_instance_seed = 0;
  double slack_floor_applied = 0.0;
  int violations = 0;
};

/// One report per inequality (the four checks above plus entropy-exchange
/// positivity). Reproducible per seed; trial i of each family uses an
/// independent derived seed, so reports do not depend on execution order.
std::vector<SlackReport> fuzz(const FuzzConfig& cfg);

// Instance regeneration from a trial seed; fuzz uses these internally and the
// regression bundle writer re-creates worst instances through them.
DensityMatrix make_fuzz_state(std::uint64_t trial_seed, const std::vector<int>& dim_choices,
                              int n_factors);

struct MarginalInstance {
  DensityMatrix rho1;
  DensityMatrix rho2;
  KrausChannel joint;
};
MarginalInstance make_marginal_instance(std::uint64_t trial_seed, const std::vector<int>& dim_choices);

struct DataProcessingInstance {
  DensityMatrix rho;
  KrausChannel e;
  KrausChannel d;
};
DataProcessingInstance make_data_processing_instance(std::uint64_t trial_seed,
                                                     const std::vector<int>& dim_choices);

struct StateChannelInstance {
  DensityMatrix rho;
  KrausChannel ch;
};
StateChannelInstance make_entropy_exchange_instance(std::uint64_t trial_seed,
                                                    const std::vector<int>& dim_choices);

/// Trial seed of trial `index` within the named family stream.
std::uint64_t fuzz_trial_seed(std::uint64_t master, const std::string& inequality_name,
                              std::uint64_t index);

/// Recompute the slack of a named inequality from a regenerated instance.
double evaluate_fuzz_slack(const std::string& inequality_name, std::uint64_t trial_seed,
                           const std::vector<int>& dim_choices);

}  // namespace qrd
