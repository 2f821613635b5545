#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrd/entropics.hpp"

namespace qrd {

struct OptimizerConfig {
  int restarts = 6;
  int max_iterations = 400;
  double step_size = 0.5;        // initial line-search step
  double penalty_weight = 64.0;  // weight on max(0, d - D)^2
  double gradient_tolerance = 1e-6;
  int env_dim = 4;               // candidate-channel Kraus rank, in [1, dim^2]
  std::uint64_t seed = 0;

  /// Defaults with the full-rank environment for the given source dimension.
  static OptimizerConfig defaults_for(int dim);
};

/// One estimate of R^I(D): the lowest coherent information found over
/// channels with distortion within the target. The witness is feasible and
/// its coherent information exact, so rate_estimate is a certified upper
/// bound on the true minimum.
struct RDPoint {
  double distortion_target;
  double rate_estimate;  // bits; equals I_c(source, witness_channel)
  KrausChannel witness_channel;
  double witness_distortion;
  int restarts_used;
  long iterations;          // accepted descent steps summed over restarts
  double penalty_residual;  // max(0, witness_distortion - distortion_target)
};

struct RDCurve {
  DensityMatrix source;
  std::vector<double> grid;
  std::vector<RDPoint> points;
  /// Convex nonincreasing post-pass of the raw estimates (greatest convex
  /// minorant, then running minimum); still an upper bound on the true curve.
  std::vector<double> envelope;
  std::uint64_t seed;
  OptimizerConfig config;
};

/// Multi-restart penalized descent over Stinespring isometry parameters with
/// polar retraction; restarts are seeded deterministically (identity-seeded,
/// depolarizing-seeded when env_dim allows, then random) and every feasible
/// iterate is a candidate. Deterministic given cfg.seed.
RDPoint min_coherent_info_at_D(const DensityMatrix& rho, double distortion_target,
                               const OptimizerConfig& cfg);

/// One RDPoint per grid value, warm-starting each point from the previous
/// witness in addition to the standard restarts.
RDCurve rd_curve(const DensityMatrix& rho, const std::vector<double>& grid,
                 const OptimizerConfig& cfg);

std::vector<double> lower_convex_envelope(const std::vector<double>& grid,
                                          const std::vector<double>& values);

struct MonotoneConvexReport {
  double max_monotonicity_violation;
  double max_convexity_violation;
  double tol;
  bool pass;
};

MonotoneConvexReport check_monotone_convex_values(const std::vector<double>& grid,
                                                  const std::vector<double>& values, double tol);
/// Checks the curve's envelope (the post-pass is what the convexity contract
/// covers); use check_monotone_convex_values on point estimates for the raw
/// series.
MonotoneConvexReport check_monotone_convex(const RDCurve& curve, double tol);

/// (n, 2^{nR}) rate-distortion code: encoder d^n -> K, decoder K -> d^n,
/// rate = log2(K)/n qubits per source emission.
class RDCode {
public:
  RDCode(int n, int channel_dim, KrausChannel encoder, KrausChannel decoder);
  static RDCode identity_code(int source_dim, int n);

  int n() const { return n_; }
  int channel_dim() const { return channel_dim_; }
  int source_dim() const { return source_dim_; }
  double rate() const;
  const KrausChannel& encoder() const { return encoder_; }
  const KrausChannel& decoder() const { return decoder_; }

private:
  int n_;
  int channel_dim_;
  int source_dim_;
  KrausChannel encoder_;
  KrausChannel decoder_;
};

struct CodeEvaluation {
  double rate;
  double distortion_e;
  std::vector<double> per_slot;
};

CodeEvaluation evaluate_code(const RDCode& code, const DensityMatrix& rho);

enum class ChainStatus {
  holds,        // exact step, slack >= -1e-7
  consistent,   // oracle step holds with the estimated curve
  gap_limited,  // violated by less than the oracle's estimated looseness
  violated,
};

struct ChainStep {
  std::string name;
  double lhs;
  double rhs;
  double slack;  // lhs - rhs
  bool exact;    // true for the four theorem-guaranteed steps
  ChainStatus status;
};

struct ChainReport {
  std::vector<ChainStep> steps;
  bool exact_steps_hold;
  std::vector<double> marginal_distortions;
  double block_distortion;
};

/// Evaluates the six-step rate bound for a concrete code. The first four
/// steps (dimension bound, entropy-exchange positivity, data processing,
/// marginal superadditivity) are exact numerical checks; the last two consume
/// the curve oracle, whose values are upper bounds on the true function.
ChainReport verify_theorem_chain(const RDCode& code, const DensityMatrix& rho,
                                 const RDCurve& curve_oracle);

/// Piecewise-linear evaluation of the curve envelope; errors if the
/// distortion lies outside the covered grid.
double curve_upper_bound(const RDCurve& curve, double distortion);
/// Estimated looseness of the upper bound near a distortion value: the local
/// raw-vs-envelope gap plus the optimizer noise floor.
double curve_looseness(const RDCurve& curve, double distortion);

/// Multi-restart descent over encoder and decoder isometries minimizing the
/// block entanglement distortion. Restart 0 uses basis-embedding seeds (the
/// identity code when channel_dim = d^n); deterministic given cfg.seed.
RDCode search_codes(const DensityMatrix& rho, int n, int channel_dim, const OptimizerConfig& cfg);

}  // namespace qrd
