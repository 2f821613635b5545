#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qrd/entropics.hpp"
#include "qrd/rdopt.hpp"
#include "qrd/verify.hpp"

namespace qrd {

// JSON formats:
//   matrix   {"rows", "cols", "entries": [[re, im], ...]}  (flat row-major)
//   state    matrix fields plus "dims": [factor dims]
//   channel  {"dim_in", "dim_out", "kraus": [matrix, ...]}
//   ensemble {"items": [{"p": real, "state": [[re, im], ...]}, ...]}
//   code     {"n", "K", "encoder", "decoder"}

std::string to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

std::string to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);

std::string to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const std::string& text);

std::string to_json(const Ensemble& ens);
Ensemble ensemble_from_json(const std::string& text);

std::string to_json(const RDCode& code);
RDCode code_from_json(const std::string& text);

/// Columns: D_target, R_estimate_raw, R_estimate_envelope, witness_distortion,
/// restarts, iterations. Values use 17 significant digits.
std::string curve_to_csv(const RDCurve& curve);
std::string curve_to_json(const RDCurve& curve);  // embeds witness channels
RDCurve curve_from_json(const std::string& text);

std::string reports_to_json(const std::vector<SlackReport>& reports, const FuzzConfig& cfg);

std::string chain_report_to_json(const ChainReport& report);

std::string to_string(ChainStatus status);

/// Round-trip exact decimal formatting (17 significant digits).
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Write-to-temp, rename-on-success; no partial artifact remains on failure.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

/// Self-contained worst-instance bundles (inequality, trial seed, regenerated
/// objects, recorded slack), one file per report, under `dir`.
void write_fuzz_regression_bundles(const std::vector<SlackReport>& reports, const FuzzConfig& cfg,
                                   const std::filesystem::path& dir);

/// Recompute the slack of a bundle from its embedded objects (not from the
/// seed), for regression comparison against the recorded value.
double reevaluate_bundle(const std::string& bundle_json);
double bundle_recorded_slack(const std::string& bundle_json);

}  // namespace qrd
