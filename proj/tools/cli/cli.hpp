#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wavebif/bifurcation.hpp"
#include "wavebif/params.hpp"
#include "wavebif/verification.hpp"

namespace wavebif::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitSolverFailed = 3;

/// Frozen CSV header of `wavebif branch`.
inline constexpr std::string_view kBranchHeader =
    "rho,alpha,omega,v_norm,alpha_ratio,resid_be1,resid_be2,resid_range,resid_pde,status";

/// Runs the command line; returns the exit code. Normal output goes to `out`
/// (unless --out names a file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json params_to_json(const ModelParams& params);
nlohmann::json point_to_json(const BranchPoint& point, const ModelParams& params);

/// Full solve document: schema_version, params, result, spectrum of u sorted
/// by (k, n).
nlohmann::json solve_document(const BranchPoint& point, const ModelParams& params);

/// Rebuilds the BranchPoint stored in a solve document (v is the non-kernel
/// part of the stored spectrum). Throws InvalidParams on malformed input.
BranchPoint point_from_document(const nlohmann::json& doc, const ModelParams& params);

std::string branch_csv(const std::vector<BranchRow>& rows, const ModelParams& params);
nlohmann::json verify_document(const std::vector<CheckResult>& checks, const ModelParams& params);

/// Schema problems, empty when the input conforms.
std::vector<std::string> validate_solve_document(const nlohmann::json& doc);
std::vector<std::string> validate_branch_csv(std::string_view csv);
std::vector<std::string> validate_verify_document(const nlohmann::json& doc);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

}  // namespace wavebif::cli
