#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace s2m::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes shared by all subcommands.
enum ExitCode : int { kOk = 0, kIoFailure = 1, kInvalidInput = 2 };

/// Runs `s2m <subcommand> ...`. Diagnostics go to `err`; `out` only receives
/// machine-readable output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64 over the compact dump of `config`. Object keys are sorted by
/// the json type, so the hash does not depend on key order in the input.
std::string config_hash(const nlohmann::json& config);

/// Parses "a,b,c" or an arithmetic progression "a,b,...,z".
std::vector<double> parse_rate_list(const std::string& text);

/// Parses "3", "0..18" (inclusive), or a comma list of either.
std::vector<std::size_t> parse_id_list(const std::string& text);

} // namespace s2m::cli
