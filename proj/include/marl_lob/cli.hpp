#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "marl_lob/config.hpp"

namespace marl_lob::cli {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Trains the configured case and writes its artifacts and manifest.json
/// under config.out.
int cmd_run(const RunConfig& config, std::ostream& log);

/// Subset of {moments, acf, impact, complexity}; "all" expands to every one.
std::set<std::string> parse_which(const std::string& spec);

/// Writes analysis CSVs next to the manifest unless `out` is given.
int cmd_analyze(const std::filesystem::path& manifest, const std::set<std::string>& which,
                const std::filesystem::path& out, std::ostream& log);

/// Cross-case moment table and dimension differences against the baseline.
int cmd_compare(const std::vector<std::filesystem::path>& manifests, const std::filesystem::path& baseline,
                const std::filesystem::path& out, std::ostream& log);

/// Full command line, including the subcommand.
int main(int argc, char** argv);

}  // namespace marl_lob::cli
