#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "marl_lob/complexity.hpp"
#include "marl_lob/orchestrator.hpp"
#include "marl_lob/stylized_facts.hpp"

namespace marl_lob {

/// Bad configuration. The message names the offending line when there is one.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnalysisParams {
    int acf_max_lag = 100;
    facts::MomentOptions moments;
    facts::ImpactBins impact;
    int m_min = 1;
    int m_max = 10;
    int phase_segment = 250;
    /// Fixed delay for the phase-space plot; the correlation time when absent.
    std::optional<int> phase_tau;
    complexity::DimensionOptions dimension;
};

enum class RecordMode { LastCycle, All, None };

struct RunConfig {
    CaseConfig case_config = load_case(0);
    std::filesystem::path out = "out";
    RecordMode record = RecordMode::LastCycle;
    AnalysisParams analysis;
    /// Sessions averaged for the ADV calibration.
    int adv_sessions = 20;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and bad
/// values raise ConfigError naming the line.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Applies one assignment as if it appeared in a config file.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Throws ConfigError for out-of-range settings.
void validate_config(const RunConfig& config);

/// Canonical text of every setting; the run hash is taken over it.
std::string canonical_text(const RunConfig& config);

}  // namespace marl_lob
