#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wvote/harness.hpp"

namespace wvote {

struct SourceSpec {
    std::string kind;  // thm3 | thm5 | iid_random | file
    std::filesystem::path path;
    std::optional<double> delta;
};

struct ExperimentConfig {
    nlohmann::json rule_spec;
    VotingRule rule = ConstantUniform{};
    SchemeKind scheme = SchemeKind::full_info;
    std::optional<double> eta;
    int voters = 0;
    int alternatives = 0;  // 0 when inferred per round from a sequence file
    int horizon = 0;
    Feedback feedback = Feedback::full;
    SourceSpec source;
    std::uint64_t seed = 0;
    int trials = 1;
    std::string trace_csv = "trace.csv";
    std::string summary_json = "summary.json";
    /// Rounds read from a sequence file, shared by all trials.
    std::shared_ptr<const std::vector<RoundChallenge>> sequence;
};

/// Parses the rule grammar, e.g. {"kind":"randomized_positional","scores":[2,1,0]}.
/// Throws ConfigError on anything it does not recognise.
VotingRule parse_rule(const nlohmann::json& spec);

/// One JSON object per line: {"rankings": [[ids]...], "losses": [reals]}.
std::vector<RoundChallenge> parse_sequence(std::istream& in);
std::vector<RoundChallenge> load_sequence(const std::filesystem::path& path);

/// Relative sequence paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

EpisodeSpec build_episode(const ExperimentConfig& config);

/// sqrt(2 T ln n) under full feedback, sqrt(2 T n ln n) under partial feedback.
double regret_bound(Feedback feedback, int voters, int horizon);

/// 12 significant digits, the format used for every number the tool writes.
std::string format_real(double x);

void write_trace_csv(const Trace& trace, std::ostream& out);
nlohmann::json summarize(const ExperimentConfig& config, const Trace& first_trial, const MonteCarloResult& trials);

/// Exit codes: 0 success, 1 usage or configuration error.
int run_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err);

}  // namespace wvote
