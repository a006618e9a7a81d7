#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wvote/adversaries.hpp"
#include "wvote/rules.hpp"
#include "wvote/schemes.hpp"

namespace wvote {

enum class Feedback { full, partial };

std::string to_string(Feedback feedback);
Feedback feedback_from_string(const std::string& name);

/// Everything needed to replay one episode from a seed.
struct EpisodeSpec {
    SchemeConfig scheme;
    VotingRule rule = ConstantUniform{};
    Feedback feedback = Feedback::full;
    /// Builds a fresh source for one episode; the argument is the source's own seed.
    std::function<std::unique_ptr<RoundSource>(std::uint64_t)> make_source;
    std::string description;
};

struct RoundRecord {
    int t = 0;  // 1-based round index
    RoundChallenge challenge;
    WeightVector weights;
    std::optional<int> voter;
    Alternative winner = 0;
    double scheme_expected_loss = 0.0;      // L_f(pi_{sigma, w}, l)
    double voter_draw_expected_loss = 0.0;  // sum_i p_i L_f(pi_{sigma, e_i}, l)
    double realized_loss = 0.0;             // l_{winner}
    std::vector<double> per_voter_loss;     // L_f(pi_{sigma, e_i}, l)
};

struct Trace {
    std::vector<RoundRecord> records;
    std::string config_echo;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

/// Runs T = spec.scheme.horizon rounds. Each round the scheme commits to a
/// weight vector before the source reveals rankings and losses. Throws
/// ConfigError for feedback/scheme combinations without an update rule.
Trace run_episode(const EpisodeSpec& spec, std::uint64_t seed);

struct BestVoter {
    int voter = 0;  // 0-based; ties go to the smallest index
    double cumulative_loss = 0.0;
};

BestVoter best_voter(const Trace& trace);
/// Exact minimiser over voters of the column sums of `per_round_voter_losses`.
BestVoter best_voter(std::span<const std::vector<double>> per_round_voter_losses);

/// Total scheme expected loss minus the best voter's cumulative loss.
double regret(const Trace& trace);

struct RunningTally {
    double cumulative_scheme_loss = 0.0;
    double best_voter_cumulative_loss = 0.0;
    double cumulative_regret = 0.0;
};

/// Prefix tallies after each round; the last entry agrees with regret(trace).
std::vector<RunningTally> running_tallies(const Trace& trace);

struct MonteCarloResult {
    double mean = 0.0;
    double standard_error = 0.0;
    std::vector<double> regrets;  // trial k used seed base_seed + k
};

/// Runs independent trials in parallel; results do not depend on the thread count.
MonteCarloResult monte_carlo_regret(const EpisodeSpec& spec, int trials, std::uint64_t base_seed,
                                    unsigned threads = 0);

/// sum_i p_i L_f(pi_{sigma, e_i}, l), the exact expected round loss of a
/// scheme that plays e_i with probability p_i.
double oracle_expected_round_loss(const VotingRule& rule, std::span<const Ranking> rankings, const LossVector& losses,
                                  std::span<const double> p);

/// Derives independent stream seeds from one episode seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace wvote
