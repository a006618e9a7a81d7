#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wvote/core.hpp"
#include "wvote/rules.hpp"

namespace wvote {

enum class SchemeKind {
    full_info,                 // Hedge over single-voter weight vectors
    partial_info,              // EXP3-style importance-weighted estimates
    deterministic_unilateral,  // plays the Hedge distribution itself as the weight vector
    constant,                  // always e_1
};

std::string to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& name);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::full_info;
    int voters = 1;
    int horizon = 1;
    double eta = 1.0;
};

/// sqrt(2 ln n / T) under full feedback, sqrt(2 ln n / (T n)) for partial_info
/// and for deterministic_unilateral under partial feedback. With a single
/// voter the rate is irrelevant and 1 is used.
double default_eta(SchemeKind kind, int voters, int horizon, bool partial_feedback = false);

/// Validating factory; `eta` overrides the default when given.
SchemeConfig make_scheme_config(SchemeKind kind, int voters, int horizon, std::optional<double> eta = std::nullopt,
                                bool partial_feedback = false);

/// Cumulative per-voter losses: true losses under full information,
/// importance-weighted estimates under partial information.
struct SchemeState {
    std::vector<double> cumulative;
    int t = 0;
    int horizon = 1;

    static SchemeState initial(const SchemeConfig& config);
};

/// p_i proportional to exp(-eta * cumulative_i), computed with a min-shift.
std::vector<double> voter_distribution(const SchemeState& state, const SchemeConfig& config);

/// L_f(pi_{sigma, e_i}, l) for every voter, evaluating each distinct ranking once.
std::vector<double> induced_voter_losses(const VotingRule& rule, std::span<const Ranking> rankings,
                                         const LossVector& losses);

SchemeState full_info_update(const SchemeState& state, std::span<const Ranking> rankings, const LossVector& losses,
                             const VotingRule& rule);

/// Same as full_info_update when the induced voter losses are already known.
SchemeState apply_voter_losses(const SchemeState& state, std::span<const double> voter_losses);

/// Adds observed / p[voter] to the chosen voter only. Throws
/// EstimatorUndefined when p[voter] is zero.
SchemeState partial_info_update(const SchemeState& state, int voter, double observed_loss, std::span<const double> p);

/// f(pi_{sigma, e_i})_winner for every voter: the chance voter i alone elects `winner`.
std::vector<double> induced_winner_probabilities(const VotingRule& rule, std::span<const Ranking> rankings,
                                                 Alternative winner);

/// Partial-feedback update for deterministic_unilateral. Voter i is charged
/// observed * q_i / sum_j p_j q_j with q = induced_winner_probabilities, the
/// expectation of the sampled-voter estimate given the winner. Unbiased when
/// the rule is a distribution over unilaterals, and a function of the
/// observation only. Throws EstimatorUndefined when sum_j p_j q_j is zero.
SchemeState unilateral_partial_update(const SchemeState& state, std::span<const double> winner_prob, double observed_loss,
                                      std::span<const double> p);

/// Advances the round counter without touching the losses.
SchemeState advance(const SchemeState& state);

struct SchemeAction {
    WeightVector weights;
    std::optional<int> voter;         // the sampled voter for randomized-weight kinds
    std::vector<double> distribution;  // p^t (e_1 for the constant scheme)
};

/// Emits this round's weight vector. Randomized kinds draw one voter from p^t
/// and play e_{i}; deterministic_unilateral plays p^t itself.
SchemeAction act(const SchemeState& state, const SchemeConfig& config, Rng& rng);

}  // namespace wvote
