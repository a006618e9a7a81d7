#include "wvote/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wvote {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::full_info: return "full_info";
        case SchemeKind::partial_info: return "partial_info";
        case SchemeKind::deterministic_unilateral: return "deterministic_unilateral";
        case SchemeKind::constant: return "constant";
    }
    return "?";
}

SchemeKind scheme_kind_from_string(const std::string& name) {
    for (SchemeKind k : {SchemeKind::full_info, SchemeKind::partial_info, SchemeKind::deterministic_unilateral,
                         SchemeKind::constant})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown scheme kind '" + name + "'");
}

double default_eta(SchemeKind kind, int voters, int horizon, bool partial_feedback) {
    if (voters <= 1) return 1.0;
    const double log_n = std::log(static_cast<double>(voters));
    if (kind == SchemeKind::partial_info || (partial_feedback && kind == SchemeKind::deterministic_unilateral)) return std::sqrt(2.0 * log_n / (static_cast<double>(horizon) * voters));
    return std::sqrt(2.0 * log_n / horizon);
}

SchemeConfig make_scheme_config(SchemeKind kind, int voters, int horizon, std::optional<double> eta,
                                bool partial_feedback) {
    if (voters < 1) throw ConfigError("need at least one voter");
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    const double rate = eta.value_or(default_eta(kind, voters, horizon, partial_feedback));
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("eta must be positive");
    return SchemeConfig{kind, voters, horizon, rate};
}

SchemeState SchemeState::initial(const SchemeConfig& config) {
    return SchemeState{std::vector<double>(static_cast<std::size_t>(config.voters), 0.0), 0, config.horizon};
}

std::vector<double> voter_distribution(const SchemeState& state, const SchemeConfig& config) {
    const auto& c = state.cumulative;
    const double lowest = *std::min_element(c.begin(), c.end());
    std::vector<double> p(c.size());
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        p[i] = std::exp(-config.eta * (c[i] - lowest));
        total += p[i];
    }
    for (double& x : p) x /= total;
    return p;
}

std::vector<double> induced_voter_losses(const VotingRule& rule, std::span<const Ranking> rankings,
                                         const LossVector& losses) {
    std::map<Ranking, double> cache;
    std::vector<double> out;
    out.reserve(rankings.size());
    for (const auto& ranking : rankings) {
        auto it = cache.find(ranking);
        if (it == cache.end())
            it = cache.emplace(ranking, expected_loss(rule, AnonymousProfile::unanimous(ranking), losses)).first;
        out.push_back(it->second);
    }
    return out;
}

namespace {

void require_open_round(const SchemeState& state) {
    if (state.t >= state.horizon)
        throw InvalidValue("scheme already played all " + std::to_string(state.horizon) + " rounds");
}

}  // namespace

SchemeState apply_voter_losses(const SchemeState& state, std::span<const double> voter_losses) {
    require_open_round(state);
    if (voter_losses.size() != state.cumulative.size()) throw ShapeMismatch("one loss per voter is required");
    SchemeState next = state;
    for (std::size_t i = 0; i < voter_losses.size(); ++i) next.cumulative[i] += voter_losses[i];
    ++next.t;
    return next;
}

SchemeState full_info_update(const SchemeState& state, std::span<const Ranking> rankings, const LossVector& losses,
                             const VotingRule& rule) {
    if (rankings.size() != state.cumulative.size()) throw ShapeMismatch("one ranking per voter is required");
    return apply_voter_losses(state, induced_voter_losses(rule, rankings, losses));
}

std::vector<double> induced_winner_probabilities(const VotingRule& rule, std::span<const Ranking> rankings,
                                                 Alternative winner) {
    std::map<Ranking, double> cache;
    std::vector<double> out;
    out.reserve(rankings.size());
    for (const auto& ranking : rankings) {
        auto it = cache.find(ranking);
        if (it == cache.end()) it = cache.emplace(ranking, rule.evaluate(AnonymousProfile::unanimous(ranking))[winner]).first;
        out.push_back(it->second);
    }
    return out;
}

SchemeState unilateral_partial_update(const SchemeState& state, std::span<const double> winner_prob, double observed_loss,
                                      std::span<const double> p) {
    require_open_round(state);
    if (p.size() != state.cumulative.size() || winner_prob.size() != p.size())
        throw ShapeMismatch("one probability per voter is required");
    if (!(observed_loss >= 0.0 && observed_loss <= 1.0)) throw InvalidValue("observed loss outside [0, 1]");
    double marginal = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) marginal += p[i] * winner_prob[i];
    if (!(marginal > 0.0)) throw EstimatorUndefined("the observed winner had probability zero under p");
    SchemeState next = state;
    for (std::size_t i = 0; i < p.size(); ++i) next.cumulative[i] += observed_loss * winner_prob[i] / marginal;
    ++next.t;
    return next;
}

SchemeState partial_info_update(const SchemeState& state, int voter, double observed_loss, std::span<const double> p) {
    require_open_round(state);
    if (p.size() != state.cumulative.size()) throw ShapeMismatch("one probability per voter is required");
    if (voter < 0 || voter >= static_cast<int>(p.size())) throw InvalidValue("chosen voter out of range");
    if (!(observed_loss >= 0.0 && observed_loss <= 1.0)) throw InvalidValue("observed loss outside [0, 1]");
    const double chosen = p[static_cast<std::size_t>(voter)];
    if (!(chosen > 0.0))
        throw EstimatorUndefined("voter " + std::to_string(voter) + " was chosen with probability zero");
    SchemeState next = state;
    next.cumulative[static_cast<std::size_t>(voter)] += observed_loss / chosen;
    ++next.t;
    return next;
}

SchemeState advance(const SchemeState& state) {
    require_open_round(state);
    SchemeState next = state;
    ++next.t;
    return next;
}

SchemeAction act(const SchemeState& state, const SchemeConfig& config, Rng& rng) {
    const int n = config.voters;
    switch (config.kind) {
        case SchemeKind::constant: {
            auto w = WeightVector::basis(n, 0);
            return {w, std::nullopt, w.values()};
        }
        case SchemeKind::deterministic_unilateral: {
            auto p = voter_distribution(state, config);
            return {WeightVector(p), std::nullopt, p};
        }
        case SchemeKind::full_info:
        case SchemeKind::partial_info: {
            auto p = voter_distribution(state, config);
            const int voter = sample_index(p, rng);
            return {WeightVector::basis(n, voter), voter, std::move(p)};
        }
    }
    throw InvalidValue("unknown scheme kind");
}

}  // namespace wvote
