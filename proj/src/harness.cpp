#include "wvote/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace wvote {

std::string to_string(Feedback feedback) { return feedback == Feedback::full ? "full" : "partial"; }

Feedback feedback_from_string(const std::string& name) {
    if (name == "full") return Feedback::full;
    if (name == "partial") return Feedback::partial;
    throw ConfigError("unknown feedback mode '" + name + "'");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finaliser over (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

void check_feedback(const EpisodeSpec& spec) {
    if (spec.feedback != Feedback::partial) return;
    switch (spec.scheme.kind) {
        case SchemeKind::partial_info:
        case SchemeKind::constant: return;
        case SchemeKind::deterministic_unilateral:
            if (spec.rule.is_distribution_over_unilaterals()) return;
            throw ConfigError("deterministic_unilateral under partial feedback needs a distribution over unilaterals, got " +
                              spec.rule.name());
        case SchemeKind::full_info:
            throw ConfigError("scheme " + to_string(spec.scheme.kind) + " has no partial-information update");
    }
}

}  // namespace

Trace run_episode(const EpisodeSpec& spec, std::uint64_t seed) {
    check_feedback(spec);
    if (!spec.make_source) throw ConfigError("episode has no round source");

    Trace trace;
    trace.seed = seed;
    trace.config_echo = spec.description;
    if (spec.scheme.kind == SchemeKind::deterministic_unilateral && !spec.rule.is_distribution_over_unilaterals())
        trace.warnings.push_back("rule " + spec.rule.name() +
                                 " is not a known distribution over unilaterals; the deterministic scheme "
                                 "carries no regret guarantee for it");

    Rng rng(stream_seed(seed, 0));
    auto source = spec.make_source(stream_seed(seed, 1));
    const int n = spec.scheme.voters;
    SchemeState state = SchemeState::initial(spec.scheme);
    trace.records.reserve(static_cast<std::size_t>(spec.scheme.horizon));

    for (int t = 0; t < spec.scheme.horizon; ++t) {
        SchemeAction action = act(state, spec.scheme, rng);
        RoundChallenge challenge = source->next(t, action.weights);
        validate_challenge(challenge);
        if (challenge.voters() != n)
            throw ShapeMismatch("round " + std::to_string(t + 1) + " has " + std::to_string(challenge.voters()) +
                                " voters, scheme expects " + std::to_string(n));

        const auto outcome = spec.rule.evaluate(anonymize(challenge.rankings, action.weights));
        RoundRecord record;
        record.t = t + 1;
        record.scheme_expected_loss = expected_loss(outcome, challenge.losses);
        record.per_voter_loss = induced_voter_losses(spec.rule, challenge.rankings, challenge.losses);
        double draw_loss = 0.0;
        for (int i = 0; i < n; ++i)
            draw_loss += action.distribution[static_cast<std::size_t>(i)] * record.per_voter_loss[static_cast<std::size_t>(i)];
        record.voter_draw_expected_loss = draw_loss;
        record.winner = sample(outcome, rng);
        record.realized_loss = challenge.losses[record.winner];

        switch (spec.scheme.kind) {
            case SchemeKind::constant: state = advance(state); break;
            case SchemeKind::full_info: state = apply_voter_losses(state, record.per_voter_loss); break;
            case SchemeKind::deterministic_unilateral:
                if (spec.feedback == Feedback::partial)
                    // Rankings, the winner and its loss only.
                    state = unilateral_partial_update(
                        state, induced_winner_probabilities(spec.rule, challenge.rankings, record.winner),
                        record.realized_loss, action.distribution);
                else
                    state = apply_voter_losses(state, record.per_voter_loss);
                break;
            case SchemeKind::partial_info:
                // Only the chosen voter, its probability and the winner's loss reach the scheme.
                state = partial_info_update(state, *action.voter, record.realized_loss, action.distribution);
                break;
        }

        record.voter = action.voter;
        record.weights = std::move(action.weights);
        record.challenge = std::move(challenge);
        trace.records.push_back(std::move(record));
    }
    return trace;
}

BestVoter best_voter(std::span<const std::vector<double>> per_round_voter_losses) {
    if (per_round_voter_losses.empty()) throw InvalidValue("best voter of an empty sequence");
    std::vector<double> total(per_round_voter_losses.front().size(), 0.0);
    for (const auto& round : per_round_voter_losses) {
        if (round.size() != total.size()) throw ShapeMismatch("voter count changed between rounds");
        for (std::size_t i = 0; i < round.size(); ++i) total[i] += round[i];
    }
    const auto it = std::min_element(total.begin(), total.end());
    return {static_cast<int>(it - total.begin()), *it};
}

BestVoter best_voter(const Trace& trace) {
    std::vector<std::vector<double>> losses;
    losses.reserve(trace.records.size());
    for (const auto& r : trace.records) losses.push_back(r.per_voter_loss);
    return best_voter(losses);
}

double regret(const Trace& trace) {
    double scheme = 0.0;
    for (const auto& r : trace.records) scheme += r.scheme_expected_loss;
    return scheme - best_voter(trace).cumulative_loss;
}

std::vector<RunningTally> running_tallies(const Trace& trace) {
    std::vector<RunningTally> out;
    out.reserve(trace.records.size());
    std::vector<double> totals;
    double scheme = 0.0;
    for (const auto& r : trace.records) {
        if (totals.empty()) totals.assign(r.per_voter_loss.size(), 0.0);
        for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += r.per_voter_loss[i];
        scheme += r.scheme_expected_loss;
        const double best = *std::min_element(totals.begin(), totals.end());
        out.push_back({scheme, best, scheme - best});
    }
    return out;
}

MonteCarloResult monte_carlo_regret(const EpisodeSpec& spec, int trials, std::uint64_t base_seed, unsigned threads) {
    if (trials < 1) throw InvalidValue("need at least one trial");
    MonteCarloResult result;
    result.regrets.assign(static_cast<std::size_t>(trials), 0.0);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned slot) {
        try {
            for (int k = next++; k < trials; k = next++)
                result.regrets[static_cast<std::size_t>(k)] = regret(run_episode(spec, base_seed + static_cast<std::uint64_t>(k)));
        } catch (...) {
            errors[slot] = std::current_exception();
            next = trials;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned s = 1; s < threads; ++s) pool.emplace_back(worker, s);
    worker(0);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    double sum = 0.0;
    for (double r : result.regrets) sum += r;
    result.mean = sum / trials;
    if (trials > 1) {
        double ss = 0.0;
        for (double r : result.regrets) ss += (r - result.mean) * (r - result.mean);
        result.standard_error = std::sqrt(ss / (trials - 1)) / std::sqrt(static_cast<double>(trials));
    }
    return result;
}

double oracle_expected_round_loss(const VotingRule& rule, std::span<const Ranking> rankings, const LossVector& losses,
                                  std::span<const double> p) {
    if (p.size() != rankings.size()) throw ShapeMismatch("one probability per voter is required");
    const auto per_voter = induced_voter_losses(rule, rankings, losses);
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * per_voter[i];
    return total;
}

}  // namespace wvote
