#include "wvote/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wvote/experiment.hpp"
#include "wvote/harness.hpp"

namespace wvote {

namespace {

struct Instance {
    std::vector<Ranking> rankings;
    WeightVector weights;
};

Instance random_instance(int n, int m, Rng& rng) {
    Instance inst;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        inst.rankings.push_back(random_ranking(m, rng));
        w[static_cast<std::size_t>(i)] = 1.0 - uniform01(rng);  // (0, 1]
    }
    inst.weights = WeightVector(std::move(w));
    return inst;
}

std::vector<double> random_simplex(int n, Rng& rng) {
    std::vector<double> p(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& x : p) total += (x = -std::log(1.0 - uniform01(rng)));
    for (double& x : p) x /= total;
    return p;
}

double max_deviation(const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
    return worst;
}

CheckResult at_most(std::string name, double observed, double limit, const std::string& what) {
    return {std::move(name), observed <= limit,
            what + " observed " + format_real(observed) + ", expected <= " + format_real(limit)};
}

CheckResult at_least(std::string name, double observed, double limit, const std::string& what) {
    return {std::move(name), observed >= limit,
            what + " observed " + format_real(observed) + ", expected >= " + format_real(limit)};
}

struct MeanEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

MeanEstimate estimate(const std::vector<double>& samples) {
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(samples.size()))};
}

}  // namespace

std::vector<CheckResult> verify_identities(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    Rng rng(stream_seed(options.seed, 100));

    // Weighting by p equals drawing one voter from p, for positional rules.
    for (ScorePreset preset : {ScorePreset::plurality, ScorePreset::veto, ScorePreset::borda}) {
        const VotingRule rule = RandomizedPositional{Scoring{preset}};
        double worst = 0.0;
        for (int k = 0; k < options.profiles; ++k) {
            const Instance inst = random_instance(6, 4, rng);
            const auto p = random_simplex(6, rng);
            std::vector<double> mixed(4, 0.0);
            for (int i = 0; i < 6; ++i) {
                const auto f = rule.evaluate(AnonymousProfile::unanimous(inst.rankings[static_cast<std::size_t>(i)]));
                for (int a = 0; a < 4; ++a) mixed[static_cast<std::size_t>(a)] += p[static_cast<std::size_t>(i)] * f[a];
            }
            const auto weighted = rule.evaluate(anonymize(inst.rankings, WeightVector(p)));
            worst = std::max(worst, max_deviation(mixed, weighted.values()));
        }
        out.push_back(at_most("weighting_equals_voter_draw[" + rule.name() + "]", worst, kTolerance,
                              "max component deviation"));
    }

    double duple_worst = 0.0;
    double unilateral_worst = 0.0;
    double normalization_worst = 0.0;
    double positional_sum_worst = 0.0;
    double copeland_sum_worst = 0.0;
    for (int k = 0; k < options.profiles; ++k) {
        const int m = 2 + k % 5;
        const int n = 1 + uniform_index(rng, 9);
        const Instance inst = random_instance(n, m, rng);
        const auto profile = anonymize(inst.rankings, inst.weights);

        duple_worst = std::max(duple_worst, max_deviation(eval_copeland_randomized(profile).values(),
                                                          VotingRule(duple_decomposition(m)).evaluate(profile).values()));

        std::vector<double> s(static_cast<std::size_t>(m));
        double level = 1.0 + uniform01(rng);
        for (double& x : s) x = (level *= uniform01(rng));
        const ScoreVector scores(s);
        unilateral_worst = std::max(unilateral_worst,
                                    max_deviation(eval_positional_randomized(profile, scores).values(),
                                                  VotingRule(unilateral_decomposition(scores)).evaluate(profile).values()));

        const auto pos = positional_scores(profile, scores);
        double pos_sum = 0.0;
        for (double x : pos) pos_sum += x;
        positional_sum_worst = std::max(positional_sum_worst, std::abs(pos_sum - scores.total()));

        const auto cop = copeland_scores(profile);
        double cop_sum = 0.0;
        for (double x : cop) cop_sum += x;
        copeland_sum_worst = std::max(copeland_sum_worst, std::abs(cop_sum - m * (m - 1) / 2.0));

        for (const VotingRule& rule : {VotingRule(RandomizedPositional{Scoring{scores}}),
                                       VotingRule(DeterministicPositional{Scoring{scores}}),
                                       VotingRule(RandomizedCopeland{}), VotingRule(DeterministicCopeland{})}) {
            const auto f = rule.evaluate(profile);
            double total = 0.0;
            for (double x : f.values()) {
                total += x;
                if (x < 0.0) normalization_worst = std::max(normalization_worst, -x);
            }
            normalization_worst = std::max(normalization_worst, std::abs(total - 1.0));
        }
    }
    out.push_back(at_most("duple_decomposition", duple_worst, kTolerance, "max deviation from randomized Copeland"));
    out.push_back(at_most("unilateral_decomposition", unilateral_worst, kTolerance,
                          "max deviation from randomized positional"));
    out.push_back(at_most("distribution_normalization", normalization_worst, kTolerance, "max |sum - 1|"));
    out.push_back(at_most("positional_score_conservation", positional_sum_worst, kTolerance, "max |sum - ||s||_1|"));
    out.push_back(at_most("copeland_score_conservation", copeland_sum_worst, kTolerance, "max |sum - m(m-1)/2|"));

    // Condorcet gap of randomized Copeland: smallest (gap - 2/(m(m-1))) over profiles with a winner.
    double worst_margin = std::numeric_limits<double>::infinity();
    int with_winner = 0;
    for (int k = 0; k < options.profiles * 10; ++k) {
        const int m = 3 + k % 3;
        const Instance inst = random_instance(1 + uniform_index(rng, 7), m, rng);
        const auto profile = anonymize(inst.rankings, inst.weights);
        const auto winner = condorcet_winner(profile);
        if (!winner) continue;
        ++with_winner;
        const auto f = eval_copeland_randomized(profile);
        for (Alternative x = 0; x < m; ++x)
            if (x != *winner) worst_margin = std::min(worst_margin, f[*winner] - f[x] - 2.0 / (m * (m - 1.0)));
    }
    auto gap = at_least("copeland_condorcet_gap", worst_margin, -kTolerance,
                        "min gap excess over " + std::to_string(with_winner) + " profiles:");
    gap.passed = gap.passed && with_winner > 0;
    out.push_back(gap);
    return out;
}

std::vector<CheckResult> verify_estimators(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    Rng rng(stream_seed(options.seed, 200));
    const int n = 5;
    const int m = 3;
    const VotingRule rule = RandomizedPositional{Scoring{ScorePreset::borda}};

    // One round at a fixed (p, sigma, l).
    const auto p = random_simplex(n, rng);
    const RoundChallenge round = iid_random_round(n, m, rng);
    const double expected = oracle_expected_round_loss(rule, round.rankings, round.losses, p);
    std::vector<AlternativeDistribution> outcomes;
    for (const auto& r : round.rankings) outcomes.push_back(rule.evaluate(AnonymousProfile::unanimous(r)));

    const int draws = 100000;
    std::vector<double> first(draws), second(draws);
    SchemeState zero{std::vector<double>(n, 0.0), 0, 1};
    for (int d = 0; d < draws; ++d) {
        const int voter = sample_index(p, rng);
        const Alternative a = sample(outcomes[static_cast<std::size_t>(voter)], rng);
        const auto next = partial_info_update(zero, voter, round.losses[a], p);
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double est = next.cumulative[static_cast<std::size_t>(i)];
            s1 += p[static_cast<std::size_t>(i)] * est;
            s2 += p[static_cast<std::size_t>(i)] * est * est;
        }
        first[static_cast<std::size_t>(d)] = s1;
        second[static_cast<std::size_t>(d)] = s2;
    }
    const auto m1 = estimate(first);
    const auto m2 = estimate(second);
    out.push_back(at_most("estimator_unbiased", std::abs(m1.mean - expected), 3.0 * m1.standard_error,
                          "|mean - " + format_real(expected) + "|"));
    out.push_back(at_most("estimator_second_moment", m2.mean, n + 3.0 * m2.standard_error, "mean sum p_i est_i^2"));

    // Cumulative estimate of one voter across an adaptive run.
    const int horizon = 10;
    std::vector<RoundChallenge> rounds;
    for (int t = 0; t < horizon; ++t) rounds.push_back(iid_random_round(n, m, rng));
    const int target = 0;
    double truth = 0.0;
    for (const auto& r : rounds) truth += induced_voter_losses(rule, r.rankings, r.losses)[target];
    const SchemeConfig cfg = make_scheme_config(SchemeKind::partial_info, n, horizon);
    std::vector<double> finals(static_cast<std::size_t>(options.profiles) * 100);
    for (auto& f : finals) {
        SchemeState state = SchemeState::initial(cfg);
        for (const auto& r : rounds) {
            const auto action = act(state, cfg, rng);
            const auto outcome = rule.evaluate(anonymize(r.rankings, action.weights));
            state = partial_info_update(state, *action.voter, r.losses[sample(outcome, rng)], action.distribution);
        }
        f = state.cumulative[target];
    }
    const auto cum = estimate(finals);
    out.push_back(at_most("estimator_cumulative_unbiased", std::abs(cum.mean - truth), 3.0 * cum.standard_error,
                          "|mean - " + format_real(truth) + "|"));

    // Playing p itself: the winner-conditioned estimate, averaged over the winner in closed form.
    {
        const auto f = rule.evaluate(anonymize(round.rankings, WeightVector(p)));
        const auto truth_round = induced_voter_losses(rule, round.rankings, round.losses);
        std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
        for (Alternative a = 0; a < m; ++a) {
            if (f[a] == 0.0) continue;
            const auto next = unilateral_partial_update(zero, induced_winner_probabilities(rule, round.rankings, a),
                                                        round.losses[a], p);
            for (int i = 0; i < n; ++i) mean[static_cast<std::size_t>(i)] += f[a] * next.cumulative[static_cast<std::size_t>(i)];
        }
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(mean[static_cast<std::size_t>(i)] - truth_round[static_cast<std::size_t>(i)]));
        out.push_back(at_most("unilateral_estimator_unbiased", worst, kTolerance, "max |E[est_i] - L_i|"));
    }

    // Zero selection probability must be refused, not divided by.
    CheckResult guard{"estimator_zero_probability_refused", false, "no error raised"};
    try {
        std::vector<double> forced(n, 0.25);
        forced[2] = 0.0;
        partial_info_update(zero, 2, 0.5, forced);
    } catch (const EstimatorUndefined& e) {
        guard = {guard.name, true, std::string("raised: ") + e.what()};
    }
    out.push_back(guard);
    return out;
}

std::vector<CheckResult> verify_adversaries(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    Rng rng(stream_seed(options.seed, 300));

    {
        const int n = 11, m = 3, horizon = 200;
        const double delta = 1.0 / 3.0;
        EpisodeSpec spec;
        spec.scheme = make_scheme_config(SchemeKind::deterministic_unilateral, n, horizon);
        spec.rule = RandomizedCopeland{};
        auto proto = std::make_shared<Thm5Source>(spec.rule, n, m, delta);
        spec.make_source = [proto](std::uint64_t) { return std::make_unique<Thm5Source>(*proto); };
        const Trace trace = run_episode(spec, options.seed);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& r : trace.records) {
            double avg = 0.0;
            for (double x : r.per_voter_loss) avg += x;
            avg /= n;
            worst = std::min(worst, r.scheme_expected_loss - avg);
        }
        out.push_back(at_least("condorcet_adversary_round_gap", worst, delta / 6.0 - kTolerance,
                               "min per-round scheme minus average voter loss"));
        out.push_back(at_least("condorcet_adversary_regret", regret(trace), horizon * delta / 6.0, "regret"));
    }

    for (SchemeKind kind : {SchemeKind::constant, SchemeKind::deterministic_unilateral}) {
        const int n = 4, m = 3, horizon = 200;
        EpisodeSpec spec;
        spec.scheme = make_scheme_config(kind, n, horizon);
        spec.rule = DeterministicPositional{Scoring{ScorePreset::plurality}};
        auto proto = std::make_shared<Thm3Source>(spec.rule, m);
        spec.make_source = [proto](std::uint64_t) { return std::make_unique<Thm3Source>(*proto); };
        const Trace trace = run_episode(spec, options.seed);
        double worst_round = 1.0;
        for (const auto& r : trace.records) worst_round = std::min(worst_round, r.scheme_expected_loss);
        out.push_back(at_least("unanimity_adversary_round_loss[" + to_string(kind) + "]", worst_round, 1.0,
                               "min per-round scheme loss"));
        out.push_back(at_least("unanimity_adversary_regret[" + to_string(kind) + "]", regret(trace),
                               static_cast<double>(horizon) / n, "regret"));
    }

    {
        CheckResult prefix{"partition_prefix_bound", true, ""};
        int checked = 0;
        for (int k = 0; k < options.profiles * 10 && prefix.passed; ++k) {
            const int n = 1 + uniform_index(rng, 12);
            std::vector<double> w(static_cast<std::size_t>(n));
            for (double& x : w) {
                const int style = uniform_index(rng, 4);
                x = style == 0 ? 0.0 : style == 1 ? static_cast<double>(uniform_index(rng, 3) + 1) : uniform01(rng);
            }
            if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[0] = 1.0;
            const WeightVector weights(w);
            try {
                const auto part = thm5_partition(weights);
                const double total = weights.l1();
                double lightest = std::numeric_limits<double>::infinity();
                for (int i : part.heavy) lightest = std::min(lightest, weights[i]);
                const bool majority = part.heavy_weight > total / 2.0;
                const bool minimal = part.heavy_weight - lightest <= total / 2.0;
                const bool bound = part.heavy_weight >= part.heavy.size() * total / n - kTolerance * total;
                if (!(majority && minimal && bound)) {
                    prefix = {prefix.name, false,
                              "heavy weight " + format_real(part.heavy_weight) + " of " + format_real(total) +
                                  " with " + std::to_string(part.heavy.size()) + " of " + std::to_string(n) + " voters"};
                }
            } catch (const InvariantViolation& e) {
                prefix = {prefix.name, false, e.what()};
            }
            ++checked;
        }
        if (prefix.passed) prefix.detail = std::to_string(checked) + " weight vectors satisfy the prefix bound";
        out.push_back(prefix);
    }

    {
        CheckResult guard{"condorcet_adversary_hypothesis_guard", false, "n=10, delta=1/3 accepted"};
        try {
            Thm5Source(RandomizedCopeland{}, 10, 3, 1.0 / 3.0);
        } catch (const HypothesisViolated& e) {
            guard = {guard.name, true, std::string("raised: ") + e.what()};
        }
        out.push_back(guard);
    }
    return out;
}

int run_verify(const std::string& suite, const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    if (options.profiles < 1) {
        err << "error: --profiles must be at least 1\n";
        return 1;
    }
    std::vector<CheckResult> results;
    auto append = [&](std::vector<CheckResult> more) {
        results.insert(results.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    try {
        if (suite == "identities" || suite == "all") append(verify_identities(options));
        if (suite == "estimators" || suite == "all") append(verify_estimators(options));
        if (suite == "adversaries" || suite == "all") append(verify_adversaries(options));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (results.empty()) {
        err << "error: unknown suite '" << suite << "' (expected identities, estimators, adversaries or all)\n";
        return 1;
    }
    int failed = 0;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        if (!r.passed) ++failed;
    }
    out << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed ? 2 : 0;
}

}  // namespace wvote
