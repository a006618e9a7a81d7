#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "wvote/harness.hpp"

namespace wvote {
namespace {

using testing::R;

const VotingRule kPlurality = DeterministicPositional{Scoring{ScorePreset::plurality}};
const VotingRule kBorda = RandomizedPositional{Scoring{ScorePreset::borda}};

EpisodeSpec iid_spec(SchemeKind kind, VotingRule rule, int n, int m, int T, Feedback feedback = Feedback::full) {
    EpisodeSpec spec;
    spec.scheme = make_scheme_config(kind, n, T);
    spec.rule = std::move(rule);
    spec.feedback = feedback;
    spec.make_source = [n, m](std::uint64_t seed) -> std::unique_ptr<RoundSource> {
        return std::make_unique<IidSource>(n, m, seed);
    };
    return spec;
}

double regret_bound_for_test(int n, int T) { return std::sqrt(2.0 * T * n * std::log(double(n))); }

EpisodeSpec thm3_spec(SchemeKind kind, int n, int T) {
    EpisodeSpec spec;
    spec.scheme = make_scheme_config(kind, n, T);
    spec.rule = kPlurality;
    spec.make_source = [](std::uint64_t) -> std::unique_ptr<RoundSource> {
        return std::make_unique<Thm3Source>(kPlurality, 3);
    };
    return spec;
}

TEST(RunEpisode, ConstantSchemeAndRuleHaveZeroRegret) {
    const auto trace = run_episode(iid_spec(SchemeKind::constant, ConstantUniform{}, 5, 4, 200), 3);
    ASSERT_EQ(trace.records.size(), 200u);
    EXPECT_EQ(regret(trace), 0.0);
    for (const auto& r : trace.records) EXPECT_EQ(r.weights.values(), WeightVector::basis(5, 0).values());
}

TEST(RunEpisode, SingleRoundStartsUniform) {
    const auto trace = run_episode(iid_spec(SchemeKind::deterministic_unilateral, kBorda, 4, 3, 1), 9);
    ASSERT_EQ(trace.records.size(), 1u);
    for (double x : trace.records[0].weights.values()) EXPECT_DOUBLE_EQ(x, 0.25);
    EXPECT_EQ(trace.records[0].t, 1);
}

TEST(RunEpisode, Thm3RoundsAllCostOne) {
    for (const auto kind : {SchemeKind::constant, SchemeKind::deterministic_unilateral}) {
        for (int n : {2, 4, 10}) {
            const auto trace = run_episode(thm3_spec(kind, n, 1000), 1);
            for (const auto& r : trace.records) EXPECT_EQ(r.scheme_expected_loss, 1.0);
            EXPECT_LE(best_voter(trace).cumulative_loss, (n - 1) * 1000.0 / n);
            EXPECT_GE(regret(trace), 1000.0 / n);
        }
    }
}

TEST(RunEpisode, FeedbackCompatibility) {
    EXPECT_THROW(run_episode(iid_spec(SchemeKind::full_info, kBorda, 3, 3, 5, Feedback::partial), 1), ConfigError);
    EXPECT_THROW(
        run_episode(iid_spec(SchemeKind::deterministic_unilateral, RandomizedCopeland{}, 3, 3, 5, Feedback::partial), 1),
        ConfigError);
    EXPECT_NO_THROW(run_episode(iid_spec(SchemeKind::deterministic_unilateral, kBorda, 3, 3, 5, Feedback::partial), 1));
    EXPECT_NO_THROW(run_episode(iid_spec(SchemeKind::partial_info, kBorda, 3, 3, 5, Feedback::partial), 1));
    EXPECT_NO_THROW(run_episode(iid_spec(SchemeKind::partial_info, kBorda, 3, 3, 5, Feedback::full), 1));
}

TEST(RunEpisode, WarnsForDeterministicUnilateralOnNonUnilateralRule) {
    const auto warned = run_episode(iid_spec(SchemeKind::deterministic_unilateral, RandomizedCopeland{}, 3, 3, 2), 1);
    EXPECT_EQ(warned.warnings.size(), 1u);
    const auto quiet = run_episode(iid_spec(SchemeKind::deterministic_unilateral, kBorda, 3, 3, 2), 1);
    EXPECT_TRUE(quiet.warnings.empty());
}

TEST(RunEpisode, ReplayIsDeterministic) {
    for (const auto kind : {SchemeKind::full_info, SchemeKind::partial_info}) {
        const auto spec = iid_spec(kind, kBorda, 6, 4, 300);
        const auto a = run_episode(spec, 42);
        const auto b = run_episode(spec, 42);
        ASSERT_EQ(a.records.size(), b.records.size());
        for (std::size_t t = 0; t < a.records.size(); ++t) {
            EXPECT_EQ(a.records[t].weights.values(), b.records[t].weights.values());
            EXPECT_EQ(a.records[t].winner, b.records[t].winner);
            EXPECT_EQ(a.records[t].scheme_expected_loss, b.records[t].scheme_expected_loss);
        }
        const auto c = run_episode(spec, 43);
        bool differs = false;
        for (std::size_t t = 0; t < a.records.size(); ++t)
            differs = differs || a.records[t].scheme_expected_loss != c.records[t].scheme_expected_loss;
        EXPECT_TRUE(differs);
    }
}

TEST(RunEpisode, RealizedLossTracksExpectedLoss) {
    const auto trace = run_episode(iid_spec(SchemeKind::full_info, kBorda, 5, 3, 10000), 5);
    double realized = 0.0, expected = 0.0, var = 0.0;
    for (const auto& r : trace.records) {
        realized += r.realized_loss;
        expected += r.scheme_expected_loss;
        var += 0.25;
    }
    EXPECT_NEAR(realized, expected, 4 * std::sqrt(var));
}

TEST(RunEpisode, MixedRoundLossBetweenVoterExtremes) {
    const auto trace = run_episode(iid_spec(SchemeKind::deterministic_unilateral, kBorda, 5, 4, 500), 2);
    for (const auto& r : trace.records) {
        const auto [lo, hi] = std::minmax_element(r.per_voter_loss.begin(), r.per_voter_loss.end());
        EXPECT_GE(r.scheme_expected_loss, *lo - kTolerance);
        EXPECT_LE(r.scheme_expected_loss, *hi + kTolerance);
        // Unilateral mixtures: playing p equals drawing a voter from p.
        EXPECT_NEAR(r.scheme_expected_loss, r.voter_draw_expected_loss, kTolerance);
    }
}

TEST(RunEpisode, DeterministicUnilateralPartialFeedbackLearns) {
    // One voter always ranks the zero-loss alternative first; the others are random.
    const int n = 5, T = 4000;
    EpisodeSpec spec;
    spec.scheme = make_scheme_config(SchemeKind::deterministic_unilateral, n, T, std::nullopt, true);
    spec.rule = VotingRule(RandomizedPositional{Scoring{ScorePreset::plurality}});
    spec.feedback = Feedback::partial;
    spec.make_source = [n](std::uint64_t seed) -> std::unique_ptr<RoundSource> {
        struct Planted : RoundSource {
            IidSource inner;
            explicit Planted(int voters, std::uint64_t s) : inner(voters, 3, s) {}
            RoundChallenge next(int t, const WeightVector& w) override {
                auto round = inner.next(t, w);
                round.losses = LossVector({0.0, 1.0, 1.0});
                round.rankings[2] = R("abc");
                return round;
            }
        };
        return std::make_unique<Planted>(n, seed);
    };
    const auto trace = run_episode(spec, 4);
    EXPECT_EQ(spec.scheme.eta, default_eta(SchemeKind::partial_info, n, T));
    EXPECT_GT(trace.records.back().weights[2], 0.9);
    EXPECT_LE(regret(trace), regret_bound_for_test(n, T));
}

TEST(BestVoter, ExamplesAndTies) {
    const std::vector<std::vector<double>> rounds{{1, 0, 0.5}, {1, 0.5, 0}, {0, 1, 0.5}};
    const auto best = best_voter(rounds);
    EXPECT_EQ(best.voter, 2);
    EXPECT_DOUBLE_EQ(best.cumulative_loss, 1.0);

    const std::vector<std::vector<double>> tied{{0.5, 0.5}, {0.5, 0.5}};
    EXPECT_EQ(best_voter(tied).voter, 0);
}

TEST(Regret, RunningTalliesEndAtRegret) {
    const auto trace = run_episode(iid_spec(SchemeKind::full_info, RandomizedCopeland{}, 4, 3, 400), 11);
    const auto tallies = running_tallies(trace);
    ASSERT_EQ(tallies.size(), 400u);
    EXPECT_NEAR(tallies.back().cumulative_regret, regret(trace), kTolerance);
    double scheme = 0.0;
    for (std::size_t t = 0; t < tallies.size(); ++t) {
        scheme += trace.records[t].scheme_expected_loss;
        EXPECT_NEAR(tallies[t].cumulative_scheme_loss, scheme, 1e-9);
        EXPECT_NEAR(tallies[t].cumulative_regret, tallies[t].cumulative_scheme_loss - tallies[t].best_voter_cumulative_loss,
                    1e-9);
    }
}

TEST(MonteCarlo, SingleTrialAndThreadIndependence) {
    const auto spec = iid_spec(SchemeKind::full_info, kBorda, 4, 3, 200);
    const auto one = monte_carlo_regret(spec, 1, 100);
    ASSERT_EQ(one.regrets.size(), 1u);
    EXPECT_EQ(one.standard_error, 0.0);
    EXPECT_EQ(one.mean, regret(run_episode(spec, 100)));

    const auto serial = monte_carlo_regret(spec, 8, 7, 1);
    const auto parallel = monte_carlo_regret(spec, 8, 7, 4);
    EXPECT_EQ(serial.regrets, parallel.regrets);
    EXPECT_EQ(serial.regrets[3], regret(run_episode(spec, 10)));
    const auto [lo, hi] = std::minmax_element(serial.regrets.begin(), serial.regrets.end());
    EXPECT_LE(*lo, serial.mean);
    EXPECT_LE(serial.mean, *hi);
}

TEST(MonteCarlo, ZeroVarianceForDeterministicEpisodes) {
    const auto mc = monte_carlo_regret(thm3_spec(SchemeKind::constant, 4, 100), 5, 1);
    EXPECT_EQ(mc.standard_error, 0.0);
    EXPECT_EQ(mc.mean, 100.0);  // voter 0 decides every round, everyone else loses nothing
}

TEST(OracleRoundLoss, Cases) {
    const std::vector<Ranking> rankings{R("abc"), R("bac"), R("cab")};
    const LossVector losses({1, 0, 0.5});
    EXPECT_DOUBLE_EQ(oracle_expected_round_loss(kPlurality, rankings, losses, std::vector<double>{0, 1, 0}), 0.0);

    const std::vector<double> p{0.2, 0.5, 0.3};
    EXPECT_NEAR(oracle_expected_round_loss(kBorda, rankings, losses, p),
                expected_loss(kBorda, anonymize(rankings, WeightVector(p)), losses), kTolerance);

    // Copeland is not unilateral: on a constructed round the mixed profile is strictly worse.
    const VotingRule copeland = RandomizedCopeland{};
    const WeightVector w(std::vector<double>(11, 1.0));
    const auto round = thm5_round(w, copeland, pick_pair(copeland, 3), 1.0 / 3.0);
    const std::vector<double> uniform(11, 1.0 / 11);
    EXPECT_GT(expected_loss(copeland, anonymize(round.rankings, w), round.losses),
              oracle_expected_round_loss(copeland, round.rankings, round.losses, uniform) + 0.1);
}

TEST(StreamSeed, StreamsDiffer) {
    EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
    EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
    EXPECT_EQ(stream_seed(5, 1), stream_seed(5, 1));
}

}  // namespace
}  // namespace wvote
