#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"
#include "wvote/rules.hpp"

namespace wvote {
namespace {

using testing::P;
using testing::R;

void expect_dist(const AlternativeDistribution& f, const std::vector<double>& expected, double tol = kTolerance) {
    ASSERT_EQ(f.size(), static_cast<int>(expected.size()));
    for (int a = 0; a < f.size(); ++a) EXPECT_NEAR(f[a], expected[a], tol) << "alternative " << a;
}

// Integer weights summing to 16, so every profile mass and pairwise sum is exact.
struct ExactInstance {
    std::vector<Ranking> votes;
    std::vector<long> weights;
    AnonymousProfile profile;
};

ExactInstance exact_instance(int n, int m, Rng& rng) {
    std::vector<long> w(static_cast<std::size_t>(n), 0);
    for (int unit = 0; unit < 16; ++unit) ++w[uniform_index(rng, n)];
    w[0] += 0;  // every unit lands somewhere; zero weights are allowed
    auto votes = testing::random_votes(n, m, rng);
    std::vector<double> wd(w.begin(), w.end());
    return {votes, w, anonymize(votes, WeightVector(wd))};
}

TEST(PositionalScores, Examples) {
    const auto borda = positional_scores(P({{"abc", 1.0}}), ScoreVector({2, 1, 0}));
    EXPECT_EQ(borda, (std::vector<double>{2, 1, 0}));

    const auto oracle = testing::oracle_positional_scores(testing::ballots({"abc", "bac"}), {0.4, 0.6}, {1, 0, 0});
    const auto plurality = positional_scores(P({{"abc", 0.4}, {"bac", 0.6}}), ScoreVector({1, 0, 0}));
    EXPECT_LE(testing::max_abs_diff(plurality, oracle), kTolerance);
    EXPECT_NEAR(plurality[0], 0.4, kTolerance);
    EXPECT_NEAR(plurality[1], 0.6, kTolerance);

    // Unanimous on sigma: scores are s permuted by sigma.
    const auto unanimous = positional_scores(P({{"cab", 1.0}}), ScoreVector({5, 3, 1}));
    EXPECT_EQ(unanimous, (std::vector<double>{3, 1, 5}));

    EXPECT_THROW(positional_scores(P({{"abc", 1.0}}), ScoreVector({1, 0})), ShapeMismatch);
}

TEST(PositionalScores, MatchesBallotOracleAndConservesTotal) {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 1 + uniform_index(rng, 6);
        const int n = 1 + uniform_index(rng, 8);
        auto votes = testing::random_votes(n, m, rng);
        auto w = testing::random_weights(n, rng);
        std::vector<double> s(static_cast<std::size_t>(m));
        double level = 1.0;
        for (double& x : s) x = (level *= 0.2 + 0.8 * uniform01(rng));
        const ScoreVector scores(s);
        const auto got = positional_scores(anonymize(votes, WeightVector(w)), scores);
        EXPECT_LE(testing::max_abs_diff(got, testing::oracle_positional_scores(votes, w, s)), kTolerance);
        EXPECT_NEAR(std::accumulate(got.begin(), got.end(), 0.0), scores.total(), kTolerance);
    }
}

TEST(ScoreVector, ValidatesShapeAndPresets) {
    EXPECT_THROW(ScoreVector({0, 0, 0}), InvalidValue);
    EXPECT_THROW(ScoreVector({1, 2, 0}), InvalidValue);
    EXPECT_THROW(ScoreVector({1, -1}), InvalidValue);
    EXPECT_EQ(ScoreVector::plurality(3).values(), (std::vector<double>{1, 0, 0}));
    EXPECT_EQ(ScoreVector::veto(3).values(), (std::vector<double>{1, 1, 0}));
    EXPECT_EQ(ScoreVector::borda(4).values(), (std::vector<double>{3, 2, 1, 0}));
    EXPECT_EQ(ScoreVector::borda(1).values(), (std::vector<double>{1}));
}

TEST(DeterministicPositional, WinnerAndTieBreak) {
    const ScoreVector plurality({1, 0, 0});
    expect_dist(eval_positional_deterministic(P({{"abc", 0.4}, {"bac", 0.6}}), plurality), {0, 1, 0});
    expect_dist(eval_positional_deterministic(P({{"abc", 0.5}, {"bac", 0.5}}), plurality), {1, 0, 0});
    expect_dist(eval_positional_deterministic(P({{"abc", 1.0}}), ScoreVector({3, 2.5, 0})), {1, 0, 0});
    // Borda on a 3-cycle: every score is 1, lowest id wins regardless of summation order.
    const double third = 1.0 / 3.0;
    expect_dist(eval_positional_deterministic(P({{"abc", third}, {"bca", third}, {"cab", 1 - 2 * third}}),
                                              ScoreVector::borda(3)),
                {1, 0, 0});
}

TEST(DeterministicPositional, ArgmaxInvariantToScaling) {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + uniform_index(rng, 4);
        auto votes = testing::random_votes(5, m, rng);
        const auto profile = anonymize(votes, WeightVector(testing::random_weights(5, rng)));
        std::vector<double> s(static_cast<std::size_t>(m));
        double level = 1.0;
        for (double& x : s) x = (level *= 0.01 + 0.99 * uniform01(rng));
        const double c = 0.1 + 10 * uniform01(rng);
        std::vector<double> scaled = s;
        for (double& x : scaled) x *= c;
        EXPECT_EQ(eval_positional_deterministic(profile, ScoreVector(s)).values(),
                  eval_positional_deterministic(profile, ScoreVector(scaled)).values());
    }
}

TEST(RandomizedPositional, Examples) {
    expect_dist(eval_positional_randomized(P({{"abc", 1.0}}), ScoreVector::borda(3)), {2.0 / 3, 1.0 / 3, 0});
    expect_dist(eval_positional_randomized(P({{"abc", 1.0}}), ScoreVector::veto(3)), {0.5, 0.5, 0});
    expect_dist(eval_positional_randomized(P({{"abc", 0.25}, {"bca", 0.75}}), ScoreVector::plurality(3)),
                {0.25, 0.75, 0});
}

TEST(Pairwise, WeightsAndErrors) {
    const auto p = P({{"abc", 0.25}, {"bca", 0.75}});
    EXPECT_DOUBLE_EQ(pairwise_weight(p, 0, 1), 0.25);
    EXPECT_DOUBLE_EQ(pairwise_weight(P({{"abc", 0.5}, {"bac", 0.5}}), 0, 1), 0.5);
    EXPECT_THROW(pairwise_weight(p, 1, 1), InvalidPair);

    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + uniform_index(rng, 4);
        auto votes = testing::random_votes(6, m, rng);
        auto w = testing::random_weights(6, rng);
        const auto profile = anonymize(votes, WeightVector(w));
        const Alternative a = uniform_index(rng, m);
        const Alternative b = (a + 1 + uniform_index(rng, m - 1)) % m;
        EXPECT_NEAR(pairwise_weight(profile, a, b) + pairwise_weight(profile, b, a), 1.0, kTolerance);
        EXPECT_NEAR(pairwise_weight(profile, a, b), testing::oracle_pairwise(votes, w, a, b), kTolerance);
    }
}

TEST(Copeland, ScoreExamples) {
    EXPECT_EQ(copeland_scores(P({{"abc", 1.0}})), (std::vector<double>{2, 1, 0}));
    EXPECT_EQ(copeland_scores(P({{"abc", 0.5}, {"bca", 0.5}})), (std::vector<double>{1, 1.5, 0.5}));
    EXPECT_EQ(copeland_scores(P({{"ab", 1.0}})), (std::vector<double>{1, 0}));
}

TEST(Copeland, MatchesExactIntegerOracle) {
    Rng rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 2 + uniform_index(rng, 5);
        const auto inst = exact_instance(1 + uniform_index(rng, 6), m, rng);
        const auto got = copeland_scores(inst.profile);
        EXPECT_EQ(got, testing::oracle_copeland_integer(inst.votes, inst.weights));
        EXPECT_EQ(std::accumulate(got.begin(), got.end(), 0.0), m * (m - 1) / 2.0);
    }
}

TEST(Copeland, DeterministicAndRandomized) {
    const double third = 1.0 / 3.0;
    const auto cycle = P({{"abc", third}, {"bca", third}, {"cab", 1 - 2 * third}});
    expect_dist(eval_copeland_deterministic(P({{"abc", 1.0}})), {1, 0, 0});
    expect_dist(eval_copeland_deterministic(P({{"abc", 0.5}, {"bca", 0.5}})), {0, 1, 0});
    expect_dist(eval_copeland_deterministic(cycle), {1, 0, 0});

    expect_dist(eval_copeland_randomized(P({{"abc", 1.0}})), {2.0 / 3, 1.0 / 3, 0});
    expect_dist(eval_copeland_randomized(P({{"abc", 0.5}, {"bca", 0.5}})), {1.0 / 3, 0.5, 1.0 / 6});
    expect_dist(eval_copeland_randomized(cycle), {third, third, third});
}

TEST(Condorcet, WinnerExamples) {
    const double third = 1.0 / 3.0;
    EXPECT_EQ(condorcet_winner(P({{"abc", 1.0}})), 0);
    EXPECT_EQ(condorcet_winner(P({{"abc", third}, {"bca", third}, {"cab", 1 - 2 * third}})), std::nullopt);
    EXPECT_EQ(condorcet_winner(P({{"abc", 0.5}, {"bac", 0.5}})), std::nullopt);
}

TEST(Condorcet, RandomizedCopelandGapOnRandomProfiles) {
    Rng rng(4242);
    int seen = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int m = 3 + uniform_index(rng, 3);
        const auto inst = exact_instance(1 + uniform_index(rng, 6), m, rng);
        const auto winner = condorcet_winner(inst.profile);
        if (!winner) continue;
        ++seen;
        const auto f = eval_copeland_randomized(inst.profile);
        for (Alternative x = 0; x < m; ++x)
            if (x != *winner) EXPECT_GE(f[*winner], f[x] + 2.0 / (m * (m - 1.0)) - kTolerance);
    }
    EXPECT_GT(seen, 100);
}

TEST(Unilateral, Examples) {
    expect_dist(eval_unilateral(position_selector(1).selector, P({{"abc", 0.25}, {"bca", 0.75}})), {0.25, 0.75, 0});
    expect_dist(eval_unilateral(position_selector(2).selector, P({{"abc", 1.0}})), {0, 1, 0});
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto profile = anonymize(testing::random_votes(4, 3, rng), WeightVector(testing::random_weights(4, rng)));
        expect_dist(eval_unilateral(constant_selector(2).selector, profile), {0, 0, 1});
    }
    EXPECT_THROW(eval_unilateral(position_selector(4).selector, P({{"abc", 1.0}})), ShapeMismatch);
}

TEST(Duple, Examples) {
    expect_dist(eval_duple(0, 1, P({{"abc", 1.0}})), {1, 0, 0});
    expect_dist(eval_duple(0, 1, P({{"abc", 0.5}, {"bac", 0.5}})), {0.5, 0.5, 0});
    expect_dist(eval_duple(0, 1, P({{"abc", 0.25}, {"bca", 0.75}})), {0, 1, 0});
    EXPECT_THROW(eval_duple(2, 2, P({{"abc", 1.0}})), InvalidPair);
}

TEST(Mixture, ExamplesAndErrors) {
    expect_dist(eval_mixture(duple_decomposition(3).components, P({{"abc", 1.0}})), {2.0 / 3, 1.0 / 3, 0});

    const auto profile = P({{"abc", 0.3}, {"cba", 0.7}});
    const VotingRule single = make_mixture({{RandomizedCopeland{}, 1.0}});
    EXPECT_EQ(single.evaluate(profile).values(), eval_copeland_randomized(profile).values());

    EXPECT_THROW(make_mixture({{RandomizedCopeland{}, 0.5}, {ConstantUniform{}, 0.4}}), BadMixture);
    EXPECT_THROW(make_mixture({{RandomizedCopeland{}, 1.5}, {ConstantUniform{}, -0.5}}), BadMixture);
    EXPECT_THROW(make_mixture({}), BadMixture);
}

TEST(Decomposition, DuplesAndUnilateralsOnRandomProfiles) {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + uniform_index(rng, 5);
        const int n = 1 + uniform_index(rng, 8);
        const auto profile = anonymize(testing::random_votes(n, m, rng), WeightVector(testing::random_weights(n, rng)));
        EXPECT_LE(testing::max_abs_diff(eval_copeland_randomized(profile).values(),
                                        VotingRule(duple_decomposition(m)).evaluate(profile).values()),
                  kTolerance);
        for (const auto& s : {ScoreVector::plurality(m), ScoreVector::veto(m), ScoreVector::borda(m)}) {
            EXPECT_LE(testing::max_abs_diff(eval_positional_randomized(profile, s).values(),
                                            VotingRule(unilateral_decomposition(s)).evaluate(profile).values()),
                      kTolerance);
        }
    }
}

TEST(Neutrality, RandomizedRulesCommuteWithRelabeling) {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + uniform_index(rng, 4);
        const int n = 1 + uniform_index(rng, 6);
        const auto inst = exact_instance(n, m, rng);
        const Ranking rho = random_ranking(m, rng);  // alternative a relabels to rho.at(a)
        std::vector<Ranking> relabeled;
        for (const auto& v : inst.votes) {
            std::vector<Alternative> order;
            for (Alternative a : v.order()) order.push_back(rho.at(a));
            relabeled.push_back(Ranking(order));
        }
        std::vector<double> wd(inst.weights.begin(), inst.weights.end());
        const auto moved = anonymize(relabeled, WeightVector(wd));

        const auto cop = eval_copeland_randomized(inst.profile);
        const auto cop_moved = eval_copeland_randomized(moved);
        const auto bor = eval_positional_randomized(inst.profile, ScoreVector::borda(m));
        const auto bor_moved = eval_positional_randomized(moved, ScoreVector::borda(m));
        for (Alternative a = 0; a < m; ++a) {
            EXPECT_EQ(cop[a], cop_moved[rho.at(a)]);
            EXPECT_EQ(bor[a], bor_moved[rho.at(a)]);
        }
    }
}

TEST(Rules, EveryOutputIsADistribution) {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + uniform_index(rng, 4);
        const auto profile = anonymize(testing::random_votes(5, m, rng), WeightVector(testing::random_weights(5, rng)));
        for (const VotingRule& rule :
             {VotingRule(DeterministicPositional{Scoring{ScorePreset::plurality}}),
              VotingRule(RandomizedPositional{Scoring{ScorePreset::veto}}), VotingRule(DeterministicCopeland{}),
              VotingRule(RandomizedCopeland{}), VotingRule(ConstantUniform{}), VotingRule(position_selector(2)),
              VotingRule(Duple{0, 1}), VotingRule(duple_decomposition(m))}) {
            const auto f = rule.evaluate(profile);
            double total = 0.0;
            for (double x : f.values()) {
                EXPECT_GE(x, 0.0);
                total += x;
            }
            EXPECT_NEAR(total, 1.0, kTolerance) << rule.name();
        }
    }
}

TEST(UnanimityWitness, Examples) {
    const VotingRule plurality = DeterministicPositional{Scoring{ScorePreset::plurality}};
    const auto w = unanimity_witness(plurality, 3);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->first, R("abc"));
    EXPECT_EQ(w->second, R("bac"));

    EXPECT_EQ(unanimity_witness(ConstantUniform{}, 4), std::nullopt);
    EXPECT_EQ(unanimity_witness(constant_selector(1), 3), std::nullopt);

    const auto borda = unanimity_witness(DeterministicPositional{Scoring{ScorePreset::borda}}, 2);
    ASSERT_TRUE(borda.has_value());
    EXPECT_EQ(borda->first, R("ab"));
    EXPECT_EQ(borda->second, R("ba"));

    EXPECT_THROW(unanimity_witness(plurality, 9), EnumerationRefused);
}

TEST(VotingRule, Classification) {
    EXPECT_TRUE(VotingRule(DeterministicCopeland{}).is_deterministic());
    EXPECT_FALSE(VotingRule(RandomizedCopeland{}).is_deterministic());
    EXPECT_TRUE(VotingRule(RandomizedPositional{Scoring{ScorePreset::borda}}).is_distribution_over_unilaterals());
    EXPECT_TRUE(VotingRule(unilateral_decomposition(ScoreVector::borda(3))).is_distribution_over_unilaterals());
    EXPECT_FALSE(VotingRule(RandomizedCopeland{}).is_distribution_over_unilaterals());
    EXPECT_FALSE(VotingRule(duple_decomposition(3)).is_distribution_over_unilaterals());
    EXPECT_NEAR(*VotingRule(RandomizedCopeland{}).condorcet_gap(3), 1.0 / 3.0, kTolerance);
    EXPECT_EQ(*VotingRule(DeterministicCopeland{}).condorcet_gap(5), 1.0);
    EXPECT_EQ(VotingRule(ConstantUniform{}).condorcet_gap(3), std::nullopt);
}

TEST(Scoring, FixedVectorMustMatchRoundSize) {
    const VotingRule rule = RandomizedPositional{Scoring{ScoreVector({2, 1, 0})}};
    EXPECT_THROW(rule.evaluate(P({{"abcd", 1.0}})), ShapeMismatch);
    const VotingRule preset = RandomizedPositional{Scoring{ScorePreset::borda}};
    expect_dist(preset.evaluate(P({{"abcd", 1.0}})), {0.5, 1.0 / 3, 1.0 / 6, 0});
}

}  // namespace
}  // namespace wvote
