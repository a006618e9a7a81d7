#include "wvote/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wvote {

void validate_challenge(const RoundChallenge& challenge) {
    const int m = challenge.alternatives();
    if (m < 1) throw ShapeMismatch("round has no alternatives");
    for (const auto& r : challenge.rankings)
        if (r.size() != m)
            throw ShapeMismatch("ranking over " + std::to_string(r.size()) + " alternatives in a round with m=" +
                                std::to_string(m));
}

RoundChallenge thm3_round(const WeightVector& w, const VotingRule& rule, const std::pair<Ranking, Ranking>& witness) {
    const auto& [tau, tau_prime] = witness;
    const int n = w.size();
    const int m = tau.size();
    if (n < 2) throw InvalidValue("the construction needs at least two voters");
    if (tau_prime.size() != m) throw ShapeMismatch("witness rankings disagree on m");

    const auto first_outcome = rule.evaluate(AnonymousProfile::unanimous(tau));
    const auto other_outcome = rule.evaluate(AnonymousProfile::unanimous(tau_prime));
    bool differs = false;
    for (int a = 0; a < m; ++a) differs = differs || std::abs(first_outcome[a] - other_outcome[a]) > kTolerance;
    if (!differs) throw NoWitness("witness rankings give the same unanimous outcome");

    std::vector<Ranking> rankings(static_cast<std::size_t>(n), tau_prime);
    rankings[0] = tau;
    const Alternative winner = rule.evaluate(anonymize(rankings, w)).point_mass_alternative();
    if (winner < 0) throw InvalidValue("rule " + rule.name() + " did not return a single winner");

    std::vector<double> losses(static_cast<std::size_t>(m), 0.0);
    losses[static_cast<std::size_t>(winner)] = 1.0;
    RoundChallenge round{std::move(rankings), LossVector(std::move(losses))};

    // At least one voter's unanimous outcome avoids the winner.
    double voter_total = 0.0;
    for (const auto& r : round.rankings) voter_total += expected_loss(rule, AnonymousProfile::unanimous(r), round.losses);
    if (voter_total > n - 1 + kTolerance)
        throw InvariantViolation("combined voter loss exceeds n-1 in a lower-bound round");
    return round;
}

PartitionResult thm5_partition(const WeightVector& w) {
    const int n = w.size();
    const double total = w.l1();
    if (n < 1 || !(total > 0.0)) throw DegenerateWeights("partition needs positive total weight");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return w[i] > w[j]; });

    PartitionResult result;
    std::size_t k = 0;
    while (k < order.size() && !(result.heavy_weight > total / 2.0)) {
        result.heavy.push_back(order[k]);
        result.heavy_weight += w[order[k]];
        ++k;
    }
    result.light.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    std::sort(result.heavy.begin(), result.heavy.end());
    std::sort(result.light.begin(), result.light.end());

    const double size = static_cast<double>(result.heavy.size());
    if (result.heavy_weight < size * total / n * (1.0 - kTolerance))
        throw InvariantViolation("heavy prefix holds less than its share of the weight");
    return result;
}

Ranking top_two_ranking(Alternative x, Alternative y, int m) {
    if (x == y) throw InvalidPair("top-two ranking needs distinct alternatives");
    std::vector<Alternative> order{x, y};
    for (Alternative c = 0; c < m; ++c)
        if (c != x && c != y) order.push_back(c);
    return make_ranking(order, m);
}

PairChoice pick_pair(const VotingRule& rule, int m) {
    if (m < 2) throw InvalidValue("need at least two alternatives");
    const Alternative x = 0;
    const Alternative y = 1;
    const Ranking xy = top_two_ranking(x, y, m);
    const Ranking yx = top_two_ranking(y, x, m);
    const auto q_xy = rule.evaluate(AnonymousProfile::unanimous(xy));
    const auto q_yx = rule.evaluate(AnonymousProfile::unanimous(yx));
    const double gap_when_y_leads = q_yx[y] - q_yx[x];
    const double gap_when_x_leads = q_xy[x] - q_xy[y];
    // If the orientation (a,b)=(x,y) fails, the reversed one satisfies the
    // inequality strictly, so the first pair always yields a choice.
    if (gap_when_y_leads >= gap_when_x_leads) return PairChoice{x, y, xy, yx};
    return PairChoice{y, x, yx, xy};
}

double thm5_min_voters(double delta) { return 2.0 * (3.0 / (2.0 * delta) + 1.0); }

RoundChallenge thm5_round(const WeightVector& w, const VotingRule& rule, const PairChoice& pair, double delta) {
    const int n = w.size();
    const int m = pair.a_over_b.size();
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidValue("gap must lie in (0, 1]");
    if (n < thm5_min_voters(delta))
        throw HypothesisViolated("n=" + std::to_string(n) + " is below 2(3/(2 delta)+1)=" +
                                 std::to_string(thm5_min_voters(delta)) + " for delta=" + std::to_string(delta));

    const auto q_ab = rule.evaluate(AnonymousProfile::unanimous(pair.a_over_b));
    const auto q_ba = rule.evaluate(AnonymousProfile::unanimous(pair.b_over_a));
    if (q_ba[pair.b] - q_ba[pair.a] < q_ab[pair.a] - q_ab[pair.b] - kTolerance)
        throw InvalidValue("pair (" + std::to_string(pair.a) + "," + std::to_string(pair.b) +
                           ") is oriented against the rule's top-two gaps");

    const PartitionResult part = thm5_partition(w);
    const double total = w.l1();
    const double heavy_share = part.heavy_weight / total;
    const double heavy_count = static_cast<double>(part.heavy.size());
    if (heavy_share >= 0.5 + delta / 3.0) {
        if (heavy_count > 3.0 / (2.0 * delta) + 1.0 + kTolerance)
            throw InvariantViolation("overshooting heavy set is larger than 3/(2 delta)+1");
    } else if (!(heavy_count < n * (0.5 + delta / 3.0))) {
        throw InvariantViolation("heavy set is not smaller than n(1/2 + delta/3)");
    }

    std::vector<Ranking> rankings(static_cast<std::size_t>(n), pair.b_over_a);
    for (int i : part.heavy) rankings[static_cast<std::size_t>(i)] = pair.a_over_b;

    std::vector<double> losses(static_cast<std::size_t>(m), 0.5);
    losses[static_cast<std::size_t>(pair.a)] = 1.0;
    losses[static_cast<std::size_t>(pair.b)] = 0.0;
    RoundChallenge round{std::move(rankings), LossVector(std::move(losses))};

    const auto winner = condorcet_winner(anonymize(round.rankings, w));
    if (!winner || *winner != pair.a) throw InvariantViolation("constructed profile lacks the intended Condorcet winner");
    return round;
}

RoundChallenge iid_random_round(int n, int m, Rng& rng) {
    if (n < 1 || m < 1) throw InvalidValue("need n, m >= 1");
    std::vector<Ranking> rankings;
    rankings.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rankings.push_back(random_ranking(m, rng));
    std::vector<double> losses(static_cast<std::size_t>(m));
    for (double& l : losses) l = uniform01(rng);
    return {std::move(rankings), LossVector(std::move(losses))};
}

Thm3Source::Thm3Source(VotingRule rule, int m) : rule_(std::move(rule)), witness_(Ranking::identity(1), Ranking::identity(1)) {
    auto found = unanimity_witness(rule_, m);
    if (!found) throw NoWitness("rule " + rule_.name() + " is constant on unanimous profiles; no lower-bound witness");
    witness_ = std::move(*found);
}

RoundChallenge Thm3Source::next(int, const WeightVector& weights) { return thm3_round(weights, rule_, witness_); }

Thm5Source::Thm5Source(VotingRule rule, int n, int m, double delta)
    : rule_(std::move(rule)), pair_(pick_pair(rule_, m)), delta_(delta) {
    if (n < thm5_min_voters(delta))
        throw HypothesisViolated("n=" + std::to_string(n) + " is below 2(3/(2 delta)+1)=" +
                                 std::to_string(thm5_min_voters(delta)) + " for delta=" + std::to_string(delta));
}

RoundChallenge Thm5Source::next(int, const WeightVector& weights) {
    return thm5_round(weights, rule_, pair_, delta_);
}

IidSource::IidSource(int n, int m, std::uint64_t seed) : n_(n), m_(m), rng_(seed) {}

RoundChallenge IidSource::next(int, const WeightVector&) { return iid_random_round(n_, m_, rng_); }

SequenceSource::SequenceSource(std::shared_ptr<const std::vector<RoundChallenge>> rounds)
    : rounds_(std::move(rounds)) {}

RoundChallenge SequenceSource::next(int t, const WeightVector&) {
    if (t < 0 || t >= static_cast<int>(rounds_->size()))
        throw InvalidValue("sequence has no round " + std::to_string(t + 1));
    return (*rounds_)[static_cast<std::size_t>(t)];
}

}  // namespace wvote
