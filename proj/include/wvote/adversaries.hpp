#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "wvote/core.hpp"
#include "wvote/rules.hpp"

namespace wvote {

/// One election: a ranking per voter and the loss of every alternative.
struct RoundChallenge {
    std::vector<Ranking> rankings;
    LossVector losses;

    int voters() const { return static_cast<int>(rankings.size()); }
    int alternatives() const { return losses.size(); }
};

/// Throws ShapeMismatch unless every ranking covers exactly the alternatives the losses cover.
void validate_challenge(const RoundChallenge& challenge);

// --------------------------------------------------------------- lower bound for deterministic rules

/// Voter 0 reports witness.first, everyone else witness.second; the winner
/// under w gets loss 1 and every other alternative loss 0.
///
/// Requires n >= 2 and a point-mass f(pi) (InvalidValue otherwise), and the
/// two witness rankings to have different unanimous outcomes (NoWitness).
RoundChallenge thm3_round(const WeightVector& w, const VotingRule& rule, const std::pair<Ranking, Ranking>& witness);

// --------------------------------------------------------------- lower bound for Condorcet-consistent rules

struct PartitionResult {
    std::vector<int> heavy;  // shortest weight-sorted prefix holding more than half the weight
    std::vector<int> light;
    double heavy_weight = 0.0;
};

/// Sorts voters by weight (descending, ties by index) and takes the shortest
/// prefix with strictly more than half of ||w||_1. The prefix bound
/// heavy_weight >= |heavy| ||w||_1 / n is checked on every call.
PartitionResult thm5_partition(const WeightVector& w);

struct PairChoice {
    Alternative a = 0;
    Alternative b = 1;
    Ranking a_over_b;  // a first, b second, rest ascending
    Ranking b_over_a;
};

/// x first, y second, remaining alternatives in ascending id order.
Ranking top_two_ranking(Alternative x, Alternative y, int m);

/// Orients the first pair (0,1) so that the top-two gap of f on the
/// unanimous b-over-a profile is at least the gap on a-over-b.
PairChoice pick_pair(const VotingRule& rule, int m);

/// Smallest n the construction supports: 2 (3 / (2 delta) + 1).
double thm5_min_voters(double delta);

/// Heavy voters report a_over_b, light voters b_over_a; losses are 1 on a,
/// 0 on b and 1/2 elsewhere. Throws HypothesisViolated when n is below
/// thm5_min_voters(delta). Checks that a is the Condorcet winner under w and
/// the size bounds of the two weight cases.
RoundChallenge thm5_round(const WeightVector& w, const VotingRule& rule, const PairChoice& pair, double delta);

// --------------------------------------------------------------- benign environment

/// Uniform rankings and i.i.d. uniform [0,1) losses.
RoundChallenge iid_random_round(int n, int m, Rng& rng);

// --------------------------------------------------------------- sources for the harness

/// Emits one round per call. The weight vector for the round is handed over
/// first so adaptive adversaries can react to it.
class RoundSource {
public:
    virtual ~RoundSource() = default;
    virtual RoundChallenge next(int t, const WeightVector& weights) = 0;
};

class Thm3Source : public RoundSource {
public:
    /// Throws NoWitness when the rule is constant on unanimous profiles over m alternatives.
    Thm3Source(VotingRule rule, int m);
    RoundChallenge next(int t, const WeightVector& weights) override;
    const std::pair<Ranking, Ranking>& witness() const { return witness_; }

private:
    VotingRule rule_;
    std::pair<Ranking, Ranking> witness_;
};

class Thm5Source : public RoundSource {
public:
    Thm5Source(VotingRule rule, int n, int m, double delta);
    RoundChallenge next(int t, const WeightVector& weights) override;
    const PairChoice& pair() const { return pair_; }

private:
    VotingRule rule_;
    PairChoice pair_;
    double delta_;
};

class IidSource : public RoundSource {
public:
    IidSource(int n, int m, std::uint64_t seed);
    RoundChallenge next(int t, const WeightVector& weights) override;

private:
    int n_;
    int m_;
    Rng rng_;
};

/// Replays a fixed sequence; t indexes into it.
class SequenceSource : public RoundSource {
public:
    explicit SequenceSource(std::shared_ptr<const std::vector<RoundChallenge>> rounds);
    RoundChallenge next(int t, const WeightVector& weights) override;

private:
    std::shared_ptr<const std::vector<RoundChallenge>> rounds_;
};

}  // namespace wvote
