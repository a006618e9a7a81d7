#pragma once

#include <functional>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wvote/core.hpp"

namespace wvote {

/// Positional scores s_1 >= s_2 >= ... >= s_m >= 0 with s_1 > 0.
class ScoreVector {
public:
    explicit ScoreVector(std::vector<double> scores);

    static ScoreVector plurality(int m);
    static ScoreVector veto(int m);
    static ScoreVector borda(int m);

    int size() const { return static_cast<int>(scores_.size()); }
    /// Score of 1-based position `pos`.
    double at_position(int pos) const { return scores_[static_cast<std::size_t>(pos - 1)]; }
    double total() const;
    const std::vector<double>& values() const { return scores_; }

private:
    std::vector<double> scores_;
};

enum class ScorePreset { plurality, veto, borda };

/// Either a fixed score vector or a preset family resolved against each
/// round's alternative count.
struct Scoring {
    std::variant<ScorePreset, ScoreVector> spec;

    ScoreVector for_alternatives(int m) const;
    std::string describe() const;
};

struct DeterministicPositional {
    Scoring scoring;
};
struct RandomizedPositional {
    Scoring scoring;
};
struct DeterministicCopeland {};
struct RandomizedCopeland {};
/// Uniform over the alternatives regardless of the profile.
struct ConstantUniform {};

/// g(pi) = sum_sigma pi_sigma e_{h(sigma)} for a ballot selector h.
struct Unilateral {
    std::function<Alternative(const Ranking&)> selector;
    std::string label;
};

/// Majority duple g_{a,b}: the pairwise winner of a and b, split evenly on a tie.
struct Duple {
    Alternative a = 0;
    Alternative b = 1;
};

struct MixtureComponent;
struct Mixture {
    std::vector<MixtureComponent> components;
};

/// An anonymous voting rule f: profile -> distribution over alternatives.
class VotingRule {
public:
    using Kind = std::variant<DeterministicPositional, RandomizedPositional, DeterministicCopeland,
                              RandomizedCopeland, ConstantUniform, Unilateral, Duple, Mixture>;

    template <typename T>
        requires std::is_constructible_v<Kind, T&&>
    VotingRule(T&& kind) : kind_(std::forward<T>(kind)) {}

    const Kind& kind() const { return kind_; }

    AlternativeDistribution evaluate(const AnonymousProfile& profile) const;

    /// True for rule kinds whose output is always a point mass.
    bool is_deterministic() const;

    /// True when the rule is known to be a mixture of unilaterals, the class
    /// for which weighting by p equals sampling a voter from p.
    bool is_distribution_over_unilaterals() const;

    /// Built-in probabilistic Condorcet-consistency gap, when known.
    std::optional<double> condorcet_gap(int m) const;

    std::string name() const;

private:
    Kind kind_;
};

struct MixtureComponent {
    VotingRule rule;
    double probability;
};

/// s-score(a) = sum_sigma pi_sigma s_{sigma(a)}.
std::vector<double> positional_scores(const AnonymousProfile& profile, const ScoreVector& s);
AlternativeDistribution eval_positional_deterministic(const AnonymousProfile& profile, const ScoreVector& s);
AlternativeDistribution eval_positional_randomized(const AnonymousProfile& profile, const ScoreVector& s);

/// Total mass of rankings placing a above b.
double pairwise_weight(const AnonymousProfile& profile, Alternative a, Alternative b);

/// Wins plus half a point per tied pairwise contest.
std::vector<double> copeland_scores(const AnonymousProfile& profile);
AlternativeDistribution eval_copeland_deterministic(const AnonymousProfile& profile);
AlternativeDistribution eval_copeland_randomized(const AnonymousProfile& profile);

std::optional<Alternative> condorcet_winner(const AnonymousProfile& profile);

AlternativeDistribution eval_unilateral(const std::function<Alternative(const Ranking&)>& selector,
                                        const AnonymousProfile& profile);
AlternativeDistribution eval_duple(Alternative a, Alternative b, const AnonymousProfile& profile);
AlternativeDistribution eval_mixture(const std::vector<MixtureComponent>& components,
                                     const AnonymousProfile& profile);

/// L_f(pi, l) = f(pi) . l.
double expected_loss(const VotingRule& rule, const AnonymousProfile& profile, const LossVector& losses);

/// Largest m for which unanimity_witness enumerates all m! rankings.
inline constexpr int kMaxEnumerableAlternatives = 8;

/// Two rankings whose unanimous profiles get different outcomes, or nullopt
/// when the rule is constant on unanimous profiles.
std::optional<std::pair<Ranking, Ranking>> unanimity_witness(const VotingRule& rule, int m);

// Unilateral selectors and common compositions.
Unilateral position_selector(int position);
Unilateral constant_selector(Alternative c);
Mixture make_mixture(std::vector<MixtureComponent> components);
/// Randomized positional rule written as a score-weighted mixture of position selectors.
Mixture unilateral_decomposition(const ScoreVector& s);
/// Randomized Copeland written as the uniform mixture over all majority duples.
Mixture duple_decomposition(int m);

}  // namespace wvote
