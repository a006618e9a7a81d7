#include "wvote/rules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace wvote {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_alternative(Alternative a, int m) {
    if (a < 0 || a >= m)
        throw ShapeMismatch("alternative " + std::to_string(a) + " outside a round with m=" + std::to_string(m));
}

// Smallest index among the maxima. Scores within a relative 1e-12 of each
// other count as tied so summation order cannot decide the winner.
Alternative argmax_lowest_id(const std::vector<double>& scores) {
    Alternative best = 0;
    for (int a = 1; a < static_cast<int>(scores.size()); ++a) {
        const double x = scores[static_cast<std::size_t>(a)];
        const double y = scores[static_cast<std::size_t>(best)];
        const double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (x - y > kTolerance * scale) best = a;
    }
    return best;
}

AlternativeDistribution normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    return AlternativeDistribution(std::move(weights));
}

std::string format_number(double x) {
    std::ostringstream out;
    out << x;
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------- scores

ScoreVector::ScoreVector(std::vector<double> scores) : scores_(std::move(scores)) {
    if (scores_.empty()) throw InvalidValue("empty score vector");
    for (std::size_t j = 0; j < scores_.size(); ++j) {
        if (!(scores_[j] >= 0.0) || !std::isfinite(scores_[j]))
            throw InvalidValue("scores must be finite and non-negative");
        if (j > 0 && scores_[j] > scores_[j - 1]) throw InvalidValue("scores must be non-increasing");
    }
    if (!(scores_.front() > 0.0)) throw InvalidValue("top score must be positive");
}

// With a single alternative every preset collapses to (1).
ScoreVector ScoreVector::plurality(int m) {
    std::vector<double> s(static_cast<std::size_t>(m), 0.0);
    s[0] = 1.0;
    return ScoreVector(std::move(s));
}

ScoreVector ScoreVector::veto(int m) {
    std::vector<double> s(static_cast<std::size_t>(m), 1.0);
    if (m > 1) s.back() = 0.0;
    return ScoreVector(std::move(s));
}

ScoreVector ScoreVector::borda(int m) {
    if (m == 1) return ScoreVector({1.0});
    std::vector<double> s(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) s[static_cast<std::size_t>(j)] = m - 1 - j;
    return ScoreVector(std::move(s));
}

double ScoreVector::total() const { return std::accumulate(scores_.begin(), scores_.end(), 0.0); }

ScoreVector Scoring::for_alternatives(int m) const {
    if (const auto* fixed = std::get_if<ScoreVector>(&spec)) {
        if (fixed->size() != m)
            throw ShapeMismatch("score vector has " + std::to_string(fixed->size()) + " entries, round has m=" +
                                std::to_string(m));
        return *fixed;
    }
    switch (std::get<ScorePreset>(spec)) {
        case ScorePreset::plurality: return ScoreVector::plurality(m);
        case ScorePreset::veto: return ScoreVector::veto(m);
        case ScorePreset::borda: return ScoreVector::borda(m);
    }
    throw InvalidValue("unknown score preset");
}

std::string Scoring::describe() const {
    if (const auto* fixed = std::get_if<ScoreVector>(&spec)) {
        std::string out = "(";
        for (std::size_t j = 0; j < fixed->values().size(); ++j) {
            if (j) out += ",";
            out += format_number(fixed->values()[j]);
        }
        return out + ")";
    }
    switch (std::get<ScorePreset>(spec)) {
        case ScorePreset::plurality: return "(plurality)";
        case ScorePreset::veto: return "(veto)";
        case ScorePreset::borda: return "(borda)";
    }
    return "?";
}

std::vector<double> positional_scores(const AnonymousProfile& profile, const ScoreVector& s) {
    const int m = profile.alternatives();
    if (s.size() != m) throw ShapeMismatch("score vector and profile disagree on m");
    std::vector<double> score(static_cast<std::size_t>(m), 0.0);
    for (const auto& [ranking, mass] : profile.support())
        for (int pos = 1; pos <= m; ++pos)
            score[static_cast<std::size_t>(ranking.at(pos - 1))] += mass * s.at_position(pos);
    return score;
}

AlternativeDistribution eval_positional_deterministic(const AnonymousProfile& profile, const ScoreVector& s) {
    const auto score = positional_scores(profile, s);
    return AlternativeDistribution::point_mass(profile.alternatives(), argmax_lowest_id(score));
}

AlternativeDistribution eval_positional_randomized(const AnonymousProfile& profile, const ScoreVector& s) {
    auto score = positional_scores(profile, s);
    const double total = s.total();
    for (double& x : score) x /= total;
    return AlternativeDistribution(std::move(score));
}

// ---------------------------------------------------------------- pairwise

double pairwise_weight(const AnonymousProfile& profile, Alternative a, Alternative b) {
    const int m = profile.alternatives();
    require_alternative(a, m);
    require_alternative(b, m);
    if (a == b) throw InvalidPair("pairwise comparison of an alternative with itself");
    double w = 0.0;
    for (const auto& [ranking, mass] : profile.support())
        if (ranking.prefers(a, b)) w += mass;
    return w;
}

namespace {

// +1 if a beats b, -1 if b beats a, 0 on an exact tie. The majority
// threshold is compared exactly, as in the definition.
int majority(const AnonymousProfile& profile, Alternative a, Alternative b) {
    const double ab = pairwise_weight(profile, a, b);
    const double ba = pairwise_weight(profile, b, a);
    if (ab > ba) return 1;
    if (ba > ab) return -1;
    return 0;
}

}  // namespace

std::vector<double> copeland_scores(const AnonymousProfile& profile) {
    const int m = profile.alternatives();
    std::vector<double> score(static_cast<std::size_t>(m), 0.0);
    for (Alternative a = 0; a < m; ++a)
        for (Alternative b = a + 1; b < m; ++b) {
            const int r = majority(profile, a, b);
            if (r > 0) {
                score[static_cast<std::size_t>(a)] += 1.0;
            } else if (r < 0) {
                score[static_cast<std::size_t>(b)] += 1.0;
            } else {
                score[static_cast<std::size_t>(a)] += 0.5;
                score[static_cast<std::size_t>(b)] += 0.5;
            }
        }
    return score;
}

AlternativeDistribution eval_copeland_deterministic(const AnonymousProfile& profile) {
    return AlternativeDistribution::point_mass(profile.alternatives(), argmax_lowest_id(copeland_scores(profile)));
}

AlternativeDistribution eval_copeland_randomized(const AnonymousProfile& profile) {
    const int m = profile.alternatives();
    if (m == 1) return AlternativeDistribution::point_mass(1, 0);
    auto score = copeland_scores(profile);
    const double contests = m * (m - 1) / 2.0;
    for (double& x : score) x /= contests;
    return AlternativeDistribution(std::move(score));
}

std::optional<Alternative> condorcet_winner(const AnonymousProfile& profile) {
    const int m = profile.alternatives();
    for (Alternative a = 0; a < m; ++a) {
        bool beats_all = true;
        for (Alternative b = 0; b < m && beats_all; ++b)
            if (b != a && majority(profile, a, b) <= 0) beats_all = false;
        if (beats_all) return a;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- strategyproof building blocks

AlternativeDistribution eval_unilateral(const std::function<Alternative(const Ranking&)>& selector,
                                        const AnonymousProfile& profile) {
    const int m = profile.alternatives();
    std::vector<double> probs(static_cast<std::size_t>(m), 0.0);
    for (const auto& [ranking, mass] : profile.support()) {
        const Alternative chosen = selector(ranking);
        require_alternative(chosen, m);
        probs[static_cast<std::size_t>(chosen)] += mass;
    }
    return normalized(std::move(probs));
}

AlternativeDistribution eval_duple(Alternative a, Alternative b, const AnonymousProfile& profile) {
    const int m = profile.alternatives();
    require_alternative(a, m);
    require_alternative(b, m);
    if (a == b) throw InvalidPair("duple needs two distinct alternatives");
    std::vector<double> probs(static_cast<std::size_t>(m), 0.0);
    switch (majority(profile, a, b)) {
        case 1: probs[static_cast<std::size_t>(a)] = 1.0; break;
        case -1: probs[static_cast<std::size_t>(b)] = 1.0; break;
        default:
            probs[static_cast<std::size_t>(a)] = 0.5;
            probs[static_cast<std::size_t>(b)] = 0.5;
    }
    return AlternativeDistribution(std::move(probs));
}

namespace {

void validate_mixture(const std::vector<MixtureComponent>& components) {
    if (components.empty()) throw BadMixture("mixture has no components");
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.probability >= 0.0)) throw BadMixture("negative mixture probability");
        total += c.probability;
    }
    if (std::abs(total - 1.0) > kTolerance) throw BadMixture("mixture probabilities sum to " + format_number(total));
}

}  // namespace

AlternativeDistribution eval_mixture(const std::vector<MixtureComponent>& components,
                                     const AnonymousProfile& profile) {
    validate_mixture(components);
    std::vector<double> probs(static_cast<std::size_t>(profile.alternatives()), 0.0);
    for (const auto& c : components) {
        if (c.probability == 0.0) continue;
        const auto part = c.rule.evaluate(profile);
        for (int a = 0; a < part.size(); ++a) probs[static_cast<std::size_t>(a)] += c.probability * part[a];
    }
    return normalized(std::move(probs));
}

// ---------------------------------------------------------------- VotingRule

AlternativeDistribution VotingRule::evaluate(const AnonymousProfile& profile) const {
    const int m = profile.alternatives();
    return std::visit(
        overloaded{
            [&](const DeterministicPositional& r) {
                return eval_positional_deterministic(profile, r.scoring.for_alternatives(m));
            },
            [&](const RandomizedPositional& r) {
                return eval_positional_randomized(profile, r.scoring.for_alternatives(m));
            },
            [&](const DeterministicCopeland&) { return eval_copeland_deterministic(profile); },
            [&](const RandomizedCopeland&) { return eval_copeland_randomized(profile); },
            [&](const ConstantUniform&) { return AlternativeDistribution::uniform(m); },
            [&](const Unilateral& r) { return eval_unilateral(r.selector, profile); },
            [&](const Duple& r) { return eval_duple(r.a, r.b, profile); },
            [&](const Mixture& r) { return eval_mixture(r.components, profile); },
        },
        kind_);
}

bool VotingRule::is_deterministic() const {
    return std::holds_alternative<DeterministicPositional>(kind_) ||
           std::holds_alternative<DeterministicCopeland>(kind_);
}

bool VotingRule::is_distribution_over_unilaterals() const {
    return std::visit(overloaded{
                          [](const RandomizedPositional&) { return true; },
                          [](const ConstantUniform&) { return true; },
                          [](const Unilateral&) { return true; },
                          [](const Mixture& r) {
                              return std::all_of(r.components.begin(), r.components.end(), [](const auto& c) {
                                  return c.probability == 0.0 || c.rule.is_distribution_over_unilaterals();
                              });
                          },
                          [](const auto&) { return false; },
                      },
                      kind_);
}

std::optional<double> VotingRule::condorcet_gap(int m) const {
    if (std::holds_alternative<RandomizedCopeland>(kind_) && m >= 2) return 2.0 / (m * (m - 1.0));
    if (std::holds_alternative<DeterministicCopeland>(kind_)) return 1.0;
    return std::nullopt;
}

std::string VotingRule::name() const {
    return std::visit(overloaded{
                          [](const DeterministicPositional& r) { return "deterministic_positional" + r.scoring.describe(); },
                          [](const RandomizedPositional& r) { return "randomized_positional" + r.scoring.describe(); },
                          [](const DeterministicCopeland&) { return std::string("deterministic_copeland"); },
                          [](const RandomizedCopeland&) { return std::string("randomized_copeland"); },
                          [](const ConstantUniform&) { return std::string("constant_uniform"); },
                          [](const Unilateral& r) { return "unilateral(" + r.label + ")"; },
                          [](const Duple& r) {
                              return "duple(" + std::to_string(r.a) + "," + std::to_string(r.b) + ")";
                          },
                          [](const Mixture& r) {
                              std::string out = "mixture[";
                              for (std::size_t k = 0; k < r.components.size(); ++k) {
                                  if (k) out += ";";
                                  out += format_number(r.components[k].probability) + "*" + r.components[k].rule.name();
                              }
                              return out + "]";
                          },
                      },
                      kind_);
}

double expected_loss(const VotingRule& rule, const AnonymousProfile& profile, const LossVector& losses) {
    if (profile.alternatives() != losses.size()) throw ShapeMismatch("profile and losses disagree on m");
    return expected_loss(rule.evaluate(profile), losses);
}

std::optional<std::pair<Ranking, Ranking>> unanimity_witness(const VotingRule& rule, int m) {
    if (m < 1) throw InvalidValue("need at least one alternative");
    if (m > kMaxEnumerableAlternatives)
        throw EnumerationRefused("refusing to enumerate " + std::to_string(m) + "! unanimous profiles");
    const Ranking first = Ranking::identity(m);
    const auto reference = rule.evaluate(AnonymousProfile::unanimous(first));
    std::vector<Alternative> order = first.order();
    while (std::next_permutation(order.begin(), order.end())) {
        Ranking other(order);
        const auto outcome = rule.evaluate(AnonymousProfile::unanimous(other));
        for (int a = 0; a < m; ++a)
            if (std::abs(outcome[a] - reference[a]) > kTolerance) return std::make_pair(first, other);
    }
    return std::nullopt;
}

Unilateral position_selector(int position) {
    if (position < 1) throw InvalidValue("positions are 1-based");
    return Unilateral{[position](const Ranking& r) {
                          if (position > r.size())
                              throw ShapeMismatch("position selector " + std::to_string(position) +
                                                  " on a ranking of size " + std::to_string(r.size()));
                          return r.at(position - 1);
                      },
                      "position " + std::to_string(position)};
}

Unilateral constant_selector(Alternative c) {
    if (c < 0) throw InvalidValue("negative alternative id");
    return Unilateral{[c](const Ranking&) { return c; }, "constant " + std::to_string(c)};
}

Mixture make_mixture(std::vector<MixtureComponent> components) {
    validate_mixture(components);
    return Mixture{std::move(components)};
}

Mixture unilateral_decomposition(const ScoreVector& s) {
    std::vector<MixtureComponent> components;
    const double total = s.total();
    for (int pos = 1; pos <= s.size(); ++pos)
        components.push_back({position_selector(pos), s.at_position(pos) / total});
    return make_mixture(std::move(components));
}

Mixture duple_decomposition(int m) {
    if (m < 2) throw InvalidValue("duples need at least two alternatives");
    std::vector<MixtureComponent> components;
    const double p = 2.0 / (m * (m - 1.0));
    for (Alternative a = 0; a < m; ++a)
        for (Alternative b = a + 1; b < m; ++b) components.push_back({Duple{a, b}, p});
    return make_mixture(std::move(components));
}

}  // namespace wvote
