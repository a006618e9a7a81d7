#include "wvote/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace wvote {

namespace {

double sum_ascending(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

}  // namespace

Ranking::Ranking(std::vector<Alternative> order) : order_(std::move(order)) {
    const int m = size();
    position_.assign(order_.size(), 0);
    std::vector<bool> seen(order_.size(), false);
    for (int k = 0; k < m; ++k) {
        const Alternative a = order_[static_cast<std::size_t>(k)];
        if (a < 0 || a >= m)
            throw InvalidRanking("alternative id " + std::to_string(a) + " out of range for m=" +
                                 std::to_string(m));
        if (seen[static_cast<std::size_t>(a)])
            throw InvalidRanking("duplicate alternative id " + std::to_string(a));
        seen[static_cast<std::size_t>(a)] = true;
        position_[static_cast<std::size_t>(a)] = k + 1;
    }
}

Ranking Ranking::identity(int m) {
    std::vector<Alternative> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    return Ranking(std::move(order));
}

std::string Ranking::to_string() const {
    std::string out;
    if (size() <= 26) {
        for (Alternative a : order_) out.push_back(static_cast<char>('a' + a));
        return out;
    }
    for (std::size_t k = 0; k < order_.size(); ++k) {
        if (k) out.push_back('-');
        out += std::to_string(order_[k]);
    }
    return out;
}

Ranking make_ranking(std::span<const Alternative> order, int m) {
    if (static_cast<int>(order.size()) != m)
        throw InvalidRanking("ranking has " + std::to_string(order.size()) + " entries, expected " +
                             std::to_string(m));
    return Ranking(std::vector<Alternative>(order.begin(), order.end()));
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    for (double w : weights_)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InvalidValue("weights must be finite and non-negative");
}

WeightVector WeightVector::basis(int n, int voter) {
    if (voter < 0 || voter >= n) throw InvalidValue("basis index out of range");
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    w[static_cast<std::size_t>(voter)] = 1.0;
    return WeightVector(std::move(w));
}

double WeightVector::l1() const { return sum_ascending(weights_); }

LossVector::LossVector(std::vector<double> losses) : losses_(std::move(losses)) {
    for (double l : losses_)
        if (!(l >= 0.0 && l <= 1.0)) throw InvalidValue("losses must lie in [0, 1]");
}

AlternativeDistribution::AlternativeDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidValue("distribution over zero alternatives");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw InvalidValue("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > kTolerance)
        throw InvalidValue("probabilities sum to " + std::to_string(total));
}

AlternativeDistribution AlternativeDistribution::point_mass(int m, Alternative a) {
    if (a < 0 || a >= m) throw InvalidValue("point mass outside the alternative set");
    std::vector<double> p(static_cast<std::size_t>(m), 0.0);
    p[static_cast<std::size_t>(a)] = 1.0;
    return AlternativeDistribution(std::move(p));
}

AlternativeDistribution AlternativeDistribution::uniform(int m) {
    return AlternativeDistribution(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

Alternative AlternativeDistribution::point_mass_alternative() const {
    Alternative found = -1;
    for (int a = 0; a < size(); ++a) {
        if (probs_[static_cast<std::size_t>(a)] > 0.0) {
            if (found != -1) return -1;
            found = a;
        }
    }
    return found;
}

AnonymousProfile AnonymousProfile::from_masses(std::vector<std::pair<Ranking, double>> masses) {
    if (masses.empty()) throw InvalidValue("empty profile");
    const int m = masses.front().first.size();
    std::map<Ranking, std::vector<double>> groups;
    std::vector<double> all;
    for (auto& [ranking, mass] : masses) {
        if (ranking.size() != m) throw ShapeMismatch("profile mixes rankings of different sizes");
        if (!(mass >= 0.0 && mass <= 1.0)) throw InvalidValue("profile mass outside [0, 1]");
        groups[ranking].push_back(mass);
        all.push_back(mass);
    }
    if (std::abs(sum_ascending(all) - 1.0) > kTolerance)
        throw InvalidValue("profile masses do not sum to 1");
    std::vector<Entry> entries;
    for (auto& [ranking, parts] : groups) {
        const double mass = sum_ascending(std::move(parts));
        if (mass > 0.0) entries.push_back({ranking, mass});
    }
    return AnonymousProfile(m, std::move(entries));
}

AnonymousProfile AnonymousProfile::unanimous(const Ranking& ranking) {
    return AnonymousProfile(ranking.size(), {{ranking, 1.0}});
}

double AnonymousProfile::mass(const Ranking& ranking) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), ranking,
                               [](const Entry& e, const Ranking& r) { return e.ranking < r; });
    return (it != entries_.end() && it->ranking == ranking) ? it->mass : 0.0;
}

AnonymousProfile anonymize(std::span<const Ranking> rankings, const WeightVector& weights) {
    if (static_cast<int>(rankings.size()) != weights.size())
        throw ShapeMismatch("one ranking per voter is required");
    if (rankings.empty()) throw DegenerateWeights("no voters");
    const double total = weights.l1();
    if (!(total > 0.0)) throw DegenerateWeights("total weight is zero");

    const int m = rankings.front().size();
    std::map<Ranking, std::vector<double>> groups;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        if (rankings[i].size() != m) throw ShapeMismatch("voters rank different alternative sets");
        groups[rankings[i]].push_back(weights[static_cast<int>(i)]);
    }
    std::vector<AnonymousProfile::Entry> entries;
    entries.reserve(groups.size());
    for (auto& [ranking, parts] : groups) {
        const double mass = sum_ascending(std::move(parts)) / total;
        if (mass > 0.0) entries.push_back({ranking, mass});
    }
    return AnonymousProfile(m, std::move(entries));
}

double expected_loss(const AlternativeDistribution& dist, const LossVector& losses) {
    if (dist.size() != losses.size())
        throw ShapeMismatch("distribution over " + std::to_string(dist.size()) +
                            " alternatives, losses over " + std::to_string(losses.size()));
    double total = 0.0;
    for (int a = 0; a < dist.size(); ++a) total += dist[a] * losses[a];
    return std::clamp(total, 0.0, 1.0);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_index(Rng& rng, int bound) {
    // Rejection sampling keeps the draw exactly uniform and portable.
    const std::uint64_t range = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<int>(x % range);
}

int sample_index(std::span<const double> probs, Rng& rng) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    int last_positive = -1;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        last_positive = static_cast<int>(k);
        cumulative += probs[k];
        if (u < cumulative) return last_positive;
    }
    // Rounding left u beyond the final cumulative sum.
    if (last_positive < 0) throw InvalidValue("cannot sample from an all-zero vector");
    return last_positive;
}

Alternative sample(const AlternativeDistribution& dist, Rng& rng) {
    return sample_index(dist.values(), rng);
}

Ranking random_ranking(int m, Rng& rng) {
    std::vector<Alternative> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    for (int k = m - 1; k > 0; --k) std::swap(order[static_cast<std::size_t>(k)],
                                              order[static_cast<std::size_t>(uniform_index(rng, k + 1))]);
    return Ranking(std::move(order));
}

}  // namespace wvote
