#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wvote/errors.hpp"

namespace wvote {

/// Round-local alternative id in [0, m).
using Alternative = int;

/// Random source used throughout. Callers own it; nothing in the library
/// keeps a hidden generator.
using Rng = std::mt19937_64;

/// Comparison tolerance for probability and loss identities.
inline constexpr double kTolerance = 1e-12;

/// A strict linear order over the alternatives {0, ..., m-1}.
///
/// `order()[k]` is the alternative in position k+1. `position(a)` is the
/// 1-based rank of `a`, so `prefers(a, b)` holds iff position(a) < position(b).
class Ranking {
public:
    /// Throws InvalidRanking unless `order` is a permutation of {0, ..., size-1}.
    explicit Ranking(std::vector<Alternative> order);

    static Ranking identity(int m);

    int size() const { return static_cast<int>(order_.size()); }
    Alternative at(int index) const { return order_[static_cast<std::size_t>(index)]; }
    int position(Alternative a) const { return position_[static_cast<std::size_t>(a)]; }
    bool prefers(Alternative a, Alternative b) const { return position(a) < position(b); }
    const std::vector<Alternative>& order() const { return order_; }

    /// Letters for m <= 26 ("bca"), dash-separated ids otherwise.
    std::string to_string() const;

    friend bool operator==(const Ranking& x, const Ranking& y) { return x.order_ == y.order_; }
    friend bool operator<(const Ranking& x, const Ranking& y) { return x.order_ < y.order_; }

private:
    std::vector<Alternative> order_;
    std::vector<int> position_;
};

/// Validating factory: `order` must have exactly `m` entries.
Ranking make_ranking(std::span<const Alternative> order, int m);

/// Non-negative voter weights.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<double> weights);

    /// The basis vector e_i over n voters.
    static WeightVector basis(int n, int voter);

    int size() const { return static_cast<int>(weights_.size()); }
    double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }
    double l1() const;
    const std::vector<double>& values() const { return weights_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> weights_;
};

/// Per-alternative loss, each entry in [0, 1].
class LossVector {
public:
    LossVector() = default;
    explicit LossVector(std::vector<double> losses);

    int size() const { return static_cast<int>(losses_.size()); }
    double operator[](Alternative a) const { return losses_[static_cast<std::size_t>(a)]; }
    const std::vector<double>& values() const { return losses_; }

    friend bool operator==(const LossVector&, const LossVector&) = default;

private:
    std::vector<double> losses_;
};

/// Probability vector over the alternatives of one round.
class AlternativeDistribution {
public:
    /// Throws InvalidValue on negative entries or a sum off from 1 by more than kTolerance.
    explicit AlternativeDistribution(std::vector<double> probs);

    static AlternativeDistribution point_mass(int m, Alternative a);
    static AlternativeDistribution uniform(int m);

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](Alternative a) const { return probs_[static_cast<std::size_t>(a)]; }
    const std::vector<double>& values() const { return probs_; }

    /// The alternative carrying all the mass, or -1 when the support has more than one element.
    Alternative point_mass_alternative() const;

private:
    std::vector<double> probs_;
};

/// Sparse anonymous vote profile: each distinct ranking with its share of
/// the total weight. Entries are kept sorted by ranking so iteration order
/// is deterministic.
class AnonymousProfile {
public:
    struct Entry {
        Ranking ranking;
        double mass;
    };

    /// Validates that masses are in [0,1], rankings share one size, and the
    /// total is 1 within kTolerance. Duplicate rankings are merged.
    static AnonymousProfile from_masses(std::vector<std::pair<Ranking, double>> masses);
    static AnonymousProfile unanimous(const Ranking& ranking);

    int alternatives() const { return m_; }
    const std::vector<Entry>& support() const { return entries_; }
    double mass(const Ranking& ranking) const;

private:
    AnonymousProfile(int m, std::vector<Entry> entries) : m_(m), entries_(std::move(entries)) {}
    friend AnonymousProfile anonymize(std::span<const Ranking>, const WeightVector&);

    int m_ = 0;
    std::vector<Entry> entries_;
};

/// pi_sigma = (total weight of voters reporting sigma) / ||w||_1.
///
/// Per-ranking weights are summed in ascending order so that any joint
/// permutation of voters produces a bit-identical profile.
AnonymousProfile anonymize(std::span<const Ranking> rankings, const WeightVector& weights);

/// f(pi) . l, the expected loss of the chosen alternative.
double expected_loss(const AlternativeDistribution& dist, const LossVector& losses);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// Uniform integer in [0, bound).
int uniform_index(Rng& rng, int bound);

/// Draws one alternative (or voter) index; entries with zero probability are never returned.
int sample_index(std::span<const double> probs, Rng& rng);
Alternative sample(const AlternativeDistribution& dist, Rng& rng);

/// Uniform random permutation of {0, ..., m-1}.
Ranking random_ranking(int m, Rng& rng);

}  // namespace wvote
