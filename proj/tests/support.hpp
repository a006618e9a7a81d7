#pragma once

// Test helpers and brute-force oracles. The oracles work from raw ballots and
// weights and never go through anonymize() or the rule evaluators.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "wvote/core.hpp"

namespace wvote::testing {

inline Ranking R(const std::string& letters) {
    std::vector<Alternative> order;
    for (char c : letters) order.push_back(c - 'a');
    return Ranking(order);
}

inline AnonymousProfile P(std::vector<std::pair<std::string, double>> masses) {
    std::vector<std::pair<Ranking, double>> out;
    for (auto& [s, w] : masses) out.emplace_back(R(s), w);
    return AnonymousProfile::from_masses(std::move(out));
}

inline std::vector<Ranking> ballots(const std::vector<std::string>& letters) {
    std::vector<Ranking> out;
    for (const auto& s : letters) out.push_back(R(s));
    return out;
}

// Position of `a` found by linear scan of the ballot, 0-based.
inline int scan_index(const Ranking& r, Alternative a) {
    const auto& o = r.order();
    return static_cast<int>(std::find(o.begin(), o.end(), a) - o.begin());
}

inline double total_weight(const std::vector<double>& w) {
    double t = 0.0;
    for (double x : w) t += x;
    return t;
}

/// Weighted positional score of every alternative, straight from the ballots.
inline std::vector<double> oracle_positional_scores(const std::vector<Ranking>& votes, const std::vector<double>& w,
                                                    const std::vector<double>& s) {
    const int m = votes.front().size();
    const double total = total_weight(w);
    std::vector<double> score(static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < votes.size(); ++i)
        for (Alternative a = 0; a < m; ++a) score[a] += w[i] / total * s[static_cast<std::size_t>(scan_index(votes[i], a))];
    return score;
}

/// Share of the weight ranking a above b.
inline double oracle_pairwise(const std::vector<Ranking>& votes, const std::vector<double>& w, Alternative a,
                              Alternative b) {
    double above = 0.0;
    for (std::size_t i = 0; i < votes.size(); ++i)
        if (scan_index(votes[i], a) < scan_index(votes[i], b)) above += w[i];
    return above / total_weight(w);
}

/// Copeland scores from integer-weighted ballots, compared in exact integer
/// arithmetic (weights must be whole numbers).
inline std::vector<double> oracle_copeland_integer(const std::vector<Ranking>& votes, const std::vector<long>& w) {
    const int m = votes.front().size();
    std::vector<double> score(static_cast<std::size_t>(m), 0.0);
    for (Alternative a = 0; a < m; ++a)
        for (Alternative b = 0; b < m; ++b) {
            if (a == b) continue;
            long ab = 0, ba = 0;
            for (std::size_t i = 0; i < votes.size(); ++i)
                (scan_index(votes[i], a) < scan_index(votes[i], b) ? ab : ba) += w[i];
            if (ab > ba) score[a] += 1.0;
            if (ab == ba) score[a] += 0.5;
        }
    return score;
}

inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
    return worst;
}

inline std::vector<double> random_weights(int n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (double& x : w) x = 1.0 - uniform01(rng);
    return w;
}

inline std::vector<double> random_simplex(int n, Rng& rng) {
    auto w = random_weights(n, rng);
    const double t = total_weight(w);
    for (double& x : w) x /= t;
    return w;
}

inline std::vector<Ranking> random_votes(int n, int m, Rng& rng) {
    std::vector<Ranking> v;
    for (int i = 0; i < n; ++i) v.push_back(random_ranking(m, rng));
    return v;
}

}  // namespace wvote::testing
