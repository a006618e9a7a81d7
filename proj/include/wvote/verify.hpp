#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wvote {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // observed vs expected
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int profiles = 100;  // random instances per identity check
};

/// Closed-form identities: weighting by p versus sampling a voter, the duple
/// and unilateral decompositions, score conservation, the Copeland Condorcet gap.
std::vector<CheckResult> verify_identities(const VerifyOptions& options);

/// Monte Carlo checks of the importance-weighted loss estimator, plus its
/// zero-probability error path.
std::vector<CheckResult> verify_estimators(const VerifyOptions& options);

/// Lower-bound constructions: per-round gap and regret accounting, and the
/// sorted-prefix weight bound of the partition step.
std::vector<CheckResult> verify_adversaries(const VerifyOptions& options);

/// suite is one of identities | estimators | adversaries | all. Prints one
/// line per check. Returns 0 when all pass, 2 when any fails, 1 for an
/// unknown suite.
int run_verify(const std::string& suite, const VerifyOptions& options, std::ostream& out, std::ostream& err);

}  // namespace wvote
