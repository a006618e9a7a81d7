#include "wvote/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wvote {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return field<T>(obj, key);
}

Scoring parse_scoring(const json& spec) {
    if (spec.contains("scores")) {
        try {
            return Scoring{ScoreVector(field<std::vector<double>>(spec, "scores"))};
        } catch (const InvalidValue& e) {
            throw ConfigError(std::string("scores: ") + e.what());
        }
    }
    const auto preset = field<std::string>(spec, "preset");
    if (preset == "plurality") return Scoring{ScorePreset::plurality};
    if (preset == "veto") return Scoring{ScorePreset::veto};
    if (preset == "borda") return Scoring{ScorePreset::borda};
    throw ConfigError("unknown score preset '" + preset + "'");
}

}  // namespace

VotingRule parse_rule(const json& spec) {
    if (!spec.is_object()) throw ConfigError("rule must be a JSON object");
    const auto kind = field<std::string>(spec, "kind");
    if (kind == "deterministic_positional") return DeterministicPositional{parse_scoring(spec)};
    if (kind == "randomized_positional") return RandomizedPositional{parse_scoring(spec)};
    if (kind == "deterministic_copeland") return DeterministicCopeland{};
    if (kind == "randomized_copeland") return RandomizedCopeland{};
    if (kind == "constant_uniform") return ConstantUniform{};
    if (kind == "unilateral") {
        const json selector = field<json>(spec, "selector");
        if (selector.contains("position")) return position_selector(field<int>(selector, "position"));
        if (selector.contains("constant")) return constant_selector(field<int>(selector, "constant"));
        throw ConfigError("unilateral selector needs 'position' or 'constant'");
    }
    if (kind == "duple") {
        const auto pair = field<std::vector<int>>(spec, "pair");
        if (pair.size() != 2 || pair[0] == pair[1] || pair[0] < 0 || pair[1] < 0)
            throw ConfigError("duple needs two distinct non-negative alternative ids");
        return Duple{pair[0], pair[1]};
    }
    if (kind == "mixture") {
        std::vector<MixtureComponent> components;
        for (const auto& c : field<json>(spec, "components"))
            components.push_back({parse_rule(field<json>(c, "rule")), field<double>(c, "probability")});
        try {
            return make_mixture(std::move(components));
        } catch (const BadMixture& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown rule kind '" + kind + "'");
}

std::vector<RoundChallenge> parse_sequence(std::istream& in) {
    std::vector<RoundChallenge> rounds;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "sequence line " + std::to_string(line_no) + ": ";
        try {
            const json obj = json::parse(line);
            std::vector<double> losses = field<std::vector<double>>(obj, "losses");
            const int m = static_cast<int>(losses.size());
            std::vector<Ranking> rankings;
            for (const auto& r : field<std::vector<std::vector<int>>>(obj, "rankings")) rankings.push_back(make_ranking(r, m));
            if (rankings.empty()) throw ConfigError("round has no voters");
            RoundChallenge round{std::move(rankings), LossVector(std::move(losses))};
            validate_challenge(round);
            if (!rounds.empty() && round.voters() != rounds.front().voters())
                throw ConfigError("voter count changed from " + std::to_string(rounds.front().voters()) + " to " +
                                  std::to_string(round.voters()));
            rounds.push_back(std::move(round));
        } catch (const json::exception& e) {
            throw ConfigError(where + e.what());
        } catch (const Error& e) {
            throw ConfigError(where + e.what());
        }
    }
    if (rounds.empty()) throw ConfigError("sequence has no rounds");
    return rounds;
}

std::vector<RoundChallenge> load_sequence(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sequence file " + path.string());
    return parse_sequence(in);
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.rule_spec = field<json>(doc, "rule");
    cfg.rule = parse_rule(cfg.rule_spec);

    const json scheme = field<json>(doc, "scheme");
    cfg.scheme = scheme_kind_from_string(field<std::string>(scheme, "kind"));
    cfg.eta = optional_field<double>(scheme, "eta");
    cfg.feedback = feedback_from_string(optional_field<std::string>(doc, "feedback").value_or("full"));
    cfg.seed = optional_field<std::uint64_t>(doc, "seed").value_or(0);
    cfg.trials = optional_field<int>(doc, "trials").value_or(1);
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    if (doc.contains("output")) {
        const json out = doc.at("output");
        cfg.trace_csv = optional_field<std::string>(out, "trace_csv").value_or(cfg.trace_csv);
        cfg.summary_json = optional_field<std::string>(out, "summary_json").value_or(cfg.summary_json);
    }

    const json source = field<json>(doc, "source");
    cfg.source.kind = field<std::string>(source, "kind");
    cfg.source.delta = optional_field<double>(source, "delta");
    const auto n = optional_field<int>(doc, "n");
    const auto m = optional_field<int>(doc, "m");
    const auto horizon = optional_field<int>(doc, "T");

    if (cfg.source.kind == "file") {
        cfg.source.path = field<std::string>(source, "path");
        if (cfg.source.path.is_relative()) cfg.source.path = base_dir / cfg.source.path;
        auto rounds = load_sequence(cfg.source.path);
        const int file_voters = rounds.front().voters();
        if (n && *n != file_voters)
            throw ConfigError("config says n=" + std::to_string(*n) + " but the sequence has " +
                              std::to_string(file_voters) + " voters");
        cfg.voters = file_voters;
        cfg.alternatives = m.value_or(0);
        if (m)
            for (const auto& r : rounds)
                if (r.alternatives() != *m) throw ConfigError("sequence round disagrees with m=" + std::to_string(*m));
        cfg.horizon = horizon.value_or(static_cast<int>(rounds.size()));
        if (cfg.horizon > static_cast<int>(rounds.size()))
            throw ConfigError("T=" + std::to_string(cfg.horizon) + " exceeds the " + std::to_string(rounds.size()) +
                              " rounds in the sequence");
        cfg.sequence = std::make_shared<const std::vector<RoundChallenge>>(std::move(rounds));
    } else {
        if (!n || !m || !horizon) throw ConfigError("source '" + cfg.source.kind + "' needs n, m and T");
        cfg.voters = *n;
        cfg.alternatives = *m;
        cfg.horizon = *horizon;
        if (cfg.voters < 1 || cfg.alternatives < 1) throw ConfigError("n and m must be positive");
        if (cfg.source.kind == "thm5") {
            if (cfg.alternatives < 2) throw ConfigError("thm5 source needs m >= 2");
            if (!cfg.source.delta) cfg.source.delta = cfg.rule.condorcet_gap(cfg.alternatives);
            if (!cfg.source.delta)
                throw ConfigError("thm5 source needs 'delta' for rule " + cfg.rule.name() + " (no built-in gap)");
            if (cfg.voters < thm5_min_voters(*cfg.source.delta))
                throw HypothesisViolated("n=" + std::to_string(cfg.voters) + " is below 2(3/(2 delta)+1)=" +
                                         format_real(thm5_min_voters(*cfg.source.delta)) + " for delta=" +
                                         format_real(*cfg.source.delta));
        } else if (cfg.source.kind == "thm3") {
            if (cfg.voters < 2) throw ConfigError("thm3 source needs n >= 2");
        } else if (cfg.source.kind != "iid_random") {
            throw ConfigError("unknown source kind '" + cfg.source.kind + "'");
        }
    }
    if (cfg.horizon < 1) throw ConfigError("T must be at least 1");
    // Validates eta and the counts.
    make_scheme_config(cfg.scheme, cfg.voters, cfg.horizon, cfg.eta, cfg.feedback == Feedback::partial);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

EpisodeSpec build_episode(const ExperimentConfig& config) {
    EpisodeSpec spec;
    spec.scheme = make_scheme_config(config.scheme, config.voters, config.horizon, config.eta,
                                     config.feedback == Feedback::partial);
    spec.rule = config.rule;
    spec.feedback = config.feedback;
    const int n = config.voters;
    const int m = config.alternatives;
    const VotingRule rule = config.rule;
    if (config.source.kind == "thm3") {
        // Resolve the witness once so a rule without one fails before any output.
        auto probe = std::make_shared<Thm3Source>(rule, m);
        spec.make_source = [probe](std::uint64_t) -> std::unique_ptr<RoundSource> {
            return std::make_unique<Thm3Source>(*probe);
        };
    } else if (config.source.kind == "thm5") {
        auto probe = std::make_shared<Thm5Source>(rule, n, m, config.source.delta.value());
        spec.make_source = [probe](std::uint64_t) -> std::unique_ptr<RoundSource> {
            return std::make_unique<Thm5Source>(*probe);
        };
    } else if (config.source.kind == "iid_random") {
        spec.make_source = [n, m](std::uint64_t seed) -> std::unique_ptr<RoundSource> {
            return std::make_unique<IidSource>(n, m, seed);
        };
    } else {
        auto rounds = config.sequence;
        spec.make_source = [rounds](std::uint64_t) -> std::unique_ptr<RoundSource> {
            return std::make_unique<SequenceSource>(rounds);
        };
    }
    std::ostringstream desc;
    desc << "rule=" << rule.name() << " scheme=" << to_string(spec.scheme.kind) << " eta=" << format_real(spec.scheme.eta)
         << " n=" << n << " m=" << m << " T=" << config.horizon << " feedback=" << to_string(config.feedback)
         << " source=" << config.source.kind;
    spec.description = desc.str();
    return spec;
}

double regret_bound(Feedback feedback, int voters, int horizon) {
    const double log_n = std::log(static_cast<double>(voters));
    if (feedback == Feedback::partial) return std::sqrt(2.0 * horizon * voters * log_n);
    return std::sqrt(2.0 * horizon * log_n);
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

double rounded(double x) { return std::stod(format_real(x)); }

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out) {
    out << "round,scheme_expected_loss,cumulative_scheme_loss,best_voter_cumulative_loss_so_far,cumulative_regret\n";
    const auto tallies = running_tallies(trace);
    for (std::size_t k = 0; k < tallies.size(); ++k) {
        out << trace.records[k].t << ',' << format_real(trace.records[k].scheme_expected_loss) << ','
            << format_real(tallies[k].cumulative_scheme_loss) << ',' << format_real(tallies[k].best_voter_cumulative_loss)
            << ',' << format_real(tallies[k].cumulative_regret) << '\n';
    }
}

json summarize(const ExperimentConfig& config, const Trace& first_trial, const MonteCarloResult& trials) {
    const BestVoter best = best_voter(first_trial);
    json regrets = json::array();
    for (double r : trials.regrets) regrets.push_back(rounded(r));
    return json{
        {"rule", config.rule.name()},
        {"scheme", to_string(config.scheme)},
        {"feedback", to_string(config.feedback)},
        {"source", config.source.kind},
        {"n", config.voters},
        {"m", config.alternatives},
        {"T", config.horizon},
        {"seed", config.seed},
        {"trials", config.trials},
        {"final_regret", rounded(regret(first_trial))},
        {"best_voter", best.voter + 1},
        {"best_voter_cumulative_loss", rounded(best.cumulative_loss)},
        {"bound", rounded(regret_bound(config.feedback, config.voters, config.horizon))},
        {"bound_formula", config.feedback == Feedback::partial ? "sqrt(2 T n ln n)" : "sqrt(2 T ln n)"},
        {"mean_regret", rounded(trials.mean)},
        {"stderr_regret", rounded(trials.standard_error)},
        {"regrets", regrets},
        {"warnings", first_trial.warnings},
    };
}

int run_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err) {
    try {
        const ExperimentConfig config = load_config(config_path);
        const EpisodeSpec spec = build_episode(config);
        // Everything runs before any file is opened, so failures leave no partial output.
        const Trace first = run_episode(spec, config.seed);
        const MonteCarloResult mc = monte_carlo_regret(spec, config.trials, config.seed);
        for (const auto& w : first.warnings) err << "warning: " << w << '\n';

        std::filesystem::create_directories(out_dir);
        const auto csv_path = out_dir / config.trace_csv;
        const auto summary_path = out_dir / config.summary_json;
        {
            std::ofstream csv(csv_path, std::ios::trunc);
            if (!csv) throw ConfigError("cannot write " + csv_path.string());
            write_trace_csv(first, csv);
        }
        {
            std::ofstream summary(summary_path, std::ios::trunc);
            if (!summary) throw ConfigError("cannot write " + summary_path.string());
            summary << summarize(config, first, mc).dump(2) << '\n';
        }
        out << "regret " << format_real(regret(first)) << " (mean " << format_real(mc.mean) << " +/- "
            << format_real(mc.standard_error) << " over " << config.trials << " trials, bound "
            << format_real(regret_bound(config.feedback, config.voters, config.horizon)) << ")\n"
            << "wrote " << csv_path.string() << " and " << summary_path.string() << '\n';
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace wvote
