#ifndef GAPTRACK_PIPELINE_HPP
#define GAPTRACK_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gaptrack/changepoint.hpp"
#include "gaptrack/errors.hpp"
#include "gaptrack/io.hpp"
#include "gaptrack/ngram.hpp"
#include "gaptrack/report.hpp"
#include "gaptrack/svg.hpp"
#include "gaptrack/trajectory.hpp"

namespace gaptrack {

struct RunConfig {
    std::optional<std::filesystem::path> scores_path;
    std::optional<std::filesystem::path> fixture_path;
    std::optional<std::filesystem::path> corpus_path;
    std::optional<std::filesystem::path> pairs_path;
    std::optional<std::filesystem::path> checkpoints_dir;
    std::filesystem::path out_dir = "gaptrack_out";

    double trim_frac = 0.1;
    std::optional<double> penalty;    // absent: 2 sigma^2 ln T per class
    CostKind::Kind cost_kind = CostKind::Kind::Rbf;
    std::optional<double> bandwidth;  // absent: median heuristic per class
    Segmenter segmenter = Segmenter::Binseg;

    int order = 2;
    double addk = 0.5;
    double backoff_factor = 0.4;

    double early_frac = 0.3;
    double late_frac = 0.3;
    double tau = 0.99;
    GapAggregate aggregate = GapAggregate::SumPpl;

    std::string format = "json";  // json | csv | both

    // Which stages to run; the CLI fills this from the subcommand.
    std::set<std::string> stages;
};

inline void validate_config(const RunConfig& cfg) {
    if (cfg.trim_frac < 0.0 || cfg.trim_frac >= 0.5) {
        throw ValidationError("trim-frac must be in [0, 0.5)");
    }
    if (cfg.early_frac <= 0.0 || cfg.early_frac >= 1.0 ||
        cfg.late_frac <= 0.0 || cfg.late_frac >= 1.0) {
        throw ValidationError("early-frac and late-frac must be in (0, 1)");
    }
    if (cfg.tau <= 0.0 || cfg.tau > 1.0) {
        throw ValidationError("tau must be in (0, 1]");
    }
    if (cfg.order < 1 || cfg.order > 3) {
        throw ValidationError("order must be 1, 2, or 3");
    }
    if (cfg.addk < 0.0) {
        throw ValidationError("addk must be >= 0");
    }
    if (cfg.backoff_factor <= 0.0 || cfg.backoff_factor > 1.0) {
        throw ValidationError("backoff must be in (0, 1]");
    }
    if (cfg.penalty && *cfg.penalty < 0.0) {
        throw ValidationError("penalty must be >= 0");
    }
    if (cfg.bandwidth && *cfg.bandwidth <= 0.0) {
        throw ValidationError("bandwidth must be > 0");
    }
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both") {
        throw ValidationError("format must be json, csv, or both");
    }
    auto check_file = [](const std::optional<std::filesystem::path>& p,
                         const char* flag) {
        if (p && !std::filesystem::is_regular_file(*p)) {
            throw IoError(std::string(flag) + " path not found: " +
                          p->string());
        }
    };
    check_file(cfg.scores_path, "--scores");
    check_file(cfg.fixture_path, "--fixture");
    check_file(cfg.corpus_path, "--corpus");
    check_file(cfg.pairs_path, "--pairs");
    if (cfg.checkpoints_dir &&
        !std::filesystem::is_directory(*cfg.checkpoints_dir)) {
        throw IoError("--checkpoints directory not found: " +
                      cfg.checkpoints_dir->string());
    }
}

namespace detail {

template <typename Fn>
auto with_stage(const std::string& stage, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(stage + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(stage + ": " + e.what());
    } catch (const InternalError& e) {
        throw InternalError(stage + ": " + e.what());
    }
}

inline std::string safe_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        out += ok ? c : '_';
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Stages

inline std::map<std::string, GapSeries> stage_gaps(
    const std::vector<PairScore>& scores, GapAggregate aggregate) {
    std::map<std::string, std::vector<PairScore>> by_class;
    for (const auto& s : scores) {
        by_class[s.class_name].push_back(s);
    }
    std::map<std::string, GapSeries> out;
    for (const auto& [name, recs] : by_class) {
        out.emplace(name, detail::with_stage("class '" + name + "'", [&] {
                        return build_gap_series(recs, aggregate);
                    }));
    }
    return out;
}

inline std::map<std::string, ClassChangePoint> stage_changepoints(
    const std::map<std::string, GapSeries>& series, const RunConfig& cfg) {
    std::map<std::string, ClassChangePoint> out;
    for (const auto& [name, s] : series) {
        detail::with_stage("class '" + name + "'", [&] {
            Signal sig{s.gaps, s.steps};
            ClassChangePoint r;
            r.cusum = cusum_detect(sig, cfg.trim_frac);
            if (cfg.cost_kind == CostKind::Kind::Rbf) {
                r.bandwidth_used =
                    cfg.bandwidth.value_or(median_heuristic_bandwidth(sig));
            }
            const CostKind cost = cfg.cost_kind == CostKind::Kind::L2
                                      ? CostKind::l2()
                                      : CostKind::rbf(r.bandwidth_used);
            r.penalty_used = cfg.penalty.value_or(default_penalty(sig));
            r.segmentation =
                segment_detect(sig, cost, r.penalty_used, cfg.segmenter);
            out.emplace(name, std::move(r));
            return 0;
        });
    }
    return out;
}

inline std::map<std::string, ClassCategory> stage_categorize(
    const std::map<std::string, GapSeries>& series, const RunConfig& cfg) {
    std::map<std::string, ClassCategory> out;
    for (const auto& [name, s] : series) {
        ClassCategory c;
        c.means = segment_means(s, cfg.early_frac, cfg.late_frac);
        c.category = categorize(c.means);
        out.emplace(name, c);
    }
    return out;
}

// Per-class accuracy at each class's final checkpoint.
inline std::map<std::string, double> final_accuracies(
    const std::vector<PairScore>& scores) {
    std::map<std::string, std::int64_t> last_step;
    for (const auto& s : scores) {
        auto it = last_step.find(s.class_name);
        if (it == last_step.end() || s.checkpoint_step > it->second) {
            last_step[s.class_name] = s.checkpoint_step;
        }
    }
    std::map<std::string, std::vector<std::pair<double, double>>> ppls;
    for (const auto& s : scores) {
        if (s.checkpoint_step != last_step.at(s.class_name)) {
            continue;
        }
        ppls[s.class_name].emplace_back(
            perplexity(s.nll_good / static_cast<double>(s.n_tokens_good)),
            perplexity(s.nll_bad / static_cast<double>(s.n_tokens_bad)));
    }
    std::map<std::string, double> out;
    for (const auto& [name, pairs] : ppls) {
        out[name] = class_accuracy(pairs);
    }
    return out;
}

struct BigramStage {
    BigramHypothesisReport report;
    std::map<std::string, double> full_order_gaps;  // order >= 3 only
    int order = 2;
};

inline BigramStage stage_bigram(
    const std::vector<std::string>& corpus,
    const std::map<std::string, std::vector<SentencePair>>& pairs_by_class,
    const std::map<std::string, GapSeries>& neural_series,
    const RunConfig& cfg) {
    if (cfg.order < 2) {
        throw ValidationError(
            "the hypothesis verdict compares bigram gaps; it needs "
            "--order 2 or 3");
    }
    const NGramModel model = train(corpus, cfg.order, cfg.backoff_factor,
                                   cfg.addk);
    std::map<std::string, std::vector<std::pair<std::string, std::string>>>
        class_pairs;
    for (const auto& [name, pairs] : pairs_by_class) {
        auto& dst = class_pairs[name];
        dst.reserve(pairs.size());
        for (const auto& p : pairs) {
            dst.emplace_back(p.good, p.bad);
        }
    }
    BigramStage out;
    out.order = cfg.order;
    out.report = bigram_hypothesis_test(model, class_pairs, neural_series,
                                        cfg.early_frac, cfg.late_frac);
    if (cfg.order >= 3) {
        for (const auto& [name, pairs] : class_pairs) {
            out.full_order_gaps[name] = full_order_class_gap(model, pairs);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orchestration

struct PipelineResult {
    std::vector<std::string> files;  // paths written, relative to out_dir
    std::string display;             // human-readable summary for stdout
};

inline PipelineResult run_pipeline(const RunConfig& cfg) {
    validate_config(cfg);
    const bool want_json = cfg.format == "json" || cfg.format == "both";
    const bool want_csv = cfg.format == "csv" || cfg.format == "both";

    PipelineResult res;
    auto emit = [&](const std::string& stem, const std::string& json_text,
                    const std::string& csv_text) {
        if (want_json) {
            write_text_file(cfg.out_dir / (stem + ".json"), json_text);
            res.files.push_back(stem + ".json");
        }
        if (want_csv) {
            write_text_file(cfg.out_dir / (stem + ".csv"), csv_text);
            res.files.push_back(stem + ".csv");
        }
    };
    auto wants = [&](const char* stage) { return cfg.stages.count(stage) > 0; };
    auto require = [&](const std::optional<std::filesystem::path>& p,
                       const char* stage, const char* flag) {
        if (!p) {
            throw ValidationError(std::string(stage) + ": missing " + flag);
        }
    };

    std::optional<std::map<std::string, GapSeries>> series;
    auto ensure_series = [&](const char* stage) {
        if (!series) {
            require(cfg.scores_path, stage, "--scores");
            auto scores = detail::with_stage(
                stage, [&] { return read_scores(*cfg.scores_path); });
            series = detail::with_stage(
                stage, [&] { return stage_gaps(scores, cfg.aggregate); });
        }
        return &*series;
    };

    std::optional<std::map<std::string, ClassChangePoint>> changepoints;

    if (wants("gaps")) {
        auto* s = ensure_series("gaps");
        emit("gaps", render_gaps_json(*s), render_gaps_csv(*s));
    }
    if (wants("changepoint")) {
        auto* s = ensure_series("changepoint");
        changepoints = detail::with_stage(
            "changepoint", [&] { return stage_changepoints(*s, cfg); });
        emit("changepoints", render_changepoints_json(*changepoints),
             render_changepoints_csv(*changepoints));
    }
    if (wants("categorize")) {
        auto* s = ensure_series("categorize");
        auto categories = detail::with_stage(
            "categorize", [&] { return stage_categorize(*s, cfg); });
        emit("categories", render_categories_json(categories),
             render_categories_csv(categories));
    }
    if (wants("stats")) {
        require(cfg.fixture_path, "stats", "--fixture");
        auto fixture = detail::with_stage("stats", [&] {
            return read_fixture_changepoints(*cfg.fixture_path);
        });
        auto summary = detail::with_stage(
            "stats", [&] { return summarize_fixture(fixture); });
        auto stats = detail::with_stage(
            "stats", [&] { return fixture_stats(fixture); });
        emit("pattern_summary", render_pattern_summary_json(summary),
             render_pattern_summary_csv(summary));
        emit("stats", render_stats_json(stats), render_stats_csv(stats));
        res.display = render_pattern_summary_display(summary);
    }
    if (wants("bigram")) {
        require(cfg.corpus_path, "bigram", "--corpus");
        require(cfg.pairs_path, "bigram", "--pairs");
        auto* s = ensure_series("bigram");
        auto corpus = detail::with_stage(
            "bigram", [&] { return read_corpus(*cfg.corpus_path); });
        auto pairs = detail::with_stage(
            "bigram", [&] { return read_pairs(*cfg.pairs_path); });
        auto stage = detail::with_stage(
            "bigram", [&] { return stage_bigram(corpus, pairs, *s, cfg); });
        emit("bigram",
             render_bigram_json(stage.report, stage.order, cfg.addk,
                                cfg.backoff_factor,
                                cfg.order >= 3 ? &stage.full_order_gaps
                                               : nullptr),
             render_bigram_csv(stage.report));
    }
    if (wants("spectral")) {
        require(cfg.checkpoints_dir, "spectral", "--checkpoints");
        auto matrices = detail::with_stage(
            "spectral", [&] { return scan_checkpoints(*cfg.checkpoints_dir); });
        auto report = detail::with_stage("spectral", [&] {
            return build_spectral_report(matrices, cfg.tau);
        });
        emit("spectral", render_spectral_json(report),
             render_spectral_csv(report));
    }
    if (wants("plots")) {
        auto* s = ensure_series("plots");
        if (!changepoints) {
            changepoints = detail::with_stage(
                "plots", [&] { return stage_changepoints(*s, cfg); });
        }
        detail::with_stage("plots", [&] {
            for (const auto& [name, gap_series] : *s) {
                const std::string file =
                    "plots/gap_" + detail::safe_filename(name) + ".svg";
                write_text_file(
                    cfg.out_dir / file,
                    plot_gap_trajectory(gap_series,
                                        changepoints->at(name).cusum));
                res.files.push_back(file);
            }
            auto scores = read_scores(*cfg.scores_path);
            std::map<std::string, std::map<std::string, double>> acc;
            acc["model"] = final_accuracies(scores);
            write_text_file(cfg.out_dir / "plots/accuracy_comparison.svg",
                            plot_accuracy_comparison(acc, "model"));
            res.files.push_back("plots/accuracy_comparison.svg");
            return 0;
        });
    }

    if (res.files.empty()) {
        throw ValidationError(
            "nothing to do: no stage had its inputs provided");
    }
    return res;
}

}  // namespace gaptrack

#endif  // GAPTRACK_PIPELINE_HPP
