#ifndef GAPTRACK_REPORT_HPP
#define GAPTRACK_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gaptrack/changepoint.hpp"
#include "gaptrack/errors.hpp"
#include "gaptrack/io.hpp"
#include "gaptrack/ngram.hpp"
#include "gaptrack/spectral.hpp"
#include "gaptrack/stats.hpp"
#include "gaptrack/trajectory.hpp"

namespace gaptrack {

// ---------------------------------------------------------------------------
// Pattern summary (one row per trajectory category present)

struct PatternSummary {
    TrajectoryCategory pattern = TrajectoryCategory::EES;
    std::size_t n = 0;
    double avg_cusum_step = 0.0;
    double avg_ruptures_step = 0.0;
};

inline std::vector<PatternSummary> summarize_patterns(
    const std::map<std::string, TrajectoryCategory>& categories,
    const std::map<std::string, std::pair<long long, long long>>&
        changepoints) {
    for (const auto& [name, cat] : categories) {
        if (!changepoints.count(name)) {
            throw ValidationError("summarize_patterns: class '" + name +
                                  "' has a category but no change points");
        }
        (void)cat;
    }
    for (const auto& [name, steps] : changepoints) {
        if (!categories.count(name)) {
            throw ValidationError("summarize_patterns: class '" + name +
                                  "' has change points but no category");
        }
        (void)steps;
    }

    std::map<TrajectoryCategory, std::vector<std::pair<double, double>>> acc;
    for (const auto& [name, cat] : categories) {
        const auto& [cusum, ruptures] = changepoints.at(name);
        acc[cat].emplace_back(static_cast<double>(cusum),
                              static_cast<double>(ruptures));
    }

    std::vector<PatternSummary> rows;
    for (TrajectoryCategory cat :
         {TrajectoryCategory::CES, TrajectoryCategory::CLS,
          TrajectoryCategory::EES, TrajectoryCategory::ELS}) {
        auto it = acc.find(cat);
        if (it == acc.end()) {
            continue;
        }
        PatternSummary row;
        row.pattern = cat;
        row.n = it->second.size();
        double sum_c = 0.0;
        double sum_r = 0.0;
        for (const auto& [c, r] : it->second) {
            sum_c += c;
            sum_r += r;
        }
        row.avg_cusum_step = sum_c / static_cast<double>(row.n);
        row.avg_ruptures_step = sum_r / static_cast<double>(row.n);
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<PatternSummary> summarize_fixture(
    const std::vector<FixtureChangePoints>& fixture) {
    std::map<std::string, TrajectoryCategory> categories;
    std::map<std::string, std::pair<long long, long long>> changepoints;
    for (const auto& row : fixture) {
        categories[row.class_name] = category_for_pattern(row.pattern);
        changepoints[row.class_name] = {row.cusum_step, row.ruptures_step};
    }
    return summarize_patterns(categories, changepoints);
}

// ---------------------------------------------------------------------------
// Statistical battery over fixture groups

struct PairwiseT {
    std::string group_a;
    std::string group_b;
    TestResult result;
};

struct FixtureStats {
    // Groups are the per-pattern CUSUM step samples.
    std::vector<std::pair<std::string, std::size_t>> group_sizes;
    TestResult anova;
    TestResult kruskal;
    std::vector<PairwiseT> pairwise;  // Welch two-sample t per group pair
};

inline FixtureStats fixture_stats(
    const std::vector<FixtureChangePoints>& fixture) {
    std::map<std::string, std::vector<double>> by_pattern;
    for (const auto& row : fixture) {
        by_pattern[to_string(category_for_pattern(row.pattern))].push_back(
            static_cast<double>(row.cusum_step));
    }
    if (by_pattern.size() < 2) {
        throw ValidationError(
            "fixture_stats: need at least two patterns to compare");
    }
    GroupedSamples groups;
    FixtureStats out;
    for (const auto& [name, values] : by_pattern) {
        groups.push_back({name, values});
        out.group_sizes.emplace_back(name, values.size());
    }
    out.anova = one_way_anova(groups);
    out.kruskal = kruskal_wallis(groups);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            PairwiseT pt;
            pt.group_a = groups[i].name;
            pt.group_b = groups[j].name;
            pt.result = two_sample_t(groups[i].values, groups[j].values);
            out.pairwise.push_back(std::move(pt));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral report rows

struct SpectralRow {
    long long step = 0;
    int layer = 0;
    MatrixKind kind = MatrixKind::Q;
    std::size_t rows = 0;
    std::size_t cols = 0;
    SpectralSummary summary;
};

struct CosineRow {
    int layer = 0;
    MatrixKind kind = MatrixKind::Q;
    long long step_a = 0;
    long long step_b = 0;
    double cosine = 0.0;
};

struct QkRow {
    long long step = 0;
    int layer = 0;
    double ratio = 0.0;
};

struct GapRow {
    long long step = 0;
    int layer = 0;
    MatrixKind kind = MatrixKind::Q;
};

struct SpectralReport {
    double tau = 0.99;
    std::vector<SpectralRow> matrices;
    std::vector<CosineRow> cosines;   // consecutive checkpoints, same slot
    std::vector<QkRow> qk_ratios;     // steps where both q and k exist
    std::vector<GapRow> gaps;         // expected slot missing at a step
};

inline SpectralReport build_spectral_report(
    const std::vector<WeightMatrix>& matrices, double tau = 0.99) {
    SpectralReport rep;
    rep.tau = tau;

    std::map<std::pair<int, int>, std::map<long long, const WeightMatrix*>>
        slots;  // (layer, kind) -> step -> matrix
    std::vector<long long> steps;
    for (const auto& w : matrices) {
        SpectralRow row;
        row.step = w.checkpoint_step;
        row.layer = w.layer;
        row.kind = w.kind;
        row.rows = w.rows;
        row.cols = w.cols;
        row.summary = summarize(w, tau);
        rep.matrices.push_back(row);
        slots[{w.layer, static_cast<int>(w.kind)}][w.checkpoint_step] = &w;
        steps.push_back(w.checkpoint_step);
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    std::sort(rep.matrices.begin(), rep.matrices.end(),
              [](const SpectralRow& a, const SpectralRow& b) {
                  return std::tuple(a.step, a.layer,
                                    static_cast<int>(a.kind)) <
                         std::tuple(b.step, b.layer, static_cast<int>(b.kind));
              });

    // A slot seen at any step is expected at every step; absences become
    // explicit gap rows instead of silent holes.
    for (long long step : steps) {
        for (const auto& [slot, by_step] : slots) {
            if (!by_step.count(step)) {
                rep.gaps.push_back(
                    {step, slot.first, static_cast<MatrixKind>(slot.second)});
            }
        }
    }
    std::sort(rep.gaps.begin(), rep.gaps.end(),
              [](const GapRow& a, const GapRow& b) {
                  return std::tuple(a.step, a.layer,
                                    static_cast<int>(a.kind)) <
                         std::tuple(b.step, b.layer, static_cast<int>(b.kind));
              });

    for (const auto& [slot, by_step] : slots) {
        const WeightMatrix* prev = nullptr;
        for (const auto& [step, w] : by_step) {
            if (prev != nullptr && prev->rows == w->rows &&
                prev->cols == w->cols) {
                CosineRow row;
                row.layer = slot.first;
                row.kind = static_cast<MatrixKind>(slot.second);
                row.step_a = prev->checkpoint_step;
                row.step_b = step;
                row.cosine = cosine_similarity(*prev, *w);
                rep.cosines.push_back(row);
            }
            prev = w;
        }
    }
    std::sort(rep.cosines.begin(), rep.cosines.end(),
              [](const CosineRow& a, const CosineRow& b) {
                  return std::tuple(a.layer, static_cast<int>(a.kind),
                                    a.step_a) <
                         std::tuple(b.layer, static_cast<int>(b.kind),
                                    b.step_a);
              });

    std::map<std::pair<long long, int>,
             std::pair<const WeightMatrix*, const WeightMatrix*>>
        qk;  // (step, layer) -> (q, k)
    for (const auto& w : matrices) {
        if (w.kind == MatrixKind::Q) {
            qk[{w.checkpoint_step, w.layer}].first = &w;
        } else if (w.kind == MatrixKind::K) {
            qk[{w.checkpoint_step, w.layer}].second = &w;
        }
    }
    for (const auto& [key, pair] : qk) {
        if (pair.first != nullptr && pair.second != nullptr) {
            rep.qk_ratios.push_back(
                {key.first, key.second, qk_ratio(*pair.first, *pair.second)});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON / CSV rendering. All output is assembled by hand so that field
// order, number formatting, and row order are fixed; nothing here depends
// on locale, hashing, or wall-clock state.

namespace detail {

inline std::string json_kv(const std::string& key, const std::string& raw) {
    return "\"" + key + "\":" + raw;
}

inline std::string json_str(const std::string& s) {
    return "\"" + json_escape(s) + "\"";
}

}  // namespace detail

inline std::string render_gaps_json(
    const std::map<std::string, GapSeries>& series) {
    std::ostringstream out;
    out << "{\"classes\":[";
    bool first_class = true;
    for (const auto& [name, s] : series) {
        if (!first_class) {
            out << ',';
        }
        first_class = false;
        out << "{\"class_name\":" << detail::json_str(name) << ",\"steps\":[";
        for (std::size_t i = 0; i < s.steps.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << s.steps[i];
        }
        out << "],\"gaps\":[";
        for (std::size_t i = 0; i < s.gaps.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << format_double(s.gaps[i]);
        }
        out << "]}";
    }
    out << "]}\n";
    return out.str();
}

inline std::string render_gaps_csv(
    const std::map<std::string, GapSeries>& series) {
    std::ostringstream out;
    out << "class,step,gap\n";
    for (const auto& [name, s] : series) {
        for (std::size_t i = 0; i < s.steps.size(); ++i) {
            out << name << ',' << s.steps[i] << ','
                << format_double(s.gaps[i]) << '\n';
        }
    }
    return out.str();
}

struct ClassChangePoint {
    ChangePointResult cusum;
    ChangePointResult segmentation;
    double penalty_used = 0.0;
    double bandwidth_used = 0.0;
};

namespace detail {

inline std::string changepoint_json(const ChangePointResult& r) {
    std::ostringstream out;
    out << "{\"detected\":" << (r.detected ? "true" : "false");
    out << ",\"index\":";
    if (r.index) {
        out << *r.index;
    } else {
        out << "null";
    }
    out << ",\"step\":";
    if (r.step) {
        out << *r.step;
    } else {
        out << "null";
    }
    out << ",\"statistic\":" << format_double(r.statistic);
    out << ",\"regime\":" << json_str(to_string(r.regime));
    out << ",\"breakpoints\":[";
    for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << r.breakpoints[i];
    }
    out << "]}";
    return out.str();
}

}  // namespace detail

inline std::string render_changepoints_json(
    const std::map<std::string, ClassChangePoint>& results) {
    std::ostringstream out;
    out << "{\"classes\":[";
    bool first = true;
    for (const auto& [name, r] : results) {
        if (!first) {
            out << ',';
        }
        first = false;
        out << "{\"class_name\":" << detail::json_str(name)
            << ",\"cusum\":" << detail::changepoint_json(r.cusum)
            << ",\"segmentation\":" << detail::changepoint_json(r.segmentation)
            << ",\"mean_gap\":" << format_double(r.cusum.mean_gap)
            << ",\"std_gap\":" << format_double(r.cusum.std_gap)
            << ",\"penalty\":" << format_double(r.penalty_used)
            << ",\"bandwidth\":" << format_double(r.bandwidth_used) << "}";
    }
    out << "]}\n";
    return out.str();
}

inline std::string render_changepoints_csv(
    const std::map<std::string, ClassChangePoint>& results) {
    std::ostringstream out;
    out << "class,cusum_detected,cusum_step,cusum_statistic,cusum_regime,"
           "seg_detected,seg_step,seg_breakpoints,mean_gap,std_gap\n";
    for (const auto& [name, r] : results) {
        out << name << ',' << (r.cusum.detected ? "yes" : "no") << ',';
        if (r.cusum.step) {
            out << *r.cusum.step;
        }
        out << ',' << format_double(r.cusum.statistic) << ','
            << to_string(r.cusum.regime) << ','
            << (r.segmentation.detected ? "yes" : "no") << ',';
        if (r.segmentation.step) {
            out << *r.segmentation.step;
        }
        out << ',';
        for (std::size_t i = 0; i < r.segmentation.breakpoints.size(); ++i) {
            if (i > 0) {
                out << ';';
            }
            out << r.segmentation.breakpoints[i];
        }
        out << ',' << format_double(r.cusum.mean_gap) << ','
            << format_double(r.cusum.std_gap) << '\n';
    }
    return out.str();
}

struct ClassCategory {
    SegmentMeans means;
    TrajectoryCategory category = TrajectoryCategory::EES;
};

inline std::string render_categories_json(
    const std::map<std::string, ClassCategory>& results) {
    std::ostringstream out;
    out << "{\"classes\":[";
    bool first = true;
    for (const auto& [name, r] : results) {
        if (!first) {
            out << ',';
        }
        first = false;
        out << "{\"class_name\":" << detail::json_str(name)
            << ",\"early_mean\":" << format_double(r.means.early_mean)
            << ",\"late_mean\":" << format_double(r.means.late_mean)
            << ",\"n_early\":" << r.means.n_early
            << ",\"n_late\":" << r.means.n_late << ",\"category\":"
            << detail::json_str(to_string(r.category)) << "}";
    }
    out << "]}\n";
    return out.str();
}

inline std::string render_categories_csv(
    const std::map<std::string, ClassCategory>& results) {
    std::ostringstream out;
    out << "class,early_mean,late_mean,n_early,n_late,category\n";
    for (const auto& [name, r] : results) {
        out << name << ',' << format_double(r.means.early_mean) << ','
            << format_double(r.means.late_mean) << ',' << r.means.n_early
            << ',' << r.means.n_late << ',' << to_string(r.category) << '\n';
    }
    return out.str();
}

inline std::string render_pattern_summary_json(
    const std::vector<PatternSummary>& rows) {
    std::ostringstream out;
    out << "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << "{\"pattern\":" << detail::json_str(to_string(rows[i].pattern))
            << ",\"n\":" << rows[i].n
            << ",\"avg_cusum_step\":" << format_double(rows[i].avg_cusum_step)
            << ",\"avg_ruptures_step\":"
            << format_double(rows[i].avg_ruptures_step) << "}";
    }
    out << "]}\n";
    return out.str();
}

inline std::string render_pattern_summary_csv(
    const std::vector<PatternSummary>& rows) {
    std::ostringstream out;
    out << "pattern,n,avg_cusum_step,avg_ruptures_step\n";
    for (const auto& r : rows) {
        out << to_string(r.pattern) << ',' << r.n << ','
            << format_double(r.avg_cusum_step) << ','
            << format_double(r.avg_ruptures_step) << '\n';
    }
    return out.str();
}

// Steps rendered as integers with thousands separators, for terminal
// display only; files keep full precision.
inline std::string format_thousands(double value) {
    long long v = std::llround(value);
    const bool neg = v < 0;
    std::string digits = std::to_string(neg ? -v : v);
    std::string grouped;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) {
            grouped += ',';
        }
        grouped += digits[i];
    }
    return neg ? "-" + grouped : grouped;
}

inline std::string render_pattern_summary_display(
    const std::vector<PatternSummary>& rows) {
    std::ostringstream out;
    out << "pattern  n   avg CUSUM step  avg segmentation step\n";
    for (const auto& r : rows) {
        std::string cusum = format_thousands(r.avg_cusum_step);
        std::string ruptures = format_thousands(r.avg_ruptures_step);
        out << to_string(r.pattern) << "      " << r.n;
        out << std::string(r.n < 10 ? 3 : 2, ' ');
        out << cusum << std::string(cusum.size() < 16 ? 16 - cusum.size() : 1,
                                    ' ');
        out << ruptures << '\n';
    }
    return out.str();
}

namespace detail {

inline std::string test_result_json(const TestResult& t,
                                    const char* stat_name) {
    std::ostringstream out;
    out << "{\"" << stat_name << "\":" << format_double(t.statistic)
        << ",\"df1\":" << format_double(t.df1)
        << ",\"df2\":" << format_double(t.df2)
        << ",\"p\":" << format_double(t.p_value) << "}";
    return out.str();
}

}  // namespace detail

inline std::string render_stats_json(const FixtureStats& s) {
    std::ostringstream out;
    out << "{\"groups\":\"cusum_steps_by_pattern\",\"group_sizes\":[";
    for (std::size_t i = 0; i < s.group_sizes.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << "{\"pattern\":" << detail::json_str(s.group_sizes[i].first)
            << ",\"n\":" << s.group_sizes[i].second << "}";
    }
    out << "],\"anova\":" << detail::test_result_json(s.anova, "f");
    out << ",\"kruskal_wallis\":"
        << detail::test_result_json(s.kruskal, "h");
    out << ",\"pairwise_t\":[";
    for (std::size_t i = 0; i < s.pairwise.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        const auto& pt = s.pairwise[i];
        out << "{\"a\":" << detail::json_str(pt.group_a)
            << ",\"b\":" << detail::json_str(pt.group_b)
            << ",\"variant\":\"welch\",\"t\":"
            << format_double(pt.result.statistic)
            << ",\"df\":" << format_double(pt.result.df1)
            << ",\"p\":" << format_double(pt.result.p_value) << "}";
    }
    out << "]}\n";
    return out.str();
}

inline std::string render_stats_csv(const FixtureStats& s) {
    std::ostringstream out;
    out << "test,groups,statistic,df1,df2,p\n";
    out << "anova,all," << format_double(s.anova.statistic) << ','
        << format_double(s.anova.df1) << ',' << format_double(s.anova.df2)
        << ',' << format_double(s.anova.p_value) << '\n';
    out << "kruskal_wallis,all," << format_double(s.kruskal.statistic) << ','
        << format_double(s.kruskal.df1) << ',' << format_double(s.kruskal.df2)
        << ',' << format_double(s.kruskal.p_value) << '\n';
    for (const auto& pt : s.pairwise) {
        out << "welch_t," << pt.group_a << ';' << pt.group_b << ','
            << format_double(pt.result.statistic) << ','
            << format_double(pt.result.df1) << ','
            << format_double(pt.result.df2) << ','
            << format_double(pt.result.p_value) << '\n';
    }
    return out.str();
}

inline std::string render_bigram_json(const BigramHypothesisReport& rep,
                                      int order, double addk, double backoff,
                                      const std::map<std::string, double>*
                                          full_order_gaps = nullptr) {
    std::ostringstream out;
    out << "{\"order\":" << order << ",\"addk\":" << format_double(addk)
        << ",\"backoff\":" << format_double(backoff) << ",\"verdicts\":[";
    for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        const auto& v = rep.verdicts[i];
        out << "{\"class_name\":" << detail::json_str(v.class_name)
            << ",\"ngram_gap\":" << format_double(v.ngram_gap_value)
            << ",\"ngram_sign\":" << v.ngram_gap_sign
            << ",\"neural_late_sign\":" << v.neural_late_sign
            << ",\"agrees\":" << (v.agrees ? "true" : "false")
            << ",\"pairs_agreeing\":" << v.pairs_agreeing
            << ",\"pairs_total\":" << v.pairs_total << "}";
    }
    out << "],\"skipped\":[";
    for (std::size_t i = 0; i < rep.skipped.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << detail::json_str(rep.skipped[i]);
    }
    out << "],\"summary\":[";
    bool first = true;
    for (const auto& [category, counts] : rep.summary) {
        if (!first) {
            out << ',';
        }
        first = false;
        out << "{\"category\":" << detail::json_str(category)
            << ",\"agree\":" << counts.first
            << ",\"disagree\":" << counts.second << "}";
    }
    out << "]";
    if (full_order_gaps != nullptr) {
        out << ",\"full_order_gaps\":[";
        first = true;
        for (const auto& [name, gap] : *full_order_gaps) {
            if (!first) {
                out << ',';
            }
            first = false;
            out << "{\"class_name\":" << detail::json_str(name)
                << ",\"gap\":" << format_double(gap) << "}";
        }
        out << "]";
    }
    out << "}\n";
    return out.str();
}

inline std::string render_bigram_csv(const BigramHypothesisReport& rep) {
    std::ostringstream out;
    out << "class,ngram_gap,ngram_sign,neural_late_sign,agrees,"
           "pairs_agreeing,pairs_total\n";
    for (const auto& v : rep.verdicts) {
        out << v.class_name << ',' << format_double(v.ngram_gap_value) << ','
            << v.ngram_gap_sign << ',' << v.neural_late_sign << ','
            << (v.agrees ? "yes" : "no") << ',' << v.pairs_agreeing << ','
            << v.pairs_total << '\n';
    }
    return out.str();
}

inline std::string render_spectral_json(const SpectralReport& rep) {
    std::ostringstream out;
    out << "{\"tau\":" << format_double(rep.tau) << ",\"matrices\":[";
    for (std::size_t i = 0; i < rep.matrices.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        const auto& r = rep.matrices[i];
        out << "{\"step\":" << r.step << ",\"layer\":" << r.layer
            << ",\"kind\":" << detail::json_str(to_string(r.kind))
            << ",\"rows\":" << r.rows << ",\"cols\":" << r.cols
            << ",\"frobenius\":" << format_double(r.summary.frobenius)
            << ",\"entry_mean\":" << format_double(r.summary.entry_mean)
            << ",\"entry_std\":" << format_double(r.summary.entry_std)
            << ",\"sigma_max\":" << format_double(r.summary.sigma_max)
            << ",\"sigma_min\":" << format_double(r.summary.sigma_min)
            << ",\"condition\":" << format_double(r.summary.condition)
            << ",\"effective_rank\":" << r.summary.effective_rank << "}";
    }
    out << "],\"gaps\":[";
    for (std::size_t i = 0; i < rep.gaps.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << "{\"step\":" << rep.gaps[i].step
            << ",\"layer\":" << rep.gaps[i].layer << ",\"kind\":"
            << detail::json_str(to_string(rep.gaps[i].kind)) << "}";
    }
    out << "],\"cosine\":[";
    for (std::size_t i = 0; i < rep.cosines.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        const auto& c = rep.cosines[i];
        out << "{\"layer\":" << c.layer
            << ",\"kind\":" << detail::json_str(to_string(c.kind))
            << ",\"step_a\":" << c.step_a << ",\"step_b\":" << c.step_b
            << ",\"cosine\":" << format_double(c.cosine) << "}";
    }
    out << "],\"qk_ratio\":[";
    for (std::size_t i = 0; i < rep.qk_ratios.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << "{\"step\":" << rep.qk_ratios[i].step
            << ",\"layer\":" << rep.qk_ratios[i].layer
            << ",\"ratio\":" << format_double(rep.qk_ratios[i].ratio) << "}";
    }
    out << "]}\n";
    return out.str();
}

inline std::string render_spectral_csv(const SpectralReport& rep) {
    std::ostringstream out;
    out << "step,layer,kind,rows,cols,frobenius,entry_mean,entry_std,"
           "sigma_max,sigma_min,condition,effective_rank\n";
    for (const auto& r : rep.matrices) {
        out << r.step << ',' << r.layer << ',' << to_string(r.kind) << ','
            << r.rows << ',' << r.cols << ','
            << format_double(r.summary.frobenius) << ','
            << format_double(r.summary.entry_mean) << ','
            << format_double(r.summary.entry_std) << ','
            << format_double(r.summary.sigma_max) << ','
            << format_double(r.summary.sigma_min) << ','
            << format_double(r.summary.condition) << ','
            << r.summary.effective_rank << '\n';
    }
    return out.str();
}

}  // namespace gaptrack

#endif  // GAPTRACK_REPORT_HPP
