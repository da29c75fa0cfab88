// End-to-end acceptance checks for the library and CLI. Each check prints
// one [PASS]/[FAIL] line; the process exits nonzero if any check fails.
//
// Usage: acceptance <cli-binary> <data-dir> <work-dir>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaptrack/changepoint.hpp"
#include "gaptrack/io.hpp"
#include "gaptrack/ngram.hpp"
#include "gaptrack/pipeline.hpp"
#include "gaptrack/spectral.hpp"
#include "gaptrack/trajectory.hpp"
#include "support/gram_oracle.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gaptrack;

namespace {

// Pinned tolerances.
constexpr double kStepAverageTol = 1.0;     // reference table averages
constexpr double kReportSeconds = 1.0;      // fixture report wall time
constexpr double kAnovaFTol = 0.01;         // |F - 8.25|
constexpr double kAnovaPMax = 0.005;
constexpr double kKruskalHTol = 0.05;       // |H - 11.89|
constexpr double kKruskalPMax = 0.01;
constexpr double kSearchSeconds = 30.0;     // exhaustive-equivalence budget
constexpr double kObjectiveTol = 1e-9;      // optimal-objective match
constexpr double kInvarianceTol = 1e-9;     // CUSUM shift/scale statistic
constexpr double kStepHeightTol = 1e-12;    // CUSUM step recovery
constexpr double kNormalizationTol = 1e-9;  // sum of n-gram probabilities
constexpr double kEnergyRelTol = 1e-6;      // frobenius^2 vs sum sigma^2
constexpr double kSvdOracleTol = 1e-8;      // Jacobi vs Gram oracle

struct Ctx {
    fs::path cli;
    fs::path data;
    fs::path work;
};

bool g_all_pass = true;

void report(int id, const std::string& name, bool ok,
            const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << name;
    if (!ok && !detail.empty()) {
        std::cout << " (" << detail << ")";
    }
    std::cout << "\n";
    if (!ok) {
        g_all_pass = false;
    }
}

int run_cli(const Ctx& ctx, const std::string& args) {
    const std::string cmd = "\"" + ctx.cli.string() + "\" " + args + " >> \"" +
                            (ctx.work / "cli_log.txt").string() + "\" 2>&1";
    return std::system(cmd.c_str());
}

json load_json(const fs::path& p) { return json::parse(read_text_file(p)); }

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

// ---------------------------------------------------------------------------
// 1..3: fixture report, ANOVA, Kruskal-Wallis

void check_fixture_report(const Ctx& ctx) {
    const fs::path out = ctx.work / "c1";
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = run_cli(
        ctx, "report --fixture " + quoted(ctx.data / "blimp_changepoints.csv") +
                 " --out " + quoted(out) + " --format json");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    std::string detail;
    bool ok = rc == 0;
    if (!ok) {
        detail = "cli exit " + std::to_string(rc);
    } else {
        struct Expected {
            std::size_t n;
            double cusum;
            double ruptures;
        };
        const std::map<std::string, Expected> expected = {
            {"CES", {34, 7351.0, 6234.0}},
            {"CLS", {9, 20367.0, 6994.0}},
            {"EES", {24, 5542.0, 6798.0}},
        };
        const json summary = load_json(out / "pattern_summary.json");
        std::map<std::string, json> rows;
        for (const auto& row : summary.at("rows")) {
            rows[row.at("pattern").get<std::string>()] = row;
        }
        ok = rows.size() == expected.size();
        if (!ok) {
            detail = "unexpected pattern rows";
        }
        for (const auto& [pattern, want] : expected) {
            if (!ok) {
                break;
            }
            auto it = rows.find(pattern);
            if (it == rows.end()) {
                ok = false;
                detail = "missing " + pattern + " row";
                break;
            }
            const std::size_t n = it->second.at("n").get<std::size_t>();
            const double cusum = it->second.at("avg_cusum_step").get<double>();
            const double ruptures =
                it->second.at("avg_ruptures_step").get<double>();
            if (n != want.n || std::abs(cusum - want.cusum) > kStepAverageTol ||
                std::abs(ruptures - want.ruptures) > kStepAverageTol) {
                ok = false;
                std::ostringstream msg;
                msg << pattern << ": n=" << n << " cusum=" << cusum
                    << " ruptures=" << ruptures;
                detail = msg.str();
            }
        }
        if (ok && secs >= kReportSeconds) {
            ok = false;
            detail = "took " + std::to_string(secs) + "s";
        }
    }
    report(1, "fixture report reproduces the reference pattern table", ok,
           detail);
}

void check_anova(const Ctx& ctx) {
    std::string detail;
    bool ok = true;
    try {
        const json stats = load_json(ctx.work / "c1" / "stats.json");
        const auto& a = stats.at("anova");
        const double f = a.at("f").get<double>();
        const double df1 = a.at("df1").get<double>();
        const double df2 = a.at("df2").get<double>();
        const double p = a.at("p").get<double>();
        ok = df1 == 2.0 && df2 == 64.0 && p < kAnovaPMax &&
             std::abs(f - 8.25) <= kAnovaFTol;
        if (!ok) {
            std::ostringstream msg;
            msg << "F=" << f << " df=(" << df1 << "," << df2 << ") p=" << p;
            detail = msg.str();
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(2, "fixture group ANOVA matches the reference values", ok, detail);
}

void check_kruskal(const Ctx& ctx) {
    std::string detail;
    bool ok = true;
    try {
        const json stats = load_json(ctx.work / "c1" / "stats.json");
        const auto& k = stats.at("kruskal_wallis");
        const double h = k.at("h").get<double>();
        const double p = k.at("p").get<double>();
        ok = std::abs(h - 11.89) <= kKruskalHTol && p < kKruskalPMax;
        if (!ok) {
            std::ostringstream msg;
            msg << "H=" << h << " p=" << p;
            detail = msg.str();
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(3, "fixture group Kruskal-Wallis matches the reference values", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 4: segmentation search vs exhaustive enumeration

void enumerate_segmentations(std::size_t from, std::size_t n,
                             std::vector<std::size_t>& current,
                             const SegmentCost& cost, double penalty,
                             double& best) {
    // Segments need at least two points; `from` is the start of the open
    // segment. Close it at n, or split at any legal p and recurse.
    double tail = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
        const std::size_t a = i == 0 ? 0 : current[i - 1];
        tail += cost(a, current[i]);
    }
    const std::size_t a = current.empty() ? 0 : current.back();
    const double whole =
        tail + cost(a, n) +
        penalty * static_cast<double>(current.size() + 1);
    if (whole < best) {
        best = whole;
    }
    for (std::size_t p = from + 2; p + 2 <= n; ++p) {
        current.push_back(p);
        enumerate_segmentations(p, n, current, cost, penalty, best);
        current.pop_back();
    }
}

double objective_of(const SegmentCost& cost, std::size_t n,
                    const std::vector<std::size_t>& bps, double penalty) {
    return segmentation_cost(cost, n, bps) +
           penalty * static_cast<double>(bps.size() + 1);
}

void check_search_optimality(const Ctx&) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240815);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::string detail;
    bool ok = true;

    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const std::size_t n = 5 + rng() % 8;  // 5..12
        Signal sig;
        double level = noise(rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (unif(rng) < 0.2) {
                level += 3.0 * noise(rng);
            }
            sig.values.push_back(level + 0.3 * noise(rng));
            sig.steps.push_back(static_cast<std::int64_t>(100 * (i + 1)));
        }
        const CostKind kind = trial % 2 == 0
                                  ? CostKind::l2()
                                  : CostKind::rbf(
                                        median_heuristic_bandwidth(sig));
        const double penalty = 0.05 + unif(rng) * default_penalty(sig);
        const auto bps = pelt(sig, kind, penalty);

        const SegmentCost cost(sig.values, kind);
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> scratch;
        enumerate_segmentations(0, n, scratch, cost, penalty, best);
        const double got = objective_of(cost, n, bps, penalty);
        if (std::abs(got - best) > kObjectiveTol * std::max(1.0, std::abs(best))) {
            ok = false;
            std::ostringstream msg;
            msg << "pelt trial " << trial << ": objective " << got << " vs "
                << best;
            detail = msg.str();
        }
    }

    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const std::size_t n = 5 + rng() % 16;  // 5..20
        Signal sig;
        for (std::size_t i = 0; i < n; ++i) {
            sig.values.push_back(noise(rng) + (i * 2 > n ? 1.5 : 0.0));
            sig.steps.push_back(static_cast<std::int64_t>(50 * (i + 1)));
        }
        const auto result = binseg(sig, CostKind::l2(), 1, 0.0);
        const SegmentCost cost(sig.values, CostKind::l2());
        std::size_t best_p = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t p = 2; p + 2 <= n; ++p) {
            const double c = cost(0, p) + cost(p, n);
            if (c < best_cost) {
                best_cost = c;
                best_p = p;
            }
        }
        if (result.breakpoints.size() != 1 ||
            result.breakpoints[0] != best_p) {
            ok = false;
            std::ostringstream msg;
            msg << "binseg trial " << trial << ": split "
                << (result.breakpoints.empty()
                        ? std::string("none")
                        : std::to_string(result.breakpoints[0]))
                << " vs " << best_p;
            detail = msg.str();
        }
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (ok && secs >= kSearchSeconds) {
        ok = false;
        detail = "took " + std::to_string(secs) + "s";
    }
    report(4, "segmentation search matches the exhaustive optimum", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 5: CUSUM properties

void check_cusum_properties(const Ctx&) {
    std::mt19937_64 rng(20240816);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::string detail;
    bool ok = true;

    for (int trial = 0; trial < 500 && ok; ++trial) {
        const std::size_t n = 6 + rng() % 35;  // 6..40
        const std::size_t trim = static_cast<std::size_t>(
            std::ceil(0.1 * static_cast<double>(n)));
        const std::size_t lo = std::max<std::size_t>(2, trim);
        const std::size_t hi = n - lo;

        // Step-function recovery on a clean two-level signal.
        const std::size_t boundary = lo + rng() % (hi - lo + 1);
        const double m1 = 4.0 * (unif(rng) - 0.5);
        double m2 = 4.0 * (unif(rng) - 0.5);
        if (std::abs(m2 - m1) < 0.1) {
            m2 = m1 + (m2 >= m1 ? 0.5 : -0.5);
        }
        Signal step;
        for (std::size_t i = 0; i < n; ++i) {
            step.values.push_back(i < boundary ? m1 : m2);
            step.steps.push_back(static_cast<std::int64_t>(10 * (i + 1)));
        }
        const auto hit = cusum_detect(step, 0.1);
        if (!hit.detected || !hit.index || *hit.index != boundary ||
            std::abs(hit.statistic - std::abs(m2 - m1)) > kStepHeightTol) {
            ok = false;
            std::ostringstream msg;
            msg << "step trial " << trial << ": index "
                << (hit.index ? std::to_string(*hit.index) : "none") << " vs "
                << boundary;
            detail = msg.str();
            break;
        }

        // Translation invariance and scale equivariance on a noisy signal.
        Signal sig;
        for (std::size_t i = 0; i < n; ++i) {
            sig.values.push_back(noise(rng) + (i >= boundary ? 2.0 : 0.0));
            sig.steps.push_back(static_cast<std::int64_t>(10 * (i + 1)));
        }
        const auto base = cusum_detect(sig, 0.1);

        const double shift = 10.0 * (unif(rng) - 0.5);
        Signal shifted = sig;
        for (double& v : shifted.values) {
            v += shift;
        }
        const auto moved = cusum_detect(shifted, 0.1);
        if (moved.index != base.index ||
            std::abs(moved.statistic - base.statistic) >
                kInvarianceTol * std::max(1.0, std::abs(base.statistic))) {
            ok = false;
            detail = "translation changed the detection at trial " +
                     std::to_string(trial);
            break;
        }

        const double scale = (unif(rng) < 0.5 ? -1.0 : 1.0) *
                             (0.5 + 4.0 * unif(rng));
        Signal scaled = sig;
        for (double& v : scaled.values) {
            v *= scale;
        }
        const auto stretched = cusum_detect(scaled, 0.1);
        if (stretched.index != base.index ||
            std::abs(stretched.statistic -
                     std::abs(scale) * base.statistic) >
                kInvarianceTol *
                    std::max(1.0, std::abs(scale) * base.statistic)) {
            ok = false;
            detail = "scaling changed the detection at trial " +
                     std::to_string(trial);
            break;
        }
    }
    report(5, "CUSUM invariances and exact step recovery", ok, detail);
}

// ---------------------------------------------------------------------------
// 6: synthetic taxonomy

void check_taxonomy(const Ctx& ctx) {
    const fs::path out = ctx.work / "c6";
    std::string detail;
    bool ok = run_cli(ctx, "categorize --scores " +
                               quoted(ctx.data / "synthetic_scores.jsonl") +
                               " --out " + quoted(out) + " --format json") ==
              0;
    if (!ok) {
        detail = "cli failed";
    } else {
        try {
            std::map<std::string, std::string> planted;
            const std::string labels =
                read_text_file(ctx.data / "synthetic_labels.csv");
            std::istringstream in(labels);
            std::string line;
            std::getline(in, line);  // header
            while (std::getline(in, line)) {
                if (line.empty()) {
                    continue;
                }
                const auto c1 = line.find(',');
                const auto c2 = line.find(',', c1 + 1);
                planted[line.substr(0, c1)] =
                    line.substr(c1 + 1, c2 - c1 - 1);
            }

            const json cats = load_json(out / "categories.json");
            std::size_t matched = 0;
            bool saw_els = false;
            for (const auto& row : cats.at("classes")) {
                const std::string name =
                    row.at("class_name").get<std::string>();
                const std::string got =
                    row.at("category").get<std::string>();
                if (got == "ELS") {
                    saw_els = true;
                }
                if (planted.count(name) && planted.at(name) == got) {
                    ++matched;
                }
            }
            ok = matched == planted.size() && planted.size() == 10 &&
                 !saw_els;
            if (!ok) {
                detail = std::to_string(matched) + "/" +
                         std::to_string(planted.size()) + " matched" +
                         (saw_els ? ", ELS present" : "");
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
    }
    report(6, "planted trajectory categories recovered with no ELS", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 7: n-gram model

void check_ngram(const Ctx& ctx) {
    std::string detail;
    bool ok = true;
    try {
        // Probabilities over the vocabulary sum to one for seen contexts.
        const auto corpus = read_corpus(ctx.data / "toy_corpus.txt");
        const NGramModel model = train(corpus, 2, 0.4, 0.5);
        const std::vector<std::vector<std::string>> contexts = {
            {}, {"the"}, {"cat"}, {"sat"}, {"<s>"}};
        for (const auto& ctx_tokens : contexts) {
            double total = 0.0;
            for (const auto& token : model.vocab) {
                total += prob(model, token, ctx_tokens);
            }
            if (std::abs(total - 1.0) > kNormalizationTol) {
                ok = false;
                detail = "normalization off by " +
                         std::to_string(total - 1.0);
                break;
            }
        }

        // A single-sentence corpus scores itself with zero NLL at addk=0.
        if (ok) {
            const NGramModel solo = train({"a b c d"}, 2, 0.4, 0.0);
            const auto nll = sentence_nll_bigram(solo, "a b c d");
            if (nll.total != 0.0) {
                ok = false;
                detail = "self NLL " + std::to_string(nll.total);
            }
        }

        // The bundled four-class suite splits two agree / two disagree.
        if (ok) {
            const fs::path out = ctx.work / "c7";
            ok = run_cli(ctx,
                         "bigram --scores " +
                             quoted(ctx.data / "synthetic_scores.jsonl") +
                             " --corpus " + quoted(ctx.data / "toy_corpus.txt") +
                             " --pairs " + quoted(ctx.data / "toy_pairs.jsonl") +
                             " --out " + quoted(out) + " --format json") == 0;
            if (!ok) {
                detail = "cli failed";
            } else {
                const json rep = load_json(out / "bigram.json");
                std::size_t agree = 0;
                std::size_t disagree = 0;
                for (const auto& v : rep.at("verdicts")) {
                    (v.at("agrees").get<bool>() ? agree : disagree) += 1;
                }
                ok = agree == 2 && disagree == 2;
                if (!ok) {
                    detail = std::to_string(agree) + " agree, " +
                             std::to_string(disagree) + " disagree";
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(7, "n-gram normalization, self-score, and paired verdicts", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 8: spectral identities

void check_spectral(const Ctx&) {
    std::mt19937_64 rng(20240817);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::string detail;
    bool ok = true;

    for (int trial = 0; trial < 200 && ok; ++trial) {
        WeightMatrix w;
        w.rows = 1 + rng() % 16;
        w.cols = 1 + rng() % 16;
        for (std::size_t i = 0; i < w.rows * w.cols; ++i) {
            w.entries.push_back(gauss(rng));
        }
        const double frob = frobenius(w);
        const auto sv = singular_values(w);
        double energy = 0.0;
        for (double s : sv) {
            energy += s * s;
        }
        if (std::abs(energy - frob * frob) >
            kEnergyRelTol * std::max(1.0, frob * frob)) {
            ok = false;
            detail = "energy mismatch at trial " + std::to_string(trial);
        }
    }

    for (int trial = 0; trial < 100 && ok; ++trial) {
        WeightMatrix w;
        w.rows = 2 + rng() % 7;
        w.cols = 2 + rng() % 7;
        for (std::size_t i = 0; i < w.rows * w.cols; ++i) {
            w.entries.push_back(gauss(rng));
        }
        const auto sv = singular_values(w);
        const auto ref =
            gram_oracle::singular_values_oracle(w.entries, w.rows, w.cols);
        if (sv.size() != ref.size()) {
            ok = false;
            detail = "rank count mismatch";
            break;
        }
        for (std::size_t i = 0; i < sv.size(); ++i) {
            if (std::abs(sv[i] - ref[i]) > kSvdOracleTol) {
                ok = false;
                detail = "sigma[" + std::to_string(i) + "] off by " +
                         std::to_string(sv[i] - ref[i]);
                break;
            }
        }
    }

    if (ok) {
        WeightMatrix eye;
        eye.rows = 100;
        eye.cols = 100;
        eye.entries.assign(10000, 0.0);
        for (std::size_t i = 0; i < 100; ++i) {
            eye.at(i, i) = 1.0;
        }
        const auto sv = singular_values(eye);
        if (effective_rank(sv, 0.99) != 99) {
            ok = false;
            detail = "identity effective rank " +
                     std::to_string(effective_rank(sv, 0.99));
        }
    }

    for (int trial = 0; trial < 20 && ok; ++trial) {
        WeightMatrix w;
        w.rows = 3 + rng() % 6;
        w.cols = 3 + rng() % 6;
        for (std::size_t i = 0; i < w.rows * w.cols; ++i) {
            w.entries.push_back(gauss(rng));
        }
        if (qk_ratio(w, w) != 1.0) {
            ok = false;
            detail = "self ratio not one";
        }
    }
    report(8, "spectral identities against the independent oracle", ok,
           detail);
}

// ---------------------------------------------------------------------------
// 9: deterministic bundles

std::uint64_t fnv1a(std::uint64_t h, const std::string& bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_tree(const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            files.push_back(fs::relative(entry.path(), root));
        }
    }
    std::sort(files.begin(), files.end());
    std::uint64_t h = 14695981039346656037ull;
    for (const auto& f : files) {
        h = fnv1a(h, f.string());
        h = fnv1a(h, read_text_file(root / f));
    }
    return h;
}

void check_determinism(const Ctx& ctx) {
    const std::string inputs =
        "all --scores " + quoted(ctx.data / "synthetic_scores.jsonl") +
        " --fixture " + quoted(ctx.data / "blimp_changepoints.csv") +
        " --corpus " + quoted(ctx.data / "toy_corpus.txt") + " --pairs " +
        quoted(ctx.data / "toy_pairs.jsonl") + " --checkpoints " +
        quoted(ctx.data / "checkpoints") + " --format both";
    std::string detail;
    bool ok = run_cli(ctx, inputs + " --out " + quoted(ctx.work / "c9a")) == 0;
    ok = ok &&
         run_cli(ctx, inputs + " --out " + quoted(ctx.work / "c9b")) == 0;
    if (!ok) {
        detail = "cli failed";
    } else {
        const std::uint64_t ha = hash_tree(ctx.work / "c9a");
        const std::uint64_t hb = hash_tree(ctx.work / "c9b");
        ok = ha == hb;
        if (!ok) {
            std::ostringstream msg;
            msg << std::hex << ha << " vs " << hb;
            detail = msg.str();
        }
    }
    report(9, "two full runs produce byte-identical bundles", ok, detail);
}

// ---------------------------------------------------------------------------
// 10: antisymmetry under good/bad swap

void check_antisymmetry(const Ctx& ctx) {
    std::string detail;
    bool ok = true;
    try {
        const auto scores =
            read_scores(ctx.data / "synthetic_scores.jsonl");
        auto swapped = scores;
        for (auto& r : swapped) {
            std::swap(r.nll_good, r.nll_bad);
            std::swap(r.n_tokens_good, r.n_tokens_bad);
        }
        const auto orig = stage_gaps(scores, GapAggregate::SumPpl);
        const auto flip = stage_gaps(swapped, GapAggregate::SumPpl);
        const std::map<TrajectoryCategory, TrajectoryCategory> mirror = {
            {TrajectoryCategory::EES, TrajectoryCategory::CES},
            {TrajectoryCategory::CES, TrajectoryCategory::EES},
            {TrajectoryCategory::CLS, TrajectoryCategory::ELS},
            {TrajectoryCategory::ELS, TrajectoryCategory::CLS},
        };
        for (const auto& [name, series] : orig) {
            const auto& other = flip.at(name);
            for (std::size_t i = 0; i < series.gaps.size() && ok; ++i) {
                if (other.gaps[i] != -series.gaps[i]) {
                    ok = false;
                    detail = "gap not negated for " + name;
                }
            }
            if (!ok) {
                break;
            }
            const auto a = categorize(segment_means(series));
            const auto b = categorize(segment_means(other));
            if (mirror.at(a) != b) {
                ok = false;
                detail = "category did not mirror for " + name;
                break;
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(10, "swapping good and bad negates gaps and mirrors categories",
           ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance <cli-binary> <data-dir> <work-dir>\n";
        return 2;
    }
    Ctx ctx{argv[1], argv[2], argv[3]};
    std::error_code ec;
    fs::remove_all(ctx.work, ec);
    fs::create_directories(ctx.work);

    check_fixture_report(ctx);
    check_anova(ctx);
    check_kruskal(ctx);
    check_search_optimality(ctx);
    check_cusum_properties(ctx);
    check_taxonomy(ctx);
    check_ngram(ctx);
    check_spectral(ctx);
    check_determinism(ctx);
    check_antisymmetry(ctx);

    std::cout << (g_all_pass ? "all checks passed\n"
                             : "some checks FAILED\n");
    return g_all_pass ? 0 : 1;
}
