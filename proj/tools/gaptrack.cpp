#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "gaptrack/pipeline.hpp"

namespace {

struct Flags {
    std::string scores;
    std::string fixture;
    std::string corpus;
    std::string pairs;
    std::string checkpoints;
    std::string out = "gaptrack_out";
    double trim_frac = 0.1;
    std::string penalty = "auto";
    std::string cost = "rbf";
    std::string bandwidth = "median";
    std::string segmenter = "binseg";
    int order = 2;
    double addk = 0.5;
    double backoff = 0.4;
    double early_frac = 0.3;
    double late_frac = 0.3;
    double tau = 0.99;
    std::string aggregate = "sum";
    std::string format = "json";
};

void add_options(CLI::App* sub, Flags& f) {
    sub->add_option("--scores", f.scores,
                    "per-pair NLL scores across checkpoints (JSONL)");
    sub->add_option("--fixture", f.fixture,
                    "reference change-point table (CSV)");
    sub->add_option("--corpus", f.corpus,
                    "training corpus, one sentence per line");
    sub->add_option("--pairs", f.pairs, "minimal sentence pairs (JSONL)");
    sub->add_option("--checkpoints", f.checkpoints,
                    "directory of step_*/layer_*/{q,k,v,o}.wmat matrices");
    sub->add_option("--trim-frac", f.trim_frac,
                    "fraction of each end excluded from CUSUM candidates")
        ->capture_default_str();
    sub->add_option("--penalty", f.penalty,
                    "segmentation penalty, or 'auto' for 2*var*log(T)")
        ->capture_default_str();
    sub->add_option("--cost", f.cost, "segment cost model")
        ->check(CLI::IsMember({"l2", "rbf"}))
        ->capture_default_str();
    sub->add_option("--bandwidth", f.bandwidth,
                    "rbf bandwidth, or 'median' for the median heuristic")
        ->capture_default_str();
    sub->add_option("--segmenter", f.segmenter, "segmentation search")
        ->check(CLI::IsMember({"binseg", "pelt"}))
        ->capture_default_str();
    sub->add_option("--order", f.order, "n-gram order")
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    sub->add_option("--addk", f.addk, "add-k smoothing constant")
        ->capture_default_str();
    sub->add_option("--backoff", f.backoff, "backoff discount factor")
        ->capture_default_str();
    sub->add_option("--early-frac", f.early_frac,
                    "fraction of checkpoints in the early segment")
        ->capture_default_str();
    sub->add_option("--late-frac", f.late_frac,
                    "fraction of checkpoints in the late segment")
        ->capture_default_str();
    sub->add_option("--tau", f.tau,
                    "cumulative energy threshold for effective rank")
        ->capture_default_str();
    sub->add_option("--aggregate", f.aggregate,
                    "class gap aggregation: summed or mean-log perplexity")
        ->check(CLI::IsMember({"sum", "meanlog"}))
        ->capture_default_str();
    sub->add_option("--out", f.out, "output directory")
        ->capture_default_str();
    sub->add_option("--format", f.format, "report file format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
}

gaptrack::RunConfig to_config(const Flags& f) {
    gaptrack::RunConfig cfg;
    auto path_of = [](const std::string& s)
        -> std::optional<std::filesystem::path> {
        if (s.empty()) {
            return std::nullopt;
        }
        return std::filesystem::path(s);
    };
    cfg.scores_path = path_of(f.scores);
    cfg.fixture_path = path_of(f.fixture);
    cfg.corpus_path = path_of(f.corpus);
    cfg.pairs_path = path_of(f.pairs);
    cfg.checkpoints_dir = path_of(f.checkpoints);
    cfg.out_dir = f.out;
    cfg.trim_frac = f.trim_frac;
    if (f.penalty != "auto") {
        cfg.penalty = gaptrack::parse_double(f.penalty, "--penalty");
    }
    cfg.cost_kind = f.cost == "l2" ? gaptrack::CostKind::Kind::L2
                                   : gaptrack::CostKind::Kind::Rbf;
    if (f.bandwidth != "median") {
        cfg.bandwidth = gaptrack::parse_double(f.bandwidth, "--bandwidth");
    }
    cfg.segmenter = f.segmenter == "pelt" ? gaptrack::Segmenter::Pelt
                                          : gaptrack::Segmenter::Binseg;
    cfg.order = f.order;
    cfg.addk = f.addk;
    cfg.backoff_factor = f.backoff;
    cfg.early_frac = f.early_frac;
    cfg.late_frac = f.late_frac;
    cfg.tau = f.tau;
    cfg.aggregate = f.aggregate == "meanlog"
                        ? gaptrack::GapAggregate::MeanLogPpl
                        : gaptrack::GapAggregate::SumPpl;
    cfg.format = f.format;
    return cfg;
}

void print_error(const char* kind, const std::string& message) {
    std::cerr << "{\"error\":\"" << kind << "\",\"message\":\""
              << gaptrack::json_escape(message) << "\"}\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Perplexity-gap trajectory analysis for minimal-pair benchmarks"};
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"gaps", "build per-class log perplexity gap series"},
        {"changepoint", "locate gap change points per class"},
        {"categorize", "assign trajectory categories from segment means"},
        {"stats", "pattern summary and group statistics from a fixture"},
        {"bigram", "test whether bigram statistics predict late gap signs"},
        {"spectral", "singular value diagnostics of checkpoint matrices"},
        {"report", "fixture summary table plus per-class outputs and plots"},
        {"all", "every stage whose inputs were provided"},
    };
    for (const auto& [name, description] : subcommands) {
        add_options(app.add_subcommand(name, description), flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        gaptrack::RunConfig cfg = to_config(flags);
        if (sub == "gaps" || sub == "changepoint" || sub == "categorize" ||
            sub == "stats" || sub == "bigram" || sub == "spectral") {
            cfg.stages = {sub};
        } else if (sub == "report") {
            cfg.stages = {"stats"};
            if (cfg.scores_path) {
                cfg.stages.insert(
                    {"gaps", "changepoint", "categorize", "plots"});
            }
        } else {  // all
            if (cfg.scores_path) {
                cfg.stages.insert(
                    {"gaps", "changepoint", "categorize", "plots"});
            }
            if (cfg.fixture_path) {
                cfg.stages.insert("stats");
            }
            if (cfg.corpus_path || cfg.pairs_path) {
                cfg.stages.insert("bigram");
            }
            if (cfg.checkpoints_dir) {
                cfg.stages.insert("spectral");
            }
        }

        gaptrack::PipelineResult res = gaptrack::run_pipeline(cfg);
        if (!res.display.empty()) {
            std::cout << res.display;
        }
        std::cout << "wrote " << res.files.size() << " files under "
                  << cfg.out_dir.string() << "\n";
        return 0;
    } catch (const gaptrack::ValidationError& e) {
        print_error("validation", e.what());
        return 1;
    } catch (const gaptrack::IoError& e) {
        print_error("io", e.what());
        return 2;
    } catch (const gaptrack::InternalError& e) {
        print_error("internal", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 3;
    }
}
