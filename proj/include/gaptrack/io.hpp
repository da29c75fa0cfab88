#ifndef GAPTRACK_IO_HPP
#define GAPTRACK_IO_HPP

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "gaptrack/errors.hpp"
#include "gaptrack/spectral.hpp"
#include "gaptrack/trajectory.hpp"

namespace gaptrack {

// Serializes a double with up to 17 significant digits, enough that parsing
// the text recovers the exact bit pattern. Locale-independent.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value,
                             std::chars_format::general, 17);
    if (res.ec != std::errc()) {
        throw InternalError("format_double: to_chars failed");
    }
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ValidationError(what + ": not a real number: '" +
                              std::string(text) + "'");
    }
    return value;
}

inline long long parse_int(std::string_view text, const std::string& what) {
    long long value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ValidationError(what + ": not an integer: '" +
                              std::string(text) + "'");
    }
    return value;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x",
                                  static_cast<unsigned>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed on " + path.string());
    }
    return buf.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " +
                          path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string::size_type pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
    }
    return lines;
}

inline bool blank(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pair scores (JSONL)

// One JSON object per line with exactly these keys: class_name, pair_id,
// checkpoint_step, nll_good, n_tokens_good, nll_bad, n_tokens_bad.
inline std::vector<PairScore> read_scores(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const auto lines = detail::split_lines(text);

    static const std::vector<std::string> kKeys = {
        "class_name", "pair_id",      "checkpoint_step", "nll_good",
        "n_tokens_good", "nll_bad",   "n_tokens_bad"};

    std::vector<PairScore> records;
    std::map<std::tuple<std::string, long long, long long>, std::size_t> seen;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string& line = lines[i];
        if (detail::blank(line)) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": invalid JSON: " + e.what());
        }
        auto fail = [&](const std::string& msg) -> ValidationError {
            return ValidationError(path.string() + ":" +
                                   std::to_string(lineno) + ": " + msg);
        };
        if (!obj.is_object()) {
            throw fail("expected a JSON object");
        }
        for (const auto& key : kKeys) {
            if (!obj.contains(key)) {
                throw fail("missing key '" + key + "'");
            }
        }
        if (obj.size() != kKeys.size()) {
            for (const auto& item : obj.items()) {
                if (std::find(kKeys.begin(), kKeys.end(), item.key()) ==
                    kKeys.end()) {
                    throw fail("unexpected key '" + item.key() + "'");
                }
            }
        }

        PairScore rec;
        try {
            rec.class_name = obj.at("class_name").get<std::string>();
            rec.pair_id = obj.at("pair_id").get<long long>();
            rec.checkpoint_step = obj.at("checkpoint_step").get<long long>();
            rec.nll_good = obj.at("nll_good").get<double>();
            rec.n_tokens_good = obj.at("n_tokens_good").get<long long>();
            rec.nll_bad = obj.at("nll_bad").get<double>();
            rec.n_tokens_bad = obj.at("n_tokens_bad").get<long long>();
        } catch (const nlohmann::json::exception& e) {
            throw fail(std::string("bad field type: ") + e.what());
        }
        if (rec.class_name.empty()) {
            throw fail("class_name must be non-empty");
        }
        if (!std::isfinite(rec.nll_good) || !std::isfinite(rec.nll_bad)) {
            throw fail("nll values must be finite");
        }
        if (rec.n_tokens_good < 1 || rec.n_tokens_bad < 1) {
            throw fail("token counts must be >= 1");
        }
        if (rec.checkpoint_step < 0) {
            throw fail("checkpoint_step must be >= 0");
        }

        auto key = std::make_tuple(rec.class_name, rec.pair_id,
                                   rec.checkpoint_step);
        auto [it, inserted] = seen.emplace(key, lineno);
        if (!inserted) {
            throw ValidationError(
                path.string() + ": duplicate (class_name, pair_id, "
                "checkpoint_step) = (" + rec.class_name + ", " +
                std::to_string(rec.pair_id) + ", " +
                std::to_string(rec.checkpoint_step) + ") on lines " +
                std::to_string(it->second) + " and " + std::to_string(lineno));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::string scores_to_jsonl(const std::vector<PairScore>& records) {
    std::ostringstream out;
    for (const auto& r : records) {
        out << "{\"class_name\":\"" << json_escape(r.class_name)
            << "\",\"pair_id\":" << r.pair_id
            << ",\"checkpoint_step\":" << r.checkpoint_step
            << ",\"nll_good\":" << format_double(r.nll_good)
            << ",\"n_tokens_good\":" << r.n_tokens_good
            << ",\"nll_bad\":" << format_double(r.nll_bad)
            << ",\"n_tokens_bad\":" << r.n_tokens_bad << "}\n";
    }
    return out.str();
}

inline void write_scores(const std::filesystem::path& path,
                         const std::vector<PairScore>& records) {
    write_text_file(path, scores_to_jsonl(records));
}

// ---------------------------------------------------------------------------
// Reference change-point fixture (CSV)

struct FixtureChangePoints {
    std::string class_name;
    long long cusum_step = 0;
    long long ruptures_step = 0;
    bool correct_direction = false;
    // One of: early_correct, late_separation, early_erroneous.
    std::string pattern;
};

inline TrajectoryCategory category_for_pattern(const std::string& pattern) {
    if (pattern == "early_correct") return TrajectoryCategory::CES;
    if (pattern == "late_separation") return TrajectoryCategory::CLS;
    if (pattern == "early_erroneous") return TrajectoryCategory::EES;
    throw ValidationError("unknown pattern label: '" + pattern + "'");
}

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace detail

inline std::vector<FixtureChangePoints> read_fixture_changepoints(
    const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const auto lines = detail::split_lines(text);
    if (lines.empty() || detail::blank(lines[0])) {
        throw ValidationError(path.string() + ": missing header row");
    }
    if (lines[0] != "class,cusum,ruptures,correct,pattern") {
        throw ValidationError(path.string() +
                              ":1: header must be exactly "
                              "'class,cusum,ruptures,correct,pattern'");
    }

    std::vector<FixtureChangePoints> rows;
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (detail::blank(lines[i])) {
            continue;
        }
        auto fail = [&](const std::string& msg) -> ValidationError {
            return ValidationError(path.string() + ":" +
                                   std::to_string(lineno) + ": " + msg);
        };
        auto fields = detail::split_csv_row(lines[i]);
        if (fields.size() != 5) {
            throw fail("expected 5 fields, got " +
                       std::to_string(fields.size()));
        }
        FixtureChangePoints row;
        row.class_name = fields[0];
        if (row.class_name.empty()) {
            throw fail("class must be non-empty");
        }
        row.cusum_step = parse_int(fields[1], "cusum");
        row.ruptures_step = parse_int(fields[2], "ruptures");
        if (fields[3] == "yes" || fields[3] == "Yes") {
            row.correct_direction = true;
        } else if (fields[3] == "no" || fields[3] == "No") {
            row.correct_direction = false;
        } else {
            throw fail("correct must be yes or no, got '" + fields[3] + "'");
        }
        row.pattern = fields[4];
        category_for_pattern(row.pattern);  // reject unknown labels
        if (!row.correct_direction && (row.pattern == "early_correct" ||
                                       row.pattern == "late_separation")) {
            throw fail("pattern '" + row.pattern +
                       "' requires correct=yes");
        }

        auto [it, inserted] = seen.emplace(row.class_name, lineno);
        if (!inserted) {
            throw ValidationError(path.string() + ": duplicate class '" +
                                  row.class_name + "' on lines " +
                                  std::to_string(it->second) + " and " +
                                  std::to_string(lineno));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string fixture_to_csv(const std::vector<FixtureChangePoints>& rows) {
    std::ostringstream out;
    out << "class,cusum,ruptures,correct,pattern\n";
    for (const auto& r : rows) {
        out << r.class_name << ',' << r.cusum_step << ',' << r.ruptures_step
            << ',' << (r.correct_direction ? "Yes" : "No") << ',' << r.pattern
            << '\n';
    }
    return out.str();
}

inline void write_fixture_changepoints(
    const std::filesystem::path& path,
    const std::vector<FixtureChangePoints>& rows) {
    write_text_file(path, fixture_to_csv(rows));
}

// ---------------------------------------------------------------------------
// Weight matrices

// Binary layout: "WMAT" magic, then rows and cols as little-endian uint32,
// then rows*cols doubles (little-endian IEEE 754) in row-major order.
inline WeightMatrix read_wmat(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed on " + path.string());
    }
    if (bytes.size() < 12 || bytes.compare(0, 4, "WMAT") != 0) {
        throw ValidationError(path.string() + ": not a WMAT file");
    }
    auto read_u32 = [&](std::size_t off) {
        std::uint32_t v = 0;
        for (int b = 3; b >= 0; --b) {
            v = (v << 8) | static_cast<unsigned char>(bytes[off + b]);
        }
        return v;
    };
    const std::uint32_t rows = read_u32(4);
    const std::uint32_t cols = read_u32(8);
    if (rows == 0 || cols == 0) {
        throw ValidationError(path.string() + ": zero dimension");
    }
    const std::uint64_t n = static_cast<std::uint64_t>(rows) * cols;
    if (n > (1u << 24)) {
        throw ValidationError(path.string() + ": matrix too large (" +
                              std::to_string(rows) + "x" +
                              std::to_string(cols) + ")");
    }
    if (bytes.size() != 12 + 8 * n) {
        throw ValidationError(path.string() + ": expected " +
                              std::to_string(12 + 8 * n) + " bytes, got " +
                              std::to_string(bytes.size()));
    }

    WeightMatrix w;
    w.rows = rows;
    w.cols = cols;
    w.entries.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t u = 0;
        const std::size_t off = 12 + 8 * i;
        for (int b = 7; b >= 0; --b) {
            u = (u << 8) | static_cast<unsigned char>(bytes[off + b]);
        }
        w.entries[i] = std::bit_cast<double>(u);
        if (!std::isfinite(w.entries[i])) {
            throw ValidationError(path.string() + ": non-finite entry at " +
                                  std::to_string(i));
        }
    }
    return w;
}

inline void write_wmat(const std::filesystem::path& path,
                       const WeightMatrix& w) {
    w.validate();
    std::string bytes;
    bytes.reserve(12 + 8 * w.entries.size());
    bytes += "WMAT";
    auto push_u32 = [&](std::uint32_t v) {
        for (int b = 0; b < 4; ++b) {
            bytes += static_cast<char>((v >> (8 * b)) & 0xff);
        }
    };
    push_u32(static_cast<std::uint32_t>(w.rows));
    push_u32(static_cast<std::uint32_t>(w.cols));
    for (double x : w.entries) {
        const std::uint64_t u = std::bit_cast<std::uint64_t>(x);
        for (int b = 0; b < 8; ++b) {
            bytes += static_cast<char>((u >> (8 * b)) & 0xff);
        }
    }
    write_text_file(path, bytes);
}

// CSV alternative: one matrix row per line, entries comma-separated.
inline WeightMatrix read_matrix_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const auto lines = detail::split_lines(text);
    WeightMatrix w;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (detail::blank(lines[i])) {
            continue;
        }
        auto fields = detail::split_csv_row(lines[i]);
        if (w.cols == 0) {
            w.cols = fields.size();
        } else if (fields.size() != w.cols) {
            throw ValidationError(path.string() + ":" + std::to_string(i + 1) +
                                  ": ragged row (" +
                                  std::to_string(fields.size()) + " vs " +
                                  std::to_string(w.cols) + " entries)");
        }
        for (const auto& f : fields) {
            w.entries.push_back(parse_double(
                f, path.string() + ":" + std::to_string(i + 1)));
        }
        ++w.rows;
    }
    if (w.rows == 0) {
        throw ValidationError(path.string() + ": empty matrix");
    }
    return w;
}

// Walks root/step_<t>/layer_<l>/<q|k|v|o>.wmat (or .csv). Directories or
// matrices that are absent are simply not reported; the caller decides how
// to surface gaps. Results are sorted by (step, layer, kind).
inline std::vector<WeightMatrix> scan_checkpoints(
    const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) {
        throw IoError("checkpoint directory not found: " + root.string());
    }
    auto suffix_int = [](const std::string& name, const std::string& prefix)
        -> std::optional<long long> {
        if (name.size() <= prefix.size() ||
            name.compare(0, prefix.size(), prefix) != 0) {
            return std::nullopt;
        }
        const std::string tail = name.substr(prefix.size());
        long long v = 0;
        auto res = std::from_chars(tail.data(), tail.data() + tail.size(), v);
        if (res.ec != std::errc() || res.ptr != tail.data() + tail.size()) {
            return std::nullopt;
        }
        return v;
    };

    std::vector<WeightMatrix> out;
    for (const auto& step_entry : fs::directory_iterator(root)) {
        if (!step_entry.is_directory()) continue;
        auto step = suffix_int(step_entry.path().filename().string(), "step_");
        if (!step) continue;
        for (const auto& layer_entry :
             fs::directory_iterator(step_entry.path())) {
            if (!layer_entry.is_directory()) continue;
            auto layer =
                suffix_int(layer_entry.path().filename().string(), "layer_");
            if (!layer) continue;
            for (MatrixKind kind : {MatrixKind::Q, MatrixKind::K,
                                    MatrixKind::V, MatrixKind::O}) {
                const std::string stem = to_string(kind);
                const fs::path bin = layer_entry.path() / (stem + ".wmat");
                const fs::path csv = layer_entry.path() / (stem + ".csv");
                WeightMatrix w;
                if (fs::is_regular_file(bin)) {
                    w = read_wmat(bin);
                } else if (fs::is_regular_file(csv)) {
                    w = read_matrix_csv(csv);
                } else {
                    continue;
                }
                w.checkpoint_step = *step;
                w.layer = static_cast<int>(*layer);
                w.kind = kind;
                out.push_back(std::move(w));
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const WeightMatrix& a, const WeightMatrix& b) {
                  return std::tuple(a.checkpoint_step, a.layer,
                                    static_cast<int>(a.kind)) <
                         std::tuple(b.checkpoint_step, b.layer,
                                    static_cast<int>(b.kind));
              });
    return out;
}

// ---------------------------------------------------------------------------
// Corpora and minimal pairs

// One sentence per line; blank lines are skipped.
inline std::vector<std::string> read_corpus(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<std::string> sentences;
    for (auto& line : detail::split_lines(text)) {
        if (!detail::blank(line)) {
            sentences.push_back(std::move(line));
        }
    }
    return sentences;
}

struct SentencePair {
    long long pair_id = 0;
    std::string good;
    std::string bad;
};

// JSONL with keys class_name, pair_id, good, bad. Returns pairs grouped by
// class, sorted by pair_id within each class.
inline std::map<std::string, std::vector<SentencePair>> read_pairs(
    const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const auto lines = detail::split_lines(text);
    static const std::vector<std::string> kKeys = {"class_name", "pair_id",
                                                   "good", "bad"};

    std::map<std::string, std::vector<SentencePair>> by_class;
    std::map<std::pair<std::string, long long>, std::size_t> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (detail::blank(lines[i])) {
            continue;
        }
        auto fail = [&](const std::string& msg) -> ValidationError {
            return ValidationError(path.string() + ":" +
                                   std::to_string(lineno) + ": " + msg);
        };
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::parse_error& e) {
            throw fail(std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) {
            throw fail("expected a JSON object");
        }
        for (const auto& key : kKeys) {
            if (!obj.contains(key)) {
                throw fail("missing key '" + key + "'");
            }
        }
        std::string class_name;
        SentencePair sp;
        try {
            class_name = obj.at("class_name").get<std::string>();
            sp.pair_id = obj.at("pair_id").get<long long>();
            sp.good = obj.at("good").get<std::string>();
            sp.bad = obj.at("bad").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw fail(std::string("bad field type: ") + e.what());
        }
        if (class_name.empty() || sp.good.empty() || sp.bad.empty()) {
            throw fail("class_name, good, and bad must be non-empty");
        }
        auto [it, inserted] = seen.emplace(std::pair(class_name, sp.pair_id),
                                           lineno);
        if (!inserted) {
            throw fail("duplicate (class_name, pair_id) also on line " +
                       std::to_string(it->second));
        }
        by_class[class_name].push_back(std::move(sp));
    }
    for (auto& [name, pairs] : by_class) {
        std::sort(pairs.begin(), pairs.end(),
                  [](const SentencePair& a, const SentencePair& b) {
                      return a.pair_id < b.pair_id;
                  });
    }
    return by_class;
}

}  // namespace gaptrack

#endif  // GAPTRACK_IO_HPP
