#pragma once

// Count-based unigram/bigram/trigram models with stupid backoff and add-k
// smoothing, bigram sentence scoring, and the per-class bigram-vs-neural
// sign agreement check.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gaptrack/errors.hpp"
#include "gaptrack/trajectory.hpp"

namespace gaptrack {

inline constexpr const char* kBos = "<s>";
inline constexpr const char* kEos = "</s>";

// Lowercase (optional), split on whitespace, break out .,;:!?"'() as
// standalone tokens, then wrap in sentence sentinels.
inline std::vector<std::string> tokenize(const std::string& text, bool lowercase = true) {
  static const std::string punct = ".,;:!?\"'()";
  std::vector<std::string> tokens = {kBos};
  std::string current;
  auto flush = [&tokens, &current]() {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (punct.find(raw) != std::string::npos) {
      flush();
      tokens.push_back(std::string(1, raw));
    } else {
      current.push_back(lowercase ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  if (tokens.size() == 1) {
    throw ValidationError("tokenize: empty sentence");
  }
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == kBos || tokens[i] == kEos) {
      throw ValidationError("tokenize: sentence contains a reserved sentinel token");
    }
  }
  tokens.push_back(kEos);
  return tokens;
}

struct NGramModel {
  int order = 2;
  double backoff_factor = 0.4;
  double addk = 0.5;
  bool lowercase = true;

  // Keys are full n-grams (sizes 1..order) and context prefixes
  // (sizes 0..order-1); the empty prefix totals all predicted tokens.
  std::map<std::vector<std::string>, std::int64_t> counts;
  std::map<std::vector<std::string>, std::int64_t> context_totals;
  std::set<std::string> vocab;  // predicted tokens only, so EOS yes, BOS no

  bool trained() const { return !context_totals.empty(); }
};

// Accumulate n-gram counts of sizes 1..order over the corpus. Every
// position after BOS is a predicted token, so EOS-terminal n-grams are
// counted and BOS itself is never a unigram.
inline NGramModel train(const std::vector<std::string>& corpus, int order,
                        double backoff_factor = 0.4, double addk = 0.5,
                        bool lowercase = true) {
  if (corpus.empty()) throw ValidationError("train: empty corpus");
  if (order < 1 || order > 3) throw ValidationError("train: order must be 1, 2 or 3");
  if (!(backoff_factor > 0.0) || backoff_factor > 1.0) {
    throw ValidationError("train: backoff_factor must be in (0,1]");
  }
  if (!(addk >= 0.0)) throw ValidationError("train: addk must be nonnegative");

  NGramModel model;
  model.order = order;
  model.backoff_factor = backoff_factor;
  model.addk = addk;
  model.lowercase = lowercase;

  for (const std::string& sentence : corpus) {
    const std::vector<std::string> toks = tokenize(sentence, lowercase);
    for (std::size_t i = 1; i < toks.size(); ++i) {
      model.vocab.insert(toks[i]);
      for (int n = 1; n <= order; ++n) {
        if (i + 1 < static_cast<std::size_t>(n)) continue;
        const std::size_t start = i + 1 - static_cast<std::size_t>(n);
        std::vector<std::string> gram(toks.begin() + static_cast<std::ptrdiff_t>(start),
                                      toks.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        std::vector<std::string> ctx(gram.begin(), gram.end() - 1);
        ++model.counts[gram];
        ++model.context_totals[ctx];
      }
    }
  }
  return model;
}

// Stupid-backoff probability of token given a context of up to order-1
// preceding tokens. A seen context answers with add-k relative frequency
// over the whole vocabulary; an unseen context defers to the shortened
// context at a fixed discount. The unigram base never backs off.
inline double prob(const NGramModel& model, const std::string& token,
                   std::vector<std::string> context) {
  if (!model.trained()) throw ValidationError("prob: model is not trained");
  if (context.size() >= static_cast<std::size_t>(model.order)) {
    throw ValidationError("prob: context longer than order-1");
  }
  const double v = static_cast<double>(model.vocab.size());
  double discount = 1.0;
  while (true) {
    const auto total_it = model.context_totals.find(context);
    const double total =
        total_it == model.context_totals.end() ? 0.0 : static_cast<double>(total_it->second);
    if (total > 0.0 || context.empty()) {
      std::vector<std::string> gram = context;
      gram.push_back(token);
      const auto count_it = model.counts.find(gram);
      const double count =
          count_it == model.counts.end() ? 0.0 : static_cast<double>(count_it->second);
      return discount * (count + model.addk) / (total + model.addk * v);
    }
    discount *= model.backoff_factor;
    context.erase(context.begin());
  }
}

struct SentenceNll {
  double total = 0.0;
  double mean = 0.0;
  std::size_t n_predicted = 0;
};

namespace detail {

inline SentenceNll sentence_nll_ctx(const NGramModel& model, const std::string& sentence,
                                    std::size_t ctx_len) {
  const std::vector<std::string> toks = tokenize(sentence, model.lowercase);
  SentenceNll out;
  out.n_predicted = toks.size() - 1;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const std::size_t take = std::min(ctx_len, i);
    std::vector<std::string> ctx(toks.begin() + static_cast<std::ptrdiff_t>(i - take),
                                 toks.begin() + static_cast<std::ptrdiff_t>(i));
    out.total -= std::log(prob(model, toks[i], ctx));
  }
  out.mean = out.total / static_cast<double>(out.n_predicted);
  return out;
}

}  // namespace detail

// -sum log p(w_i | w_{i-1}) over every position after BOS, EOS included.
inline SentenceNll sentence_nll_bigram(const NGramModel& model, const std::string& sentence) {
  if (model.order < 2) {
    throw ValidationError("sentence_nll_bigram: model order must be at least 2");
  }
  return detail::sentence_nll_ctx(model, sentence, 1);
}

// Same loss with the longest context the model was trained for; identical
// to the bigram loss when order = 2.
inline SentenceNll sentence_nll_full(const NGramModel& model, const std::string& sentence) {
  if (model.order < 2) {
    throw ValidationError("sentence_nll_full: model order must be at least 2");
  }
  return detail::sentence_nll_ctx(model, sentence,
                                  static_cast<std::size_t>(model.order) - 1);
}

namespace detail {

inline double class_gap_ctx(const NGramModel& model,
                            const std::vector<std::pair<std::string, std::string>>& pairs,
                            std::size_t ctx_len) {
  if (pairs.empty()) throw ValidationError("class gap: no pairs");
  std::vector<double> good, bad;
  good.reserve(pairs.size());
  bad.reserve(pairs.size());
  for (const auto& [g, b] : pairs) {
    good.push_back(sentence_nll_ctx(model, g, ctx_len).mean);
    bad.push_back(sentence_nll_ctx(model, b, ctx_len).mean);
  }
  return log_sum_exp(good) - log_sum_exp(bad);
}

}  // namespace detail

// The class-level gap with bigram perplexities standing in for the neural
// ones: log sum exp(mean NLL good) - log sum exp(mean NLL bad).
inline double bigram_class_gap(const NGramModel& model,
                               const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (model.order < 2) throw ValidationError("bigram_class_gap: model order must be at least 2");
  return detail::class_gap_ctx(model, pairs, 1);
}

// Same gap scored with the model's full context length, for order-3 runs.
inline double full_order_class_gap(
    const NGramModel& model, const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (model.order < 2) throw ValidationError("full_order_class_gap: model order must be at least 2");
  return detail::class_gap_ctx(model, pairs, static_cast<std::size_t>(model.order) - 1);
}

struct BigramHypothesisVerdict {
  std::string class_name;
  int ngram_gap_sign = 0;
  int neural_late_sign = 0;
  bool agrees = false;
  double ngram_gap_value = 0.0;
  // Secondary diagnostic: how many individual pairs the bigram model orders
  // the same way as the neural late-segment sign.
  std::size_t pairs_agreeing = 0;
  std::size_t pairs_total = 0;
};

struct BigramHypothesisReport {
  std::vector<BigramHypothesisVerdict> verdicts;
  std::vector<std::string> skipped;  // classes present in only one input map
  // category name -> (agreeing classes, disagreeing classes)
  std::map<std::string, std::pair<std::size_t, std::size_t>> summary;
};

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Adjudicate the bigram hypothesis per class: does the sign of the bigram
// gap match the sign of the neural late-segment mean? Zero signs never
// agree. Classes appearing in only one map are listed as skipped.
inline BigramHypothesisReport bigram_hypothesis_test(
    const NGramModel& model,
    const std::map<std::string, std::vector<std::pair<std::string, std::string>>>& class_pairs,
    const std::map<std::string, GapSeries>& neural_series, double early_frac = 0.3,
    double late_frac = 0.3) {
  BigramHypothesisReport report;
  for (const auto& [cls, series] : neural_series) {
    if (class_pairs.find(cls) == class_pairs.end()) report.skipped.push_back(cls);
  }
  for (const auto& [cls, pairs] : class_pairs) {
    const auto series_it = neural_series.find(cls);
    if (series_it == neural_series.end()) {
      report.skipped.push_back(cls);
      continue;
    }
    const SegmentMeans means = segment_means(series_it->second, early_frac, late_frac);

    BigramHypothesisVerdict v;
    v.class_name = cls;
    v.ngram_gap_value = bigram_class_gap(model, pairs);
    v.ngram_gap_sign = sign_of(v.ngram_gap_value);
    v.neural_late_sign = sign_of(means.late_mean);
    v.agrees = v.ngram_gap_sign != 0 && v.ngram_gap_sign == v.neural_late_sign;
    v.pairs_total = pairs.size();
    for (const auto& [g, b] : pairs) {
      const double pair_gap =
          sentence_nll_bigram(model, g).mean - sentence_nll_bigram(model, b).mean;
      if (sign_of(pair_gap) != 0 && sign_of(pair_gap) == v.neural_late_sign) {
        ++v.pairs_agreeing;
      }
    }

    const char* category = to_string(categorize(means));
    auto& bucket = report.summary[category];
    if (v.agrees) {
      ++bucket.first;
    } else {
      ++bucket.second;
    }
    report.verdicts.push_back(std::move(v));
  }
  std::sort(report.skipped.begin(), report.skipped.end());
  return report;
}

// Sorted count listing for diff-based comparisons: n-gram tokens and count,
// tab-separated, shortest n-grams first.
inline std::string dump_counts(const NGramModel& model) {
  if (!model.trained()) throw ValidationError("dump_counts: model is not trained");
  std::vector<std::pair<std::vector<std::string>, std::int64_t>> rows(model.counts.begin(),
                                                                      model.counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::ostringstream out;
  for (const auto& [gram, count] : rows) {
    for (const auto& tok : gram) out << tok << '\t';
    out << count << '\n';
  }
  return out.str();
}

}  // namespace gaptrack
