// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neuronscope {

// Normalization used by the error rates: Unicode NFC, then lowercasing.
// WER tokens are whitespace-separated words; CER units are code points with
// whitespace kept.
//
// BLEU: corpus level, n = 1..4, uniform weights, brevity penalty
// exp(1 - r/c) when c < r. An order n >= 2 with zero matches uses precision
// 1 / (total_n + 1); zero unigram matches give 0. Tokenization is 13a for
// alphabetic languages and one token per code point for ja/zh.
//
// chrF: character n-grams n = 1..6 over NFC text with whitespace removed,
// beta = 2. Match/hypothesis/reference counts are summed over the corpus per
// order; precision and recall are averaged over the orders where both
// hypothesis and reference have n-grams, then combined into F_beta.

enum class MetricName : std::uint8_t { wer, cer, bleu, chrf, combined };

std::string_view to_string(MetricName name);

struct MetricResult {
  MetricName name = MetricName::wer;
  double value = 0.0;
  // Per-segment values; nullopt where a segment has no defined value (an
  // empty reference for WER/CER).
  std::vector<std::optional<double>> per_example;
};

template <class T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      const std::size_t del = prev[j] + 1;
      const std::size_t ins = cur[j - 1] + 1;
      cur[j] = std::min(sub, std::min(del, ins));
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct EditCounts {
  std::size_t edits = 0;
  std::size_t reference_length = 0;
};

EditCounts word_edits(std::string_view reference, std::string_view hypothesis);
EditCounts char_edits(std::string_view reference, std::string_view hypothesis);

// Throw "empty reference" when the normalized reference has no units.
double wer(std::string_view reference, std::string_view hypothesis);
double cer(std::string_view reference, std::string_view hypothesis);

// Corpus error rates: total edits / total reference units.
MetricResult corpus_wer(std::span<const std::string> references,
                        std::span<const std::string> hypotheses);
MetricResult corpus_cer(std::span<const std::string> references,
                        std::span<const std::string> hypotheses);

enum class BleuTokenizer : std::uint8_t { mteval_13a, characters };

/// Tokenizer choice for a language code ("ja" and "zh" use characters).
BleuTokenizer bleu_tokenizer_for(std::string_view language);

/// True for languages scored with CER rather than WER (ja, zh).
bool uses_character_error_rate(std::string_view language);

struct BleuStatistics {
  std::size_t matches[4] = {0, 0, 0, 0};
  std::size_t totals[4] = {0, 0, 0, 0};
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
};

BleuStatistics bleu_statistics(std::span<const std::string> references,
                               std::span<const std::string> hypotheses,
                               BleuTokenizer tokenizer = BleuTokenizer::mteval_13a);
double bleu_from_statistics(const BleuStatistics& stats);

double bleu(std::span<const std::string> references, std::span<const std::string> hypotheses,
            BleuTokenizer tokenizer = BleuTokenizer::mteval_13a);

inline constexpr int kChrfOrder = 6;
inline constexpr double kChrfBeta = 2.0;

double chrf(std::span<const std::string> references, std::span<const std::string> hypotheses);

/// 0.6 * BLEU + 0.4 * chrF, evaluated as (6 * BLEU + 4 * chrF) / 10.
double combined(double bleu, double chrf);

/// WER or CER (routed by language), BLEU, chrF and combined for one corpus.
std::vector<MetricResult> score_corpus(std::span<const std::string> references,
                                       std::span<const std::string> hypotheses,
                                       std::string_view language);

}  // namespace neuronscope
