// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/metrics.hpp"

#include <cmath>
#include <unordered_map>

#include "neuronscope/error.hpp"
#include "neuronscope/text.hpp"

namespace neuronscope {

std::string_view to_string(MetricName name) {
  switch (name) {
    case MetricName::wer: return "wer";
    case MetricName::cer: return "cer";
    case MetricName::bleu: return "bleu";
    case MetricName::chrf: return "chrf";
    case MetricName::combined: return "combined";
  }
  return "?";
}

EditCounts word_edits(std::string_view reference, std::string_view hypothesis) {
  const auto ref = text::split_whitespace(text::normalize(reference, true));
  const auto hyp = text::split_whitespace(text::normalize(hypothesis, true));
  return {levenshtein<std::u32string>(ref, hyp), ref.size()};
}

EditCounts char_edits(std::string_view reference, std::string_view hypothesis) {
  const auto ref = text::normalize(reference, true);
  const auto hyp = text::normalize(hypothesis, true);
  return {levenshtein<char32_t>(ref, hyp), ref.size()};
}

namespace {

double rate(const EditCounts& counts) {
  if (counts.reference_length == 0) throw_usage_error("empty reference");
  return static_cast<double>(counts.edits) / static_cast<double>(counts.reference_length);
}

void require_parallel(std::span<const std::string> references,
                      std::span<const std::string> hypotheses) {
  if (references.size() != hypotheses.size()) {
    throw_usage_error("reference/hypothesis length mismatch (" +
                      std::to_string(references.size()) + " vs " +
                      std::to_string(hypotheses.size()) + ")");
  }
  if (references.empty()) throw_usage_error("empty corpus");
}

template <class EditFn>
MetricResult corpus_rate(MetricName name, std::span<const std::string> references,
                         std::span<const std::string> hypotheses, EditFn edits_of) {
  require_parallel(references, hypotheses);
  MetricResult result;
  result.name = name;
  EditCounts total;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const EditCounts counts = edits_of(references[i], hypotheses[i]);
    total.edits += counts.edits;
    total.reference_length += counts.reference_length;
    if (counts.reference_length == 0) {
      result.per_example.push_back(std::nullopt);
    } else {
      result.per_example.push_back(rate(counts));
    }
  }
  result.value = rate(total);
  return result;
}

}  // namespace

double wer(std::string_view reference, std::string_view hypothesis) {
  return rate(word_edits(reference, hypothesis));
}

double cer(std::string_view reference, std::string_view hypothesis) {
  return rate(char_edits(reference, hypothesis));
}

MetricResult corpus_wer(std::span<const std::string> references,
                        std::span<const std::string> hypotheses) {
  return corpus_rate(MetricName::wer, references, hypotheses,
                     [](const std::string& r, const std::string& h) { return word_edits(r, h); });
}

MetricResult corpus_cer(std::span<const std::string> references,
                        std::span<const std::string> hypotheses) {
  return corpus_rate(MetricName::cer, references, hypotheses,
                     [](const std::string& r, const std::string& h) { return char_edits(r, h); });
}

BleuTokenizer bleu_tokenizer_for(std::string_view language) {
  return uses_character_error_rate(language) ? BleuTokenizer::characters
                                             : BleuTokenizer::mteval_13a;
}

bool uses_character_error_rate(std::string_view language) {
  return language == "ja" || language == "zh";
}

namespace {

// n-grams are keyed by their tokens joined with U+0000, which never occurs
// inside a token.
using NgramCounts = std::unordered_map<std::u32string, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::u32string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::u32string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key.push_back(U'\0');
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

std::vector<std::u32string> bleu_tokens(const std::string& segment, BleuTokenizer tokenizer) {
  const auto normalized = text::normalize(segment, false);
  return tokenizer == BleuTokenizer::characters ? text::tokenize_characters(normalized)
                                                : text::tokenize_13a(normalized);
}

std::size_t clipped_matches(const NgramCounts& hyp, const NgramCounts& ref) {
  std::size_t matches = 0;
  for (const auto& [gram, count] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) matches += std::min(count, it->second);
  }
  return matches;
}

}  // namespace

BleuStatistics bleu_statistics(std::span<const std::string> references,
                               std::span<const std::string> hypotheses, BleuTokenizer tokenizer) {
  require_parallel(references, hypotheses);
  BleuStatistics stats;
  for (std::size_t s = 0; s < references.size(); ++s) {
    const auto ref = bleu_tokens(references[s], tokenizer);
    const auto hyp = bleu_tokens(hypotheses[s], tokenizer);
    stats.reference_length += ref.size();
    stats.hypothesis_length += hyp.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hyp_counts = count_ngrams(hyp, n);
      const auto ref_counts = count_ngrams(ref, n);
      stats.totals[n - 1] += hyp.size() >= n ? hyp.size() - n + 1 : 0;
      stats.matches[n - 1] += clipped_matches(hyp_counts, ref_counts);
    }
  }
  return stats;
}

double bleu_from_statistics(const BleuStatistics& stats) {
  if (stats.hypothesis_length == 0 || stats.matches[0] == 0) return 0.0;
  double log_precision = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    const double matches = static_cast<double>(stats.matches[n]);
    const double total = static_cast<double>(stats.totals[n]);
    const double precision = stats.matches[n] > 0 ? matches / total : 1.0 / (total + 1.0);
    log_precision += std::log(precision);
  }
  const double c = static_cast<double>(stats.hypothesis_length);
  const double r = static_cast<double>(stats.reference_length);
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  const double score = 100.0 * brevity * std::exp(log_precision / 4.0);
  return std::clamp(score, 0.0, 100.0);
}

double bleu(std::span<const std::string> references, std::span<const std::string> hypotheses,
            BleuTokenizer tokenizer) {
  return bleu_from_statistics(bleu_statistics(references, hypotheses, tokenizer));
}

namespace {

using CharNgrams = std::unordered_map<std::u32string_view, std::size_t>;

CharNgrams char_ngrams(const std::u32string& chars, std::size_t n) {
  CharNgrams counts;
  if (chars.size() < n) return counts;
  for (std::size_t i = 0; i + n <= chars.size(); ++i) {
    ++counts[std::u32string_view(chars).substr(i, n)];
  }
  return counts;
}

}  // namespace

double chrf(std::span<const std::string> references, std::span<const std::string> hypotheses) {
  require_parallel(references, hypotheses);
  std::size_t matches[kChrfOrder] = {};
  std::size_t hyp_totals[kChrfOrder] = {};
  std::size_t ref_totals[kChrfOrder] = {};

  for (std::size_t s = 0; s < references.size(); ++s) {
    const auto ref = text::strip_whitespace(text::normalize(references[s], false));
    const auto hyp = text::strip_whitespace(text::normalize(hypotheses[s], false));
    for (std::size_t n = 1; n <= kChrfOrder; ++n) {
      const auto hyp_counts = char_ngrams(hyp, n);
      const auto ref_counts = char_ngrams(ref, n);
      hyp_totals[n - 1] += hyp.size() >= n ? hyp.size() - n + 1 : 0;
      ref_totals[n - 1] += ref.size() >= n ? ref.size() - n + 1 : 0;
      for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  double precision = 0.0;
  double recall = 0.0;
  int effective = 0;
  for (int n = 0; n < kChrfOrder; ++n) {
    if (hyp_totals[n] == 0 || ref_totals[n] == 0) continue;
    precision += static_cast<double>(matches[n]) / static_cast<double>(hyp_totals[n]);
    recall += static_cast<double>(matches[n]) / static_cast<double>(ref_totals[n]);
    ++effective;
  }
  if (effective == 0) return 0.0;
  precision /= effective;
  recall /= effective;
  if (precision + recall == 0.0) return 0.0;
  const double beta2 = kChrfBeta * kChrfBeta;
  const double f = (1.0 + beta2) * precision * recall / (beta2 * precision + recall);
  return std::clamp(100.0 * f, 0.0, 100.0);
}

double combined(double bleu_score, double chrf_score) {
  return (6.0 * bleu_score + 4.0 * chrf_score) / 10.0;
}

std::vector<MetricResult> score_corpus(std::span<const std::string> references,
                                       std::span<const std::string> hypotheses,
                                       std::string_view language) {
  std::vector<MetricResult> results;
  results.push_back(uses_character_error_rate(language) ? corpus_cer(references, hypotheses)
                                                        : corpus_wer(references, hypotheses));
  MetricResult b{MetricName::bleu, bleu(references, hypotheses, bleu_tokenizer_for(language)), {}};
  MetricResult c{MetricName::chrf, chrf(references, hypotheses), {}};
  MetricResult m{MetricName::combined, combined(b.value, c.value), {}};
  results.push_back(std::move(b));
  results.push_back(std::move(c));
  results.push_back(std::move(m));
  return results;
}

}  // namespace neuronscope
