// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "neuronscope/error.hpp"
#include "neuronscope/metrics.hpp"
#include "neuronscope/text.hpp"
#include "oracles.hpp"
#include "toy_corpus.hpp"

using namespace neuronscope;

using toy_corpus::kHyps;
using toy_corpus::kRefs;

TEST(ErrorRates, WerOneThird) {
  EXPECT_NEAR(wer("the cat sat", "the cat sit"), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(wer("a b c", "a b c"), 0.0);
  EXPECT_DOUBLE_EQ(wer("a b", "x y z w"), 2.0);  // insertions push WER above 1
}

TEST(ErrorRates, NormalizationAppliesBeforeComparison) {
  EXPECT_DOUBLE_EQ(wer("The Cat", "the cat"), 0.0);
  // Decomposed e + combining acute equals precomposed é after NFC.
  EXPECT_DOUBLE_EQ(wer("caf\xC3\xA9", "cafe\xCC\x81"), 0.0);
  EXPECT_DOUBLE_EQ(cer("ABC", "abc"), 0.0);
  EXPECT_DOUBLE_EQ(wer("  a\t b\n", "a b"), 0.0);
}

TEST(ErrorRates, CerCountsCodePointsIncludingSpaces) {
  EXPECT_NEAR(cer("ab cd", "ab cx"), 1.0 / 5.0, 1e-15);
  EXPECT_NEAR(cer("日本語", "日本"), 1.0 / 3.0, 1e-15);
}

TEST(ErrorRates, EmptyReference) {
  try {
    wer("  ", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::usage);
    EXPECT_STREQ(e.what(), "empty reference");
  }
  EXPECT_THROW(cer("", "x"), Error);
}

TEST(ErrorRates, CorpusRateIsPooled) {
  const std::vector<std::string> refs = {"a b c d", "e f"};
  const std::vector<std::string> hyps = {"a b c x", "e"};
  const auto r = corpus_wer(refs, hyps);
  EXPECT_NEAR(r.value, 2.0 / 6.0, 1e-15);
  ASSERT_EQ(r.per_example.size(), 2u);
  EXPECT_NEAR(*r.per_example[0], 0.25, 1e-15);
  EXPECT_NEAR(*r.per_example[1], 0.5, 1e-15);

  const std::vector<std::string> short_hyps = {"a"};
  EXPECT_THROW(corpus_wer(refs, short_hyps), Error);
}

TEST(ErrorRates, LevenshteinProperties) {
  const std::string a = "kitten";
  const std::string b = "sitting";
  EXPECT_EQ(levenshtein<char>(a, b), 3u);
  EXPECT_EQ(levenshtein<char>(b, a), 3u);
  EXPECT_EQ(levenshtein<char>(a, a), 0u);
  EXPECT_EQ(levenshtein<char>(a, ""), a.size());
}

TEST(Tokenizer13a, SplitsPunctuationButKeepsNumbers) {
  auto toks = [](const std::string& s) {
    std::vector<std::string> out;
    for (const auto& t : text::tokenize_13a(text::decode_utf8(s))) {
      out.push_back(text::encode_utf8(t));
    }
    return out;
  };
  EXPECT_EQ(toks("Hello, world."), (std::vector<std::string>{"Hello", ",", "world", "."}));
  EXPECT_EQ(toks("3.50 and 1,000"), (std::vector<std::string>{"3.50", "and", "1,000"}));
  EXPECT_EQ(toks("2-3"), (std::vector<std::string>{"2", "-", "3"}));
  EXPECT_EQ(toks("well-known"), (std::vector<std::string>{"well-known"}));
  EXPECT_EQ(toks("a &amp; b"), (std::vector<std::string>{"a", "&", "b"}));
  EXPECT_EQ(toks("(x)"), (std::vector<std::string>{"(", "x", ")"}));
}

TEST(Bleu, IdenticalCorpusScoresHundred) {
  EXPECT_NEAR(bleu(kRefs, kRefs), 100.0, 1e-9);
  EXPECT_NEAR(chrf(kRefs, kRefs), 100.0, 1e-9);
}

TEST(Bleu, MatchesOracleOnMixedCorpus) {
  EXPECT_NEAR(bleu(kRefs, kHyps), oracle::bleu(kRefs, kHyps), 1e-6);
  for (std::size_t start = 0; start + 5 <= kRefs.size(); start += 5) {
    const std::vector<std::string> r(kRefs.begin() + static_cast<long>(start),
                                     kRefs.begin() + static_cast<long>(start + 5));
    const std::vector<std::string> h(kHyps.begin() + static_cast<long>(start),
                                     kHyps.begin() + static_cast<long>(start + 5));
    EXPECT_NEAR(bleu(r, h), oracle::bleu(r, h), 1e-6) << start;
  }
}

TEST(Bleu, ZeroUnigramMatchesAndEmptyHypothesis) {
  const std::vector<std::string> refs = {"a b c"};
  const std::vector<std::string> none = {"x y z"};
  const std::vector<std::string> empty = {""};
  EXPECT_DOUBLE_EQ(bleu(refs, none), 0.0);
  EXPECT_DOUBLE_EQ(bleu(refs, empty), 0.0);
}

TEST(Bleu, SmoothingAndBrevityPenaltyByHand) {
  // hyp "a b x" vs ref "a b c d": p1 = 2/3, p2 = 1/2, p3 = 1/(1+1), p4 = 1/(0+1);
  // c = 3, r = 4, BP = exp(1 - 4/3).
  const std::vector<std::string> refs = {"a b c d"};
  const std::vector<std::string> hyps = {"a b x"};
  const double expected = 100.0 * std::exp(1.0 - 4.0 / 3.0) *
                          std::exp((std::log(2.0 / 3.0) + std::log(0.5) + std::log(0.5) +
                                    std::log(1.0)) / 4.0);
  EXPECT_NEAR(bleu(refs, hyps), expected, 1e-12);
}

TEST(Bleu, CharacterTokenizationForJapaneseAndChinese) {
  EXPECT_EQ(bleu_tokenizer_for("ja"), BleuTokenizer::characters);
  EXPECT_EQ(bleu_tokenizer_for("zh"), BleuTokenizer::characters);
  EXPECT_EQ(bleu_tokenizer_for("de"), BleuTokenizer::mteval_13a);
  EXPECT_TRUE(uses_character_error_rate("ja"));
  EXPECT_FALSE(uses_character_error_rate("fr"));

  const std::vector<std::string> refs = {"今日は晴れです"};
  const std::vector<std::string> hyps = {"今日は雨です"};
  const auto stats = bleu_statistics(refs, hyps, BleuTokenizer::characters);
  EXPECT_EQ(stats.hypothesis_length, 6u);
  EXPECT_EQ(stats.reference_length, 7u);
  EXPECT_EQ(stats.matches[0], 5u);
}

TEST(Chrf, MatchesOracleOnMixedCorpus) {
  EXPECT_NEAR(chrf(kRefs, kHyps), oracle::chrf(kRefs, kHyps), 1e-6);
}

TEST(Chrf, IgnoresWhitespace) {
  const std::vector<std::string> refs = {"ab cd"};
  const std::vector<std::string> hyps = {"abcd"};
  EXPECT_NEAR(chrf(refs, hyps), 100.0, 1e-9);
}

TEST(Combined, WeightsAreExact) {
  EXPECT_EQ(combined(30.0, 60.0), 42.0);
  EXPECT_EQ(combined(0.1, 0.2), (6.0 * 0.1 + 4.0 * 0.2) / 10.0);
}

TEST(ScoreCorpus, RoutesErrorRateByLanguage) {
  const auto de = score_corpus(kRefs, kHyps, "de");
  ASSERT_EQ(de.size(), 4u);
  EXPECT_EQ(de[0].name, MetricName::wer);
  EXPECT_EQ(de[1].name, MetricName::bleu);
  EXPECT_EQ(de[2].name, MetricName::chrf);
  EXPECT_EQ(de[3].name, MetricName::combined);
  EXPECT_EQ(de[3].value, combined(de[1].value, de[2].value));

  const std::vector<std::string> refs = {"今日は晴れです"};
  const std::vector<std::string> hyps = {"今日は雨です"};
  const auto ja = score_corpus(refs, hyps, "ja");
  EXPECT_EQ(ja[0].name, MetricName::cer);
  EXPECT_NEAR(ja[0].value, 2.0 / 7.0, 1e-15);
}
