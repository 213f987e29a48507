// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "neuronscope/error.hpp"
#include "neuronscope/structure.hpp"
#include "oracles.hpp"

using namespace neuronscope;

namespace {

SelectionSet selection_of(const ModuleSpec& scope, std::vector<NeuronId> neurons) {
  SelectionSet s;
  s.target.setting = Setting::multimodal_language;
  s.target.language = "de";
  s.scope = scope;
  s.k = neurons.size();
  s.scores.assign(neurons.size(), 1.0);
  s.neurons = std::move(neurons);
  return s;
}

}  // namespace

TEST(Gini, ReferenceValues) {
  EXPECT_DOUBLE_EQ(gini(std::vector<double>{1, 1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(gini(std::vector<double>{0, 0, 0, 10}), 0.75);
  EXPECT_NEAR(gini(std::vector<double>{1, 2, 3}), 2.0 / 9.0, 1e-15);
}

TEST(Gini, RejectsInvalidInput) {
  EXPECT_THROW(gini(std::vector<double>{}), Error);
  EXPECT_THROW(gini(std::vector<double>{0, 0}), Error);
  EXPECT_THROW(gini(std::vector<double>{1, -1, 3}), Error);
  EXPECT_THROW(gini(std::vector<double>{1, std::nan("")}), Error);
}

TEST(Gini, MatchesMeanAbsoluteDifference) {
  Xoshiro256 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng.below(80));
    for (auto& x : v) x = static_cast<double>(rng.below(50));
    v[0] += 1.0;
    EXPECT_NEAR(gini(v), oracle::gini(v), 1e-12);

    std::vector<double> scaled(v);
    for (auto& x : scaled) x *= 7.5;
    EXPECT_NEAR(gini(scaled), gini(v), 1e-12);
    EXPECT_GE(gini(v), 0.0);
    EXPECT_LE(gini(v), 1.0 - 1.0 / static_cast<double>(v.size()) + 1e-12);
  }
}

TEST(Histogram, CountsPerCell) {
  const auto scope = fixtures::small_decoder(2, 3, 5);
  const auto sel = selection_of(scope, {{ModuleName::text_decoder, 0, "cross_attn.k_proj", 0},
                                        {ModuleName::text_decoder, 0, "cross_attn.k_proj", 2},
                                        {ModuleName::text_decoder, 1, "ffn.fc1", 4}});
  const auto hist = histogram(sel);
  EXPECT_EQ(hist.counts.size(), 8u);
  EXPECT_EQ(hist.count(0, 1), 2u);
  EXPECT_EQ(hist.count(1, 3), 1u);
  EXPECT_EQ(hist.total(), 3u);
  EXPECT_EQ(hist.layer_totals(SubmoduleGroup::attn), (std::vector<std::size_t>{2, 0}));
  EXPECT_EQ(hist.layer_totals(SubmoduleGroup::ffn), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(hist.submodule_totals(), (std::vector<std::size_t>{0, 2, 0, 1}));

  const auto report = gini_report(hist);
  EXPECT_EQ(report.cells, 8u);
  EXPECT_EQ(report.unit, "layer_submodule_counts");
  EXPECT_NEAR(report.value, oracle::gini({0, 2, 0, 0, 0, 0, 0, 1}), 1e-15);
}

TEST(Histogram, RejectsNeuronOutsideScope) {
  const auto sel = selection_of(fixtures::small_decoder(2),
                                {{ModuleName::text_decoder, 1, "ffn.fc1", 4}});
  EXPECT_THROW(histogram(sel, fixtures::small_decoder(1)), Error);
}

TEST(Overlap, IntersectionAndMatrix) {
  const auto scope = fixtures::small_decoder();
  const NeuronId a{ModuleName::text_decoder, 0, "ffn.fc1", 0};
  const NeuronId b{ModuleName::text_decoder, 0, "ffn.fc1", 1};
  const NeuronId c{ModuleName::text_decoder, 1, "ffn.fc1", 1};
  const auto x = selection_of(scope, {a, b});
  const auto y = selection_of(scope, {b, c});
  const auto z = selection_of(scope, {c});
  EXPECT_EQ(overlap(x, y), 1u);
  EXPECT_EQ(overlap(x, x), 2u);
  EXPECT_EQ(overlap(x, z), 0u);

  const std::vector<SelectionSet> rows = {x, y};
  const std::vector<SelectionSet> cols = {y, z};
  const auto m = overlap_matrix(rows, cols);
  EXPECT_EQ(m.cells, (std::vector<std::size_t>{1, 0, 2, 1}));
  EXPECT_EQ(m.at(1, 0), 2u);

  auto other = selection_of(fixtures::small_decoder(3), {a});
  EXPECT_THROW(overlap(x, other), Error);
}
