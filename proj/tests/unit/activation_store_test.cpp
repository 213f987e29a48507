// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fixtures.hpp"
#include "neuronscope/activation_store.hpp"
#include "neuronscope/error.hpp"

using namespace neuronscope;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(PoolSequence, MeanOfTwoRows) {
  const std::vector<float> block = {1, 2, 3, 3, 4, 5};
  EXPECT_EQ(pool_sequence(block, 2, 3), (std::vector<float>{2, 3, 4}));
}

TEST(PoolSequence, SingleTokenIsIdentity) {
  const std::vector<float> block = {7, -1};
  EXPECT_EQ(pool_sequence(block, 1, 2), (std::vector<float>{7, -1}));
}

TEST(PoolSequence, ConstantInput) {
  const std::vector<float> block(8, 0.5f);
  EXPECT_EQ(pool_sequence(block, 4, 2), (std::vector<float>{0.5f, 0.5f}));
}

TEST(PoolSequence, HiddenByTokensLayoutPoolsTheSameNeurons) {
  // 2 tokens x 3 hidden, stored transposed (3 x 2).
  const std::vector<float> transposed = {1, 3, 2, 4, 3, 5};
  EXPECT_EQ(pool_sequence(transposed, 2, 3, SequenceLayout::hidden_by_tokens),
            (std::vector<float>{2, 3, 4}));
}

TEST(PoolSequence, Errors) {
  EXPECT_EQ(error_of([] { pool_sequence({}, 0, 3); }), "empty sequence");
  const std::vector<float> bad = {1, std::numeric_limits<float>::quiet_NaN()};
  EXPECT_EQ(error_of([&] { pool_sequence(bad, 1, 2); }), "non-finite activation");
  const std::vector<float> inf = {1, std::numeric_limits<float>::infinity()};
  EXPECT_EQ(error_of([&] { pool_sequence(inf, 2, 1); }), "non-finite activation");
  EXPECT_THROW(pool_sequence(std::vector<float>(5), 2, 3), Error);
}

TEST(PoolSequence, PermutationInvariantAndLinear) {
  Xoshiro256 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const std::size_t d = 1 + rng.below(8);
    std::vector<float> a(n * d);
    std::vector<float> b(n * d);
    // Dyadic values keep every sum exact so equality is bit-level.
    for (auto& v : a) v = static_cast<float>(static_cast<int>(rng.below(64)) - 32) / 4.0f;
    for (auto& v : b) v = static_cast<float>(static_cast<int>(rng.below(64)) - 32) / 4.0f;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<float> shuffled(n * d);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy_n(a.begin() + perm[i] * d, d, shuffled.begin() + i * d);
    }
    EXPECT_EQ(pool_sequence(a, n, d), pool_sequence(shuffled, n, d));

    const float alpha = 2.0f;
    const float beta = -0.5f;
    std::vector<float> mix(n * d);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = alpha * a[i] + beta * b[i];
    const auto pa = pool_sequence(a, n, d);
    const auto pb = pool_sequence(b, n, d);
    const auto pm = pool_sequence(mix, n, d);
    for (std::size_t j = 0; j < d; ++j) {
      EXPECT_NEAR(pm[j], alpha * pa[j] + beta * pb[j], 1e-5);
    }
  }
}

TEST(ActivationDataset, RejectsShapeMismatchAndNonFinite) {
  const ComponentSchema schema({fixtures::small_decoder(1, 1, 1)});  // 4 columns
  std::vector<ExampleMeta> examples = {fixtures::example("de", Modality::speech),
                                       fixtures::example("fr", Modality::text)};
  EXPECT_NO_THROW(ActivationDataset(schema, examples, std::vector<float>(8, 0.0f)));
  EXPECT_THROW(ActivationDataset(schema, examples, std::vector<float>(7, 0.0f)), Error);

  std::vector<float> values(8, 0.0f);
  values[5] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_EQ(error_of([&] { ActivationDataset(schema, examples, values); }),
            "non-finite activation");

  examples[0].sequence_length = 0;
  EXPECT_THROW(ActivationDataset(schema, examples, std::vector<float>(8, 0.0f)), Error);
}

TEST(ActivationDataset, RowAccess) {
  const ComponentSchema schema({fixtures::small_decoder(1, 1, 1)});
  std::vector<float> values = {0, 1, 2, 3, 4, 5, 6, 7};
  ActivationDataset ds(schema,
                       {fixtures::example("de", Modality::speech),
                        fixtures::example("fr", Modality::text)},
                       values);
  EXPECT_EQ(ds.rows(), 2u);
  EXPECT_EQ(ds.columns(), 4u);
  EXPECT_EQ(ds.row(1)[0], 4.0f);
  EXPECT_EQ(ds.at(0, 3), 3.0f);
}
