// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/activation_store.hpp"

#include <cmath>
#include <string>

#include "neuronscope/error.hpp"

namespace neuronscope {

void require_finite(std::span<const float> values) {
  for (float v : values) {
    if (!std::isfinite(v)) throw_data_error("non-finite activation");
  }
}

ActivationDataset::ActivationDataset(ComponentSchema schema, std::vector<ExampleMeta> examples,
                                     std::vector<float> values)
    : schema_(std::move(schema)), examples_(std::move(examples)), values_(std::move(values)) {
  if (values_.size() != examples_.size() * schema_.total()) {
    throw_data_error("payload has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(examples_.size()) + " x " + std::to_string(schema_.total()));
  }
  for (const auto& ex : examples_) {
    if (ex.language.empty()) throw_data_error("example '" + ex.example_id + "' has no language");
    if (ex.sequence_length == 0) {
      throw_data_error("example '" + ex.example_id + "' has sequence_length 0");
    }
  }
  require_finite(values_);
}

std::vector<float> pool_sequence(std::span<const float> activations, std::size_t tokens,
                                 std::size_t hidden, SequenceLayout layout) {
  if (tokens == 0) throw_data_error("empty sequence");
  if (activations.size() != tokens * hidden) {
    throw_data_error("activation block has " + std::to_string(activations.size()) +
                     " values, expected " + std::to_string(tokens) + " x " +
                     std::to_string(hidden));
  }
  require_finite(activations);

  std::vector<double> sums(hidden, 0.0);
  if (layout == SequenceLayout::tokens_by_hidden) {
    for (std::size_t i = 0; i < tokens; ++i) {
      const float* row = activations.data() + i * hidden;
      for (std::size_t j = 0; j < hidden; ++j) sums[j] += row[j];
    }
  } else {
    for (std::size_t j = 0; j < hidden; ++j) {
      const float* row = activations.data() + j * tokens;
      for (std::size_t i = 0; i < tokens; ++i) sums[j] += row[i];
    }
  }

  std::vector<float> pooled(hidden);
  const double n = static_cast<double>(tokens);
  for (std::size_t j = 0; j < hidden; ++j) pooled[j] = static_cast<float>(sums[j] / n);
  return pooled;
}

}  // namespace neuronscope
