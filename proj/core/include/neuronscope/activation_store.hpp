// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "neuronscope/schema.hpp"
#include "neuronscope/types.hpp"

namespace neuronscope {

/// Pooled activations: one row per example, one column per neuron of the
/// schema. Immutable once constructed; the constructor checks shape and
/// rejects NaN/Inf.
class ActivationDataset {
 public:
  ActivationDataset() = default;
  ActivationDataset(ComponentSchema schema, std::vector<ExampleMeta> examples,
                    std::vector<float> values);

  const ComponentSchema& schema() const { return schema_; }
  const std::vector<ExampleMeta>& examples() const { return examples_; }
  std::span<const float> values() const { return values_; }

  std::size_t rows() const { return examples_.size(); }
  std::size_t columns() const { return schema_.total(); }

  std::span<const float> row(std::size_t example) const {
    return std::span<const float>(values_).subspan(example * columns(), columns());
  }
  float at(std::size_t example, std::size_t column) const {
    return values_[example * columns() + column];
  }

  // Moves the payload out; used when deriving a modified copy.
  std::vector<float> release_values() && { return std::move(values_); }

  friend bool operator==(const ActivationDataset&, const ActivationDataset&) = default;

 private:
  ComponentSchema schema_;
  std::vector<ExampleMeta> examples_;
  std::vector<float> values_;
};

/// Storage order of a raw activation block handed to pool_sequence.
enum class SequenceLayout {
  tokens_by_hidden,  // n x d, the Transformer convention
  hidden_by_tokens,  // d x n, as some Conformer blocks emit
};

/// Mean over the sequence axis of an activation block with `tokens` rows and
/// `hidden` columns (or the transpose, per `layout`). The hidden dimension is
/// always the output axis. Accumulates in double.
std::vector<float> pool_sequence(std::span<const float> activations, std::size_t tokens,
                                 std::size_t hidden,
                                 SequenceLayout layout = SequenceLayout::tokens_by_hidden);

/// Throws "non-finite activation" on the first NaN/Inf.
void require_finite(std::span<const float> values);

}  // namespace neuronscope
