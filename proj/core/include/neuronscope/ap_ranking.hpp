// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "neuronscope/activation_store.hpp"
#include "neuronscope/labeling.hpp"

namespace neuronscope {

/// Average precision of `scores` as a ranking for binary `labels`.
///
/// Thresholds sweep the distinct score values from high to low; all examples
/// sharing a score are admitted together, and
///   AP = sum_t (R_t - R_{t-1}) * P_t
/// with P_t, R_t the precision and recall after admitting group t. Requires
/// at least one positive and one negative ("degenerate labels" otherwise).
double average_precision(std::span<const float> scores, std::span<const std::uint8_t> labels);

/// Reusable buffers for computing many APs against the same labels without
/// reallocating. Not thread-safe; use one per worker.
class APScratch {
 public:
  double compute(std::span<const float> scores, std::span<const std::uint8_t> labels,
                 std::size_t positives);

 private:
  std::vector<std::uint64_t> keys_;
};

/// Per-neuron AP for one target over one module's columns.
struct APTable {
  TargetSpec target;
  ModuleSpec scope;
  std::vector<double> scores;  // module-local column order
  std::size_t examples = 0;    // rows that took part after label restriction
  std::size_t positives = 0;
};

struct RankOptions {
  std::size_t workers = 0;  // 0 = resolve_workers()
  std::size_t block_columns = 64;
};

/// Scores every column of `scope` in `dataset` against the labels built for
/// `spec`. The result does not depend on the worker count.
APTable rank_neurons(const ActivationDataset& dataset, const TargetSpec& spec, ModuleName scope,
                     const RankOptions& options = {});

enum class Polarity : std::uint8_t { top, bottom };

std::string_view to_string(Polarity polarity);
Polarity parse_polarity(std::string_view text);

/// The k highest (top) or lowest (bottom) AP neurons, in rank order. Equal AP
/// is broken by the lower column first for both polarities.
struct SelectionSet {
  TargetSpec target;
  ModuleSpec scope;
  Polarity polarity = Polarity::top;
  std::size_t k = 0;
  std::vector<NeuronId> neurons;
  std::vector<double> scores;  // AP of each selected neuron

  std::string label() const;  // e.g. "multimodal_language:de/top/1000"
};

SelectionSet select(const APTable& table, Polarity polarity, std::size_t k);

/// Neuron budgets used for replication runs.
inline constexpr std::size_t kReferenceBudgets[] = {500, 1000, 2500, 5000};

}  // namespace neuronscope
