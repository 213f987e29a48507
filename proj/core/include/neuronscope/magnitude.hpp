// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neuronscope/activation_store.hpp"

namespace neuronscope {

struct MagnitudeOptions {
  bool absolute = false;  // average |activation| instead of signed values
};

/// Layer-wise activation level of `scope` at `layer` over the given rows
/// (all rows when empty):
///
///   per submodule m:  mean over its J neurons of the per-neuron mean over rows
///   layer value:      unweighted mean of the per-submodule values
///
/// A wide submodule therefore counts as much as a narrow one.
double layer_magnitude(const ActivationDataset& dataset, ModuleName scope, std::size_t layer,
                       std::span<const std::size_t> rows = {},
                       const MagnitudeOptions& options = {});

/// All layers of `scope` in one pass over the rows.
std::vector<double> layer_magnitudes(const ActivationDataset& dataset, ModuleName scope,
                                     std::span<const std::size_t> rows = {},
                                     const MagnitudeOptions& options = {});

struct Condition {
  std::string language;
  Modality modality = Modality::text;
  std::optional<Task> task;

  std::string label() const;  // e.g. "de/speech/s2t"
  friend auto operator<=>(const Condition&, const Condition&) = default;
};

struct MagnitudeCurve {
  Condition condition;
  std::vector<double> values;      // one per layer
  std::vector<double> deviations;  // (value - trend) * kDeviationScale
};

inline constexpr double kDeviationScale = 1000.0;

/// One curve per distinct (language, modality, task) among the examples, in
/// sorted condition order. Deviations are left empty.
std::vector<MagnitudeCurve> condition_curves(const ActivationDataset& dataset, ModuleName scope,
                                             const MagnitudeOptions& options = {});

/// trend[l] = mean over curves of values[l]; fills each curve's deviations
/// with (values[l] - trend[l]) * 1000. Needs >= 2 curves of equal length.
std::vector<MagnitudeCurve> deviation_curves(std::vector<MagnitudeCurve> curves);

/// The shared trend used by deviation_curves.
std::vector<double> mean_trend(std::span<const MagnitudeCurve> curves);

}  // namespace neuronscope
