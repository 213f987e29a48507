// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "neuronscope/magnitude.hpp"
#include "neuronscope/structure.hpp"

namespace neuronscope::svg {

/// Stacked bars of selected-neuron counts per layer, one colour per
/// submodule, restricted to submodules of `group`.
std::string layer_histogram_chart(const LayerHistogram& histogram, SubmoduleGroup group,
                                  const std::string& title);

/// One line per condition over layers, plotting the deviations (or the raw
/// values when `deviations` is false).
std::string magnitude_chart(std::span<const MagnitudeCurve> curves, bool deviations,
                            const std::string& title);

/// Heat map of an overlap matrix with the counts printed in each cell.
std::string overlap_chart(const OverlapMatrix& matrix, const std::string& title);

}  // namespace neuronscope::svg
