// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "neuronscope/ap_ranking.hpp"
#include "neuronscope/schema.hpp"

namespace neuronscope {

/// Selected-neuron counts per (layer, submodule) cell of one module.
struct LayerHistogram {
  ModuleSpec scope;
  std::vector<std::size_t> counts;  // layer-major: counts[layer * S + submodule]

  std::size_t count(std::size_t layer, std::size_t submodule) const {
    return counts[layer * scope.submodules.size() + submodule];
  }
  std::size_t total() const;
  // Per-layer totals for one submodule family.
  std::vector<std::size_t> layer_totals(SubmoduleGroup group) const;
  // Counts summed over layers, one entry per submodule.
  std::vector<std::size_t> submodule_totals() const;
};

LayerHistogram histogram(const SelectionSet& selection);
// Checks the selection against an explicit module layout first.
LayerHistogram histogram(const SelectionSet& selection, const ModuleSpec& scope);

/// |a ∩ b| over neuron identities. Throws when the scopes differ.
std::size_t overlap(const SelectionSet& a, const SelectionSet& b);

/// Pairwise overlaps, rows x cols (typically speech-conditioned vs
/// text-conditioned selections of each language).
struct OverlapMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::size_t> cells;  // row-major

  std::size_t at(std::size_t r, std::size_t c) const { return cells[r * col_labels.size() + c]; }
};

OverlapMatrix overlap_matrix(std::span<const SelectionSet> rows, std::span<const SelectionSet> cols);

/// Gini coefficient of non-negative values:
///   G = 2 * sum_i i * x_(i) / (n * sum x) - (n + 1) / n,  x ascending, i = 1..n
/// Throws when the sum is zero or any value is negative / non-finite.
double gini(std::span<const double> values);

struct GiniReport {
  double value = 0.0;
  std::string unit = "layer_submodule_counts";
  std::size_t cells = 0;
};

/// Gini over every (layer, submodule) cell of the histogram, empty cells
/// included.
GiniReport gini_report(const LayerHistogram& histogram);

}  // namespace neuronscope
