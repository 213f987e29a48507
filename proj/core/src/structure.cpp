// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "neuronscope/error.hpp"

namespace neuronscope {

std::size_t LayerHistogram::total() const {
  std::size_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::vector<std::size_t> LayerHistogram::layer_totals(SubmoduleGroup group) const {
  std::vector<std::size_t> out(scope.layers, 0);
  for (std::size_t l = 0; l < scope.layers; ++l) {
    for (std::size_t s = 0; s < scope.submodules.size(); ++s) {
      if (scope.submodules[s].group == group) out[l] += count(l, s);
    }
  }
  return out;
}

std::vector<std::size_t> LayerHistogram::submodule_totals() const {
  std::vector<std::size_t> out(scope.submodules.size(), 0);
  for (std::size_t l = 0; l < scope.layers; ++l) {
    for (std::size_t s = 0; s < scope.submodules.size(); ++s) out[s] += count(l, s);
  }
  return out;
}

LayerHistogram histogram(const SelectionSet& selection, const ModuleSpec& scope) {
  LayerHistogram out;
  out.scope = scope;
  out.counts.assign(scope.cell_count(), 0);
  for (const auto& id : selection.neurons) {
    out.counts[scope.cell_of(id)] += 1;  // throws for neurons outside the schema
  }
  return out;
}

LayerHistogram histogram(const SelectionSet& selection) {
  return histogram(selection, selection.scope);
}

std::size_t overlap(const SelectionSet& a, const SelectionSet& b) {
  if (!(a.scope == b.scope)) throw_usage_error("selection scopes differ");
  std::set<NeuronId> lhs(a.neurons.begin(), a.neurons.end());
  std::size_t shared = 0;
  std::set<NeuronId> seen;
  for (const auto& id : b.neurons) {
    if (lhs.count(id) != 0 && seen.insert(id).second) ++shared;
  }
  return shared;
}

OverlapMatrix overlap_matrix(std::span<const SelectionSet> rows,
                             std::span<const SelectionSet> cols) {
  OverlapMatrix out;
  for (const auto& r : rows) out.row_labels.push_back(r.label());
  for (const auto& c : cols) out.col_labels.push_back(c.label());
  out.cells.reserve(rows.size() * cols.size());
  for (const auto& r : rows) {
    for (const auto& c : cols) out.cells.push_back(overlap(r, c));
  }
  return out;
}

double gini(std::span<const double> values) {
  if (values.empty()) throw_usage_error("gini of an empty vector");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v) || v < 0.0) throw_usage_error("gini requires finite non-negative values");
  }
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    sum += sorted[i];
    weighted += static_cast<double>(i + 1) * sorted[i];
  }
  if (sum <= 0.0) throw_usage_error("gini of an all-zero vector");
  const double n = static_cast<double>(sorted.size());
  return 2.0 * weighted / (n * sum) - (n + 1.0) / n;
}

GiniReport gini_report(const LayerHistogram& histogram) {
  std::vector<double> counts(histogram.counts.begin(), histogram.counts.end());
  GiniReport report;
  report.value = gini(counts);
  report.cells = counts.size();
  return report;
}

}  // namespace neuronscope
