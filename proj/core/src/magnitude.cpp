// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/magnitude.hpp"

#include <cmath>
#include <map>

#include "neuronscope/error.hpp"

namespace neuronscope {

namespace {

// Column sums over the selected rows for the module's columns.
std::vector<double> column_sums(const ActivationDataset& dataset, std::size_t offset,
                                std::size_t width, std::span<const std::size_t> rows,
                                bool absolute) {
  std::vector<double> sums(width, 0.0);
  auto add_row = [&](std::size_t r) {
    const float* src = dataset.row(r).data() + offset;
    if (absolute) {
      for (std::size_t c = 0; c < width; ++c) sums[c] += std::fabs(src[c]);
    } else {
      for (std::size_t c = 0; c < width; ++c) sums[c] += src[c];
    }
  };
  if (rows.empty()) {
    for (std::size_t r = 0; r < dataset.rows(); ++r) add_row(r);
  } else {
    for (std::size_t r : rows) {
      if (r >= dataset.rows()) throw_usage_error("row index out of range");
      add_row(r);
    }
  }
  return sums;
}

double nested_layer_mean(const ModuleSpec& module, const std::vector<double>& sums,
                         std::size_t layer, double row_count) {
  const std::size_t base = layer * module.per_layer();
  double submodule_total = 0.0;
  std::size_t offset = 0;
  for (const auto& sub : module.submodules) {
    double neuron_total = 0.0;
    for (std::size_t j = 0; j < sub.width; ++j) {
      neuron_total += sums[base + offset + j] / row_count;
    }
    submodule_total += neuron_total / static_cast<double>(sub.width);
    offset += sub.width;
  }
  return submodule_total / static_cast<double>(module.submodules.size());
}

std::size_t row_count(const ActivationDataset& dataset, std::span<const std::size_t> rows) {
  const std::size_t n = rows.empty() ? dataset.rows() : rows.size();
  if (n == 0) throw_data_error("empty layer");
  return n;
}

}  // namespace

double layer_magnitude(const ActivationDataset& dataset, ModuleName scope, std::size_t layer,
                       std::span<const std::size_t> rows, const MagnitudeOptions& options) {
  const ModuleSpec& module = dataset.schema().module(scope);
  if (layer >= module.layers) throw_usage_error("layer " + std::to_string(layer) + " out of range");
  const std::size_t n = row_count(dataset, rows);
  const std::size_t offset =
      dataset.schema().module_offset(scope) + layer * module.per_layer();
  // Sums for just this layer, re-based so nested_layer_mean sees layer 0.
  ModuleSpec one_layer = module;
  one_layer.layers = 1;
  const auto sums = column_sums(dataset, offset, module.per_layer(), rows, options.absolute);
  return nested_layer_mean(one_layer, sums, 0, static_cast<double>(n));
}

std::vector<double> layer_magnitudes(const ActivationDataset& dataset, ModuleName scope,
                                     std::span<const std::size_t> rows,
                                     const MagnitudeOptions& options) {
  const ModuleSpec& module = dataset.schema().module(scope);
  const std::size_t n = row_count(dataset, rows);
  const auto sums = column_sums(dataset, dataset.schema().module_offset(scope), module.total(),
                                rows, options.absolute);
  std::vector<double> out(module.layers);
  for (std::size_t l = 0; l < module.layers; ++l) {
    out[l] = nested_layer_mean(module, sums, l, static_cast<double>(n));
  }
  return out;
}

std::string Condition::label() const {
  std::string out = language + "/" + std::string(to_string(modality));
  if (task) out += "/" + std::string(to_string(*task));
  return out;
}

std::vector<MagnitudeCurve> condition_curves(const ActivationDataset& dataset, ModuleName scope,
                                             const MagnitudeOptions& options) {
  std::map<Condition, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    const auto& ex = dataset.examples()[r];
    groups[Condition{ex.language, ex.modality, ex.task}].push_back(r);
  }
  std::vector<MagnitudeCurve> curves;
  for (const auto& [condition, rows] : groups) {
    curves.push_back({condition, layer_magnitudes(dataset, scope, rows, options), {}});
  }
  return curves;
}

std::vector<double> mean_trend(std::span<const MagnitudeCurve> curves) {
  if (curves.empty()) throw_usage_error("no curves");
  const std::size_t layers = curves.front().values.size();
  std::vector<double> trend(layers, 0.0);
  for (const auto& curve : curves) {
    if (curve.values.size() != layers) throw_usage_error("mismatched layer counts");
    for (std::size_t l = 0; l < layers; ++l) trend[l] += curve.values[l];
  }
  for (auto& t : trend) t /= static_cast<double>(curves.size());
  return trend;
}

std::vector<MagnitudeCurve> deviation_curves(std::vector<MagnitudeCurve> curves) {
  if (curves.size() < 2) throw_usage_error("deviation curves need at least two conditions");
  const auto trend = mean_trend(curves);
  for (auto& curve : curves) {
    curve.deviations.resize(trend.size());
    for (std::size_t l = 0; l < trend.size(); ++l) {
      curve.deviations[l] = (curve.values[l] - trend[l]) * kDeviationScale;
    }
  }
  return curves;
}

}  // namespace neuronscope
