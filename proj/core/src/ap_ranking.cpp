// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/ap_ranking.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "neuronscope/error.hpp"
#include "neuronscope/parallel.hpp"

namespace neuronscope {

namespace {

// Monotone map from float to unsigned: a < b  <=>  key(a) < key(b).
// -0.0 and +0.0 collapse to one key so they tie.
std::uint32_t order_key(float value) {
  if (value == 0.0f) value = 0.0f;
  const auto bits = std::bit_cast<std::uint32_t>(value);
  return (bits & 0x80000000u) ? ~bits : (bits | 0x80000000u);
}

std::size_t count_positives(std::span<const std::uint8_t> labels) {
  std::size_t positives = 0;
  for (auto y : labels) positives += (y != 0);
  return positives;
}

}  // namespace

double APScratch::compute(std::span<const float> scores, std::span<const std::uint8_t> labels,
                          std::size_t positives) {
  const std::size_t n = scores.size();
  keys_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys_[i] = (static_cast<std::uint64_t>(order_key(scores[i])) << 1) | (labels[i] != 0);
  }
  std::sort(keys_.begin(), keys_.end());

  const double total_pos = static_cast<double>(positives);
  std::size_t tp = 0;
  std::size_t fp = 0;
  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t i = n;
  while (i > 0) {
    const std::uint64_t group = keys_[i - 1] >> 1;
    while (i > 0 && (keys_[i - 1] >> 1) == group) {
      --i;
      if (keys_[i] & 1u) {
        ++tp;
      } else {
        ++fp;
      }
    }
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

double average_precision(std::span<const float> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw_usage_error("scores and labels differ in length");
  }
  const std::size_t positives = count_positives(labels);
  if (positives == 0 || positives == labels.size()) throw_data_error("degenerate labels");
  APScratch scratch;
  return scratch.compute(scores, labels, positives);
}

APTable rank_neurons(const ActivationDataset& dataset, const TargetSpec& spec, ModuleName scope,
                     const RankOptions& options) {
  if (dataset.rows() == 0) throw_data_error("empty dataset");
  const LabelSet labels = build_labels(dataset.examples(), spec, scope);

  const ModuleSpec& module = dataset.schema().module(scope);
  const std::size_t offset = dataset.schema().module_offset(scope);
  const std::size_t width = module.total();
  const std::size_t rows = labels.size();
  const std::size_t block = std::max<std::size_t>(1, options.block_columns);

  APTable table;
  table.target = spec;
  table.scope = module;
  table.scores.assign(width, 0.0);
  table.examples = rows;
  table.positives = labels.positives;

  parallel_for(width, block, resolve_workers(options.workers),
               [&](std::size_t begin, std::size_t end) {
                 const std::size_t cols = end - begin;
                 // Column-major copy of the block so each AP reads contiguously.
                 std::vector<float> buffer(cols * rows);
                 for (std::size_t r = 0; r < rows; ++r) {
                   const float* src = dataset.row(labels.indices[r]).data() + offset + begin;
                   for (std::size_t c = 0; c < cols; ++c) buffer[c * rows + r] = src[c];
                 }
                 APScratch scratch;
                 for (std::size_t c = 0; c < cols; ++c) {
                   table.scores[begin + c] = scratch.compute(
                       std::span<const float>(buffer).subspan(c * rows, rows), labels.labels,
                       labels.positives);
                 }
               });
  return table;
}

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::top ? "top" : "bottom";
}

Polarity parse_polarity(std::string_view text) {
  if (text == "top") return Polarity::top;
  if (text == "bottom") return Polarity::bottom;
  throw_usage_error("unknown polarity '" + std::string(text) + "'");
}

std::string SelectionSet::label() const {
  return target.name() + "/" + std::string(to_string(polarity)) + "/" + std::to_string(k);
}

SelectionSet select(const APTable& table, Polarity polarity, std::size_t k) {
  const std::size_t n = table.scores.size();
  if (k == 0 || k > n) {
    throw_usage_error("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& scores = table.scores;
  auto before = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) {
      return polarity == Polarity::top ? scores[a] > scores[b] : scores[a] < scores[b];
    }
    return a < b;
  };
  // Strict total order, so the partial selection is fully determined.
  if (k < n) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                     before);
  }
  order.resize(k);
  std::sort(order.begin(), order.end(), before);

  SelectionSet out;
  out.target = table.target;
  out.scope = table.scope;
  out.polarity = polarity;
  out.k = k;
  out.neurons.reserve(k);
  out.scores.reserve(k);
  for (std::size_t column : order) {
    out.neurons.push_back(table.scope.neuron_at_local(column));
    out.scores.push_back(scores[column]);
  }
  return out;
}

}  // namespace neuronscope
