// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/intervention.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "neuronscope/error.hpp"
#include "neuronscope/parallel.hpp"

namespace neuronscope {

NeuronStats::NeuronStats(std::vector<NeuronStat> stats) : stats_(std::move(stats)) {
  std::sort(stats_.begin(), stats_.end(),
            [](const NeuronStat& a, const NeuronStat& b) { return a.neuron < b.neuron; });
  for (std::size_t i = 1; i < stats_.size(); ++i) {
    if (stats_[i - 1].neuron == stats_[i].neuron) {
      throw_data_error("duplicate statistics for " + stats_[i].neuron.to_string());
    }
  }
}

const NeuronStat* NeuronStats::find(const NeuronId& id) const {
  auto it = std::lower_bound(stats_.begin(), stats_.end(), id,
                             [](const NeuronStat& s, const NeuronId& key) { return s.neuron < key; });
  if (it == stats_.end() || !(it->neuron == id)) return nullptr;
  return &*it;
}

namespace {

double median_in_place(std::vector<float>& values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

NeuronStats medians_for_columns(const ActivationDataset& dataset,
                                const std::vector<std::size_t>& columns,
                                std::vector<NeuronId> ids, std::size_t workers) {
  if (dataset.rows() == 0) throw_data_error("empty dataset");
  std::vector<NeuronStat> stats(columns.size());
  const std::size_t rows = dataset.rows();
  parallel_for(columns.size(), 64, resolve_workers(workers),
               [&](std::size_t begin, std::size_t end) {
                 // Row-outer gather keeps the reads sequential within a row.
                 std::vector<float> block((end - begin) * rows);
                 for (std::size_t r = 0; r < rows; ++r) {
                   const float* src = dataset.row(r).data();
                   for (std::size_t i = begin; i < end; ++i) {
                     block[(i - begin) * rows + r] = src[columns[i]];
                   }
                 }
                 std::vector<float> column(rows);
                 for (std::size_t i = begin; i < end; ++i) {
                   const auto* first = block.data() + (i - begin) * rows;
                   column.assign(first, first + rows);
                   stats[i].neuron = std::move(ids[i]);
                   stats[i].median = median_in_place(column);
                   stats[i].count = rows;
                 }
               });
  return NeuronStats(std::move(stats));
}

}  // namespace

NeuronStats compute_medians(const ActivationDataset& dataset, std::span<const NeuronId> neurons,
                            std::size_t workers) {
  if (neurons.empty()) throw_usage_error("empty neuron list");
  std::set<NeuronId> unique(neurons.begin(), neurons.end());
  std::vector<NeuronId> ids(unique.begin(), unique.end());
  std::vector<std::size_t> columns;
  columns.reserve(ids.size());
  for (const auto& id : ids) columns.push_back(dataset.schema().column_of(id));
  return medians_for_columns(dataset, columns, std::move(ids), workers);
}

NeuronStats compute_module_medians(const ActivationDataset& dataset, ModuleName scope,
                                   std::size_t workers) {
  const auto& module = dataset.schema().module(scope);
  const std::size_t offset = dataset.schema().module_offset(scope);
  std::vector<std::size_t> columns(module.total());
  std::vector<NeuronId> ids;
  ids.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    columns[c] = offset + c;
    ids.push_back(module.neuron_at_local(c));
  }
  return medians_for_columns(dataset, columns, std::move(ids), workers);
}

std::string_view to_string(PlanKind kind) {
  return kind == PlanKind::median_targeted ? "median_targeted" : "random_baseline";
}

PlanKind parse_plan_kind(std::string_view text) {
  if (text == "median_targeted") return PlanKind::median_targeted;
  if (text == "random_baseline") return PlanKind::random_baseline;
  throw_data_error("unknown plan kind '" + std::string(text) + "'");
}

namespace {

double require_median(const NeuronStats& stats, const NeuronId& id) {
  const NeuronStat* stat = stats.find(id);
  if (stat == nullptr) throw_data_error("no median for " + id.to_string());
  return stat->median;
}

}  // namespace

InterventionPlan make_plan(std::span<const SelectionSet> selections, const NeuronStats& stats) {
  if (selections.empty()) throw_usage_error("no selections to plan");
  InterventionPlan plan;
  plan.kind = PlanKind::median_targeted;
  std::set<NeuronId> seen;
  for (const auto& selection : selections) {
    if (!plan.provenance.empty()) plan.provenance += ',';
    plan.provenance += selection.label();
    for (const auto& id : selection.neurons) {
      if (!seen.insert(id).second) continue;
      plan.entries.push_back({id, require_median(stats, id)});
    }
  }
  return plan;
}

InterventionPlan make_plan(const SelectionSet& selection, const NeuronStats& stats) {
  return make_plan(std::span<const SelectionSet>(&selection, 1), stats);
}

std::vector<NeuronId> sample_neurons(const ComponentSchema& schema, ModuleName scope,
                                     std::size_t k, std::uint64_t seed) {
  const ModuleSpec& module = schema.module(scope);
  const std::size_t n = module.total();
  if (k == 0 || k > n) {
    throw_usage_error("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }

  std::vector<std::uint32_t> slots(n);
  std::iota(slots.begin(), slots.end(), 0u);
  Xoshiro256 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(slots[i], slots[j]);
  }

  std::vector<NeuronId> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(module.neuron_at_local(slots[i]));
  return out;
}

InterventionPlan make_random_baseline(const ComponentSchema& schema, ModuleName scope,
                                      std::size_t k, std::uint64_t seed,
                                      const NeuronStats& stats) {
  InterventionPlan plan;
  plan.kind = PlanKind::random_baseline;
  plan.seed = seed;
  plan.provenance = "random";
  for (auto& id : sample_neurons(schema, scope, k, seed)) {
    const double median = require_median(stats, id);
    plan.entries.push_back({std::move(id), median});
  }
  return plan;
}

ActivationDataset apply_plan(const ActivationDataset& dataset, const InterventionPlan& plan) {
  std::vector<std::pair<std::size_t, float>> targets;
  targets.reserve(plan.entries.size());
  for (const auto& entry : plan.entries) {
    targets.emplace_back(dataset.schema().column_of(entry.neuron),
                         static_cast<float>(entry.replacement));
  }

  std::vector<float> values(dataset.values().begin(), dataset.values().end());
  const std::size_t cols = dataset.columns();
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    float* row = values.data() + r * cols;
    for (const auto& [column, value] : targets) row[column] = value;
  }
  return ActivationDataset(dataset.schema(), dataset.examples(), std::move(values));
}

double targeted_fraction(const InterventionPlan& plan, const ComponentSchema& schema,
                         ModuleName scope) {
  const std::size_t total = schema.module(scope).total();
  std::size_t in_scope = 0;
  for (const auto& entry : plan.entries) in_scope += (entry.neuron.module == scope);
  return static_cast<double>(in_scope) / static_cast<double>(total);
}

}  // namespace neuronscope
