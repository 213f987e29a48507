// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neuronscope/activation_store.hpp"
#include "neuronscope/ap_ranking.hpp"
#include "neuronscope/random.hpp"

namespace neuronscope {

struct NeuronStat {
  NeuronId neuron;
  double median = 0.0;
  std::size_t count = 0;  // examples that contributed
};

/// Per-neuron medians over pooled activations, looked up by neuron id.
class NeuronStats {
 public:
  NeuronStats() = default;
  explicit NeuronStats(std::vector<NeuronStat> stats);

  const std::vector<NeuronStat>& entries() const { return stats_; }
  std::size_t size() const { return stats_.size(); }
  const NeuronStat* find(const NeuronId& id) const;

 private:
  std::vector<NeuronStat> stats_;  // sorted by neuron id
};

/// Median of every listed neuron's column. Even counts take the midpoint of
/// the two middle order statistics (in double).
NeuronStats compute_medians(const ActivationDataset& dataset, std::span<const NeuronId> neurons,
                            std::size_t workers = 0);

/// Medians for every neuron of one module.
NeuronStats compute_module_medians(const ActivationDataset& dataset, ModuleName scope,
                                   std::size_t workers = 0);

enum class PlanKind : std::uint8_t { median_targeted, random_baseline };

std::string_view to_string(PlanKind kind);
PlanKind parse_plan_kind(std::string_view text);

struct PlanEntry {
  NeuronId neuron;
  double replacement = 0.0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

/// Neurons to overwrite and the value each one receives. The JSON form of this
/// struct is what an inference-time hook consumes.
struct InterventionPlan {
  PlanKind kind = PlanKind::median_targeted;
  std::optional<std::uint64_t> seed;  // random_baseline only
  std::string provenance;             // selection label(s) or "random"
  std::vector<PlanEntry> entries;

  friend bool operator==(const InterventionPlan&, const InterventionPlan&) = default;
};

/// Median replacement for the neurons of one or more selections (e.g. top-k
/// and bottom-k together). A neuron present in several selections appears
/// once, at its first position.
InterventionPlan make_plan(std::span<const SelectionSet> selections, const NeuronStats& stats);
InterventionPlan make_plan(const SelectionSet& selection, const NeuronStats& stats);

/// k neurons of `scope` drawn uniformly without replacement.
///
/// Sampling: Xoshiro256(seed) drives a partial Fisher-Yates shuffle of the
/// module-local columns 0..N-1; step i swaps slot i with slot
/// i + below(N - i). The first k slots, in draw order, are the sample.
std::vector<NeuronId> sample_neurons(const ComponentSchema& schema, ModuleName scope,
                                     std::size_t k, std::uint64_t seed);

/// Plan over sample_neurons(schema, scope, k, seed), each neuron replaced by
/// its median from `stats`.
InterventionPlan make_random_baseline(const ComponentSchema& schema, ModuleName scope,
                                      std::size_t k, std::uint64_t seed,
                                      const NeuronStats& stats);

/// Copy of `dataset` with every targeted column set to its replacement (cast
/// to float). Other entries are copied bit-for-bit.
ActivationDataset apply_plan(const ActivationDataset& dataset, const InterventionPlan& plan);

/// |plan neurons in `scope`| / neurons in `scope`.
double targeted_fraction(const InterventionPlan& plan, const ComponentSchema& schema,
                         ModuleName scope);

}  // namespace neuronscope
