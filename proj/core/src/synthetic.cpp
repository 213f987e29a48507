// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/synthetic.hpp"

#include <cmath>
#include <set>

#include "neuronscope/error.hpp"
#include "neuronscope/parallel.hpp"

namespace neuronscope {

void PlantSpec::validate() const {
  if (schema.total() == 0) throw_usage_error("plant spec has an empty schema");
  if (languages.empty() || modalities.empty()) {
    throw_usage_error("plant spec needs at least one language and one modality");
  }
  if (examples_per_cell == 0) throw_usage_error("examples_per_cell must be positive");
  if (!(background_stddev >= 0.0) || !std::isfinite(background_mean)) {
    throw_usage_error("invalid background distribution");
  }
  std::set<NeuronId> seen;
  for (const auto& p : planted) {
    schema.column_of(p.neuron);  // throws for neurons outside the schema
    if (!seen.insert(p.neuron).second) {
      throw_usage_error("neuron " + p.neuron.to_string() + " planted twice");
    }
    if (p.positive_mean == p.negative_mean) {
      throw_usage_error("planted neuron " + p.neuron.to_string() + " has equal class means");
    }
    if (!(p.stddev >= 0.0) || !std::isfinite(p.positive_mean) ||
        !std::isfinite(p.negative_mean)) {
      throw_usage_error("invalid distribution for " + p.neuron.to_string());
    }
  }
}

ActivationDataset generate(const PlantSpec& spec, std::size_t workers) {
  spec.validate();

  std::vector<ExampleMeta> examples;
  for (const auto& language : spec.languages) {
    for (Modality modality : spec.modalities) {
      for (std::size_t i = 0; i < spec.examples_per_cell; ++i) {
        ExampleMeta ex;
        ex.example_id = language + "-" + std::string(to_string(modality)) + "-" + std::to_string(i);
        ex.language = language;
        ex.modality = modality;
        ex.task = modality == Modality::speech ? Task::s2t : Task::t2t;
        ex.sequence_length = 1;
        examples.push_back(std::move(ex));
      }
    }
  }

  struct Plant {
    std::size_t column;
    const PlantedNeuron* spec;
  };
  std::vector<Plant> plants;
  for (const auto& p : spec.planted) plants.push_back({spec.schema.column_of(p.neuron), &p});

  const std::size_t cols = spec.schema.total();
  std::vector<float> values(examples.size() * cols);
  parallel_for(examples.size(), 16, resolve_workers(workers),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t r = begin; r < end; ++r) {
                   Xoshiro256 rng(derive_seed(spec.seed, r));
                   float* row = values.data() + r * cols;
                   for (std::size_t c = 0; c < cols; ++c) {
                     row[c] = static_cast<float>(spec.background_mean +
                                                 spec.background_stddev * rng.normal());
                   }
                   // Planted draws come after the background pass so adding a
                   // plant never shifts the background stream.
                   for (const auto& plant : plants) {
                     const auto& p = *plant.spec;
                     const double mean =
                         p.target.matches(examples[r]) ? p.positive_mean : p.negative_mean;
                     row[plant.column] = static_cast<float>(mean + p.stddev * rng.normal());
                   }
                 }
               });
  return ActivationDataset(spec.schema, std::move(examples), std::move(values));
}

}  // namespace neuronscope
