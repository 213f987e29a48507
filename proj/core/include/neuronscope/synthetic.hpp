// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neuronscope/activation_store.hpp"
#include "neuronscope/random.hpp"

namespace neuronscope {

/// Examples that count as the planted class. Unset fields match anything.
struct ClassSelector {
  std::optional<std::string> language;
  std::optional<Modality> modality;

  bool matches(const ExampleMeta& example) const {
    return (!language || *language == example.language) &&
           (!modality || *modality == example.modality);
  }
};

struct PlantedNeuron {
  NeuronId neuron;
  ClassSelector target;
  double positive_mean = 1.0;
  double negative_mean = 0.0;
  double stddev = 0.1;
};

/// Fixture description: every (language, modality) cell gets
/// `examples_per_cell` rows; background neurons ~ N(0, 1); planted neurons
/// ~ N(positive_mean or negative_mean, stddev) by class membership.
struct PlantSpec {
  ComponentSchema schema;
  std::vector<std::string> languages;
  std::vector<Modality> modalities = {Modality::speech, Modality::text};
  std::size_t examples_per_cell = 0;
  std::vector<PlantedNeuron> planted;
  std::uint64_t seed = kDefaultSeed;
  double background_mean = 0.0;
  double background_stddev = 1.0;

  void validate() const;
};

/// Deterministic in `spec` alone. Row r draws from its own stream seeded by
/// derive_seed(seed, r), so the result is independent of the worker count.
/// Rows are ordered language-major, then modality, then example number; the
/// task is s2t for speech rows and t2t for text rows.
ActivationDataset generate(const PlantSpec& spec, std::size_t workers = 0);

}  // namespace neuronscope
