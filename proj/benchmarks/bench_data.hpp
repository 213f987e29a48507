// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "neuronscope/activation_store.hpp"
#include "neuronscope/random.hpp"

namespace bench {

using namespace neuronscope;

inline ActivationDataset decoder_dataset(std::size_t rows, std::size_t width, std::uint64_t seed = 7) {
  const ComponentSchema schema({ModuleSpec{ModuleName::text_decoder,
                                           4,
                                           {{"cross_attn.k_proj", width, SubmoduleGroup::attn},
                                            {"ffn.fc1", width * 4, SubmoduleGroup::ffn}}}});
  static const char* languages[] = {"de", "es", "fr", "ja"};
  Xoshiro256 rng(seed);
  std::vector<ExampleMeta> examples(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    examples[r].example_id = "b" + std::to_string(r);
    examples[r].language = languages[r % 4];
    examples[r].modality = (r / 4) % 2 ? Modality::speech : Modality::text;
    examples[r].sequence_length = 1;
  }
  std::vector<float> values(rows * schema.total());
  for (auto& v : values) v = static_cast<float>(rng.normal());
  return ActivationDataset(schema, std::move(examples), std::move(values));
}

}  // namespace bench
