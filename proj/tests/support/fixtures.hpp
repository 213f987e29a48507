// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "neuronscope/activation_store.hpp"
#include "neuronscope/random.hpp"
#include "neuronscope/schema.hpp"
#include "neuronscope/synthetic.hpp"

namespace fixtures {

using namespace neuronscope;

/// Small decoder: `layers` layers of {self_attn.q_proj, cross_attn.k_proj,
/// cross_attn.v_proj, ffn.fc1} with the given widths.
inline ModuleSpec small_decoder(std::size_t layers = 2, std::size_t attn = 3,
                                std::size_t ffn = 5) {
  return ModuleSpec{ModuleName::text_decoder,
                    layers,
                    {{"self_attn.q_proj", attn, SubmoduleGroup::attn},
                     {"cross_attn.k_proj", attn, SubmoduleGroup::attn},
                     {"cross_attn.v_proj", attn, SubmoduleGroup::attn},
                     {"ffn.fc1", ffn, SubmoduleGroup::ffn}}};
}

inline ModuleSpec small_encoder(ModuleName module, std::size_t layers = 2) {
  return ModuleSpec{module,
                    layers,
                    {{"self_attn.k_proj", 2, SubmoduleGroup::attn},
                     {"ffn.fc1", 4, SubmoduleGroup::ffn}}};
}

inline ExampleMeta example(const std::string& language, Modality modality,
                           std::optional<Task> task = std::nullopt, std::string id = {}) {
  ExampleMeta ex;
  ex.example_id = id.empty() ? language + "-" + std::string(to_string(modality)) : id;
  ex.language = language;
  ex.modality = modality;
  ex.task = task;
  ex.sequence_length = 7;
  return ex;
}

/// Random finite dataset with uniformly drawn metadata.
inline ActivationDataset random_dataset(Xoshiro256& rng, const ComponentSchema& schema,
                                        std::size_t rows) {
  static const char* languages[] = {"de", "en", "es", "fr", "ja", "zh"};
  std::vector<ExampleMeta> examples;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto modality = rng.below(2) ? Modality::speech : Modality::text;
    auto ex = example(languages[rng.below(6)], modality,
                      rng.below(3) == 0 ? std::nullopt
                                        : std::optional<Task>(static_cast<Task>(rng.below(3))),
                      "ex" + std::to_string(r));
    ex.sequence_length = 1 + rng.below(500);
    examples.push_back(std::move(ex));
  }
  std::vector<float> values(rows * schema.total());
  for (auto& v : values) v = static_cast<float>(rng.normal() * 3.0);
  return ActivationDataset(schema, std::move(examples), std::move(values));
}

/// Directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("neuronscope-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
