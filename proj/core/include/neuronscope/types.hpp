// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace neuronscope {

// Enumerator order is the column order of modules inside a dump.
enum class ModuleName : std::uint8_t {
  speech_encoder,
  text_encoder,
  text_decoder,
};

enum class Modality : std::uint8_t { speech, text };

enum class Task : std::uint8_t { asr, s2t, t2t };

// Submodule family used when grouping histograms.
enum class SubmoduleGroup : std::uint8_t { attn, ffn, conv };

std::string_view to_string(ModuleName module);
std::string_view to_string(Modality modality);
std::string_view to_string(Task task);
std::string_view to_string(SubmoduleGroup group);

// Parsers throw Error(usage) on unknown spellings.
ModuleName parse_module(std::string_view text);
Modality parse_modality(std::string_view text);
Task parse_task(std::string_view text);
SubmoduleGroup parse_group(std::string_view text);

/// Coordinate of one hidden dimension: (module, layer, submodule, index).
///
/// The textual spelling is "module/layer/submodule/index", for example
/// "text_decoder/5/cross_attn.k_proj/17".
struct NeuronId {
  ModuleName module = ModuleName::text_decoder;
  std::size_t layer = 0;
  std::string submodule;
  std::size_t index = 0;

  std::string to_string() const;
  static NeuronId parse(std::string_view text);

  friend bool operator==(const NeuronId&, const NeuronId&) = default;
  friend auto operator<=>(const NeuronId&, const NeuronId&) = default;
};

/// Per-example metadata carried in the dump header.
struct ExampleMeta {
  std::string example_id;
  std::string language;  // ISO-ish code, e.g. "de"; open set
  Modality modality = Modality::text;
  std::optional<Task> task;
  std::uint64_t sequence_length = 1;

  friend bool operator==(const ExampleMeta&, const ExampleMeta&) = default;
};

}  // namespace neuronscope
