// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neuronscope/types.hpp"

namespace neuronscope {

enum class Setting : std::uint8_t {
  unimodal_language,    // language vs rest, inside one modality
  multimodal_language,  // language vs rest, modalities pooled
  modality,             // speech vs text, languages pooled
  language_modality,    // (language, modality) pair vs rest
};

std::string_view to_string(Setting setting);
Setting parse_setting(std::string_view text);

/// One-vs-rest target. Required fields per setting:
///   unimodal_language    language + restricted_modality
///   multimodal_language  language
///   modality             modality
///   language_modality    language + modality
struct TargetSpec {
  Setting setting = Setting::unimodal_language;
  std::optional<std::string> language;
  std::optional<Modality> modality;
  std::optional<Modality> restricted_modality;

  // Throws Error(usage) when a required field is missing or an extra one set.
  void validate() const;

  // Settings that only make sense where both modalities meet.
  bool requires_shared_decoder() const { return setting != Setting::unimodal_language; }

  // Short stable name such as "unimodal_language:de@text".
  std::string name() const;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

struct LabelSet {
  std::vector<std::size_t> indices;  // selected example rows, ascending
  std::vector<std::uint8_t> labels;  // 1 = positive, parallel to indices
  std::size_t positives = 0;

  std::size_t size() const { return indices.size(); }
};

/// Builds the binary target for `spec` over `examples` as seen from module
/// `scope`. Examples whose language or modality is not the target count as
/// negatives.
///
/// Errors: "setting requires shared decoder" (modality-involving setting on an
/// encoder scope), "degenerate labels" (no positives or no negatives).
LabelSet build_labels(std::span<const ExampleMeta> examples, const TargetSpec& spec,
                      ModuleName scope);

}  // namespace neuronscope
