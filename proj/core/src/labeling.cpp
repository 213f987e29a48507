// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/labeling.hpp"

#include "neuronscope/error.hpp"

namespace neuronscope {

std::string_view to_string(Setting setting) {
  switch (setting) {
    case Setting::unimodal_language: return "unimodal_language";
    case Setting::multimodal_language: return "multimodal_language";
    case Setting::modality: return "modality";
    case Setting::language_modality: return "language_modality";
  }
  return "?";
}

Setting parse_setting(std::string_view text) {
  if (text == "unimodal_language" || text == "unimodal") return Setting::unimodal_language;
  if (text == "multimodal_language" || text == "multimodal") return Setting::multimodal_language;
  if (text == "modality") return Setting::modality;
  if (text == "language_modality") return Setting::language_modality;
  throw_usage_error("unknown setting '" + std::string(text) + "'");
}

void TargetSpec::validate() const {
  const bool lang = language.has_value() && !language->empty();
  const bool mod = modality.has_value();
  const bool restricted = restricted_modality.has_value();
  const std::string what(to_string(setting));
  switch (setting) {
    case Setting::unimodal_language:
      if (!lang || !restricted || mod) {
        throw_usage_error(what + " requires a language and a restricted modality");
      }
      break;
    case Setting::multimodal_language:
      if (!lang || mod || restricted) throw_usage_error(what + " requires a language only");
      break;
    case Setting::modality:
      if (lang || !mod || restricted) throw_usage_error(what + " requires a modality only");
      break;
    case Setting::language_modality:
      if (!lang || !mod || restricted) {
        throw_usage_error(what + " requires a language and a modality");
      }
      break;
  }
}

std::string TargetSpec::name() const {
  std::string out(to_string(setting));
  out += ':';
  switch (setting) {
    case Setting::unimodal_language:
      out += language.value_or("?");
      out += '@';
      out += restricted_modality ? to_string(*restricted_modality) : "?";
      break;
    case Setting::multimodal_language:
      out += language.value_or("?");
      break;
    case Setting::modality:
      out += modality ? to_string(*modality) : "?";
      break;
    case Setting::language_modality:
      out += language.value_or("?");
      out += '+';
      out += modality ? to_string(*modality) : "?";
      break;
  }
  return out;
}

LabelSet build_labels(std::span<const ExampleMeta> examples, const TargetSpec& spec,
                      ModuleName scope) {
  spec.validate();
  if (spec.requires_shared_decoder() && scope != ModuleName::text_decoder) {
    throw_usage_error("setting requires shared decoder");
  }

  LabelSet out;
  out.indices.reserve(examples.size());
  out.labels.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    bool positive = false;
    switch (spec.setting) {
      case Setting::unimodal_language:
        if (ex.modality != *spec.restricted_modality) continue;
        positive = ex.language == *spec.language;
        break;
      case Setting::multimodal_language:
        positive = ex.language == *spec.language;
        break;
      case Setting::modality:
        positive = ex.modality == *spec.modality;
        break;
      case Setting::language_modality:
        positive = ex.language == *spec.language && ex.modality == *spec.modality;
        break;
    }
    out.indices.push_back(i);
    out.labels.push_back(positive ? 1 : 0);
    out.positives += positive ? 1 : 0;
  }
  if (out.positives == 0 || out.positives == out.size()) {
    throw_data_error("degenerate labels");
  }
  return out;
}

}  // namespace neuronscope
