// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/types.hpp"

#include <charconv>

#include "neuronscope/error.hpp"

namespace neuronscope {

std::string_view to_string(ModuleName module) {
  switch (module) {
    case ModuleName::speech_encoder: return "speech_encoder";
    case ModuleName::text_encoder: return "text_encoder";
    case ModuleName::text_decoder: return "text_decoder";
  }
  return "?";
}

std::string_view to_string(Modality modality) {
  return modality == Modality::speech ? "speech" : "text";
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::asr: return "asr";
    case Task::s2t: return "s2t";
    case Task::t2t: return "t2t";
  }
  return "?";
}

std::string_view to_string(SubmoduleGroup group) {
  switch (group) {
    case SubmoduleGroup::attn: return "attn";
    case SubmoduleGroup::ffn: return "ffn";
    case SubmoduleGroup::conv: return "conv";
  }
  return "?";
}

ModuleName parse_module(std::string_view text) {
  if (text == "speech_encoder") return ModuleName::speech_encoder;
  if (text == "text_encoder") return ModuleName::text_encoder;
  if (text == "text_decoder") return ModuleName::text_decoder;
  throw_usage_error("unknown module '" + std::string(text) + "'");
}

Modality parse_modality(std::string_view text) {
  if (text == "speech") return Modality::speech;
  if (text == "text") return Modality::text;
  throw_usage_error("unknown modality '" + std::string(text) + "'");
}

Task parse_task(std::string_view text) {
  if (text == "asr") return Task::asr;
  if (text == "s2t") return Task::s2t;
  if (text == "t2t") return Task::t2t;
  throw_usage_error("unknown task '" + std::string(text) + "'");
}

SubmoduleGroup parse_group(std::string_view text) {
  if (text == "attn") return SubmoduleGroup::attn;
  if (text == "ffn") return SubmoduleGroup::ffn;
  if (text == "conv") return SubmoduleGroup::conv;
  throw_usage_error("unknown submodule group '" + std::string(text) + "'");
}

std::string NeuronId::to_string() const {
  std::string out(neuronscope::to_string(module));
  out += '/';
  out += std::to_string(layer);
  out += '/';
  out += submodule;
  out += '/';
  out += std::to_string(index);
  return out;
}

namespace {

std::size_t parse_size(std::string_view text, std::string_view whole) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw_usage_error("malformed neuron id '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

NeuronId NeuronId::parse(std::string_view text) {
  // Submodule names may contain '.', never '/'.
  const auto first = text.find('/');
  const auto second = first == std::string_view::npos ? first : text.find('/', first + 1);
  const auto last = text.rfind('/');
  if (first == std::string_view::npos || second == std::string_view::npos || last <= second) {
    throw_usage_error("malformed neuron id '" + std::string(text) + "'");
  }
  NeuronId id;
  id.module = parse_module(text.substr(0, first));
  id.layer = parse_size(text.substr(first + 1, second - first - 1), text);
  id.submodule = std::string(text.substr(second + 1, last - second - 1));
  id.index = parse_size(text.substr(last + 1), text);
  if (id.submodule.empty()) {
    throw_usage_error("malformed neuron id '" + std::string(text) + "'");
  }
  return id;
}

}  // namespace neuronscope
