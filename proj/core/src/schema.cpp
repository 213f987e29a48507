// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/schema.hpp"

#include <algorithm>
#include <set>

#include "neuronscope/error.hpp"

namespace neuronscope {

std::size_t ModuleSpec::per_layer() const {
  std::size_t total = 0;
  for (const auto& sub : submodules) total += sub.width;
  return total;
}

std::size_t ModuleSpec::submodule_offset(std::size_t i) const {
  std::size_t offset = 0;
  for (std::size_t s = 0; s < i; ++s) offset += submodules[s].width;
  return offset;
}

std::optional<std::size_t> ModuleSpec::find_submodule(std::string_view name) const {
  for (std::size_t s = 0; s < submodules.size(); ++s) {
    if (submodules[s].name == name) return s;
  }
  return std::nullopt;
}

std::size_t ModuleSpec::local_column(const NeuronId& id) const {
  if (id.module != module) {
    throw_data_error("neuron " + id.to_string() + " is outside module " +
                     std::string(to_string(module)));
  }
  const auto sub = find_submodule(id.submodule);
  if (!sub) throw_data_error("unknown submodule '" + id.submodule + "'");
  if (id.layer >= layers) throw_data_error("layer out of range in " + id.to_string());
  if (id.index >= submodules[*sub].width) {
    throw_data_error("index out of range in " + id.to_string());
  }
  return id.layer * per_layer() + submodule_offset(*sub) + id.index;
}

NeuronId ModuleSpec::neuron_at_local(std::size_t column) const {
  const std::size_t width = per_layer();
  if (width == 0 || column >= width * layers) {
    throw_data_error("column " + std::to_string(column) + " out of range");
  }
  NeuronId id;
  id.module = module;
  id.layer = column / width;
  std::size_t rest = column % width;
  for (const auto& sub : submodules) {
    if (rest < sub.width) {
      id.submodule = sub.name;
      id.index = rest;
      return id;
    }
    rest -= sub.width;
  }
  throw_data_error("column " + std::to_string(column) + " out of range");
}

std::size_t ModuleSpec::cell_of(const NeuronId& id) const {
  local_column(id);  // validates
  return id.layer * submodules.size() + *find_submodule(id.submodule);
}

ComponentSchema::ComponentSchema(std::vector<ModuleSpec> modules) : modules_(std::move(modules)) {
  std::sort(modules_.begin(), modules_.end(),
            [](const ModuleSpec& a, const ModuleSpec& b) { return a.module < b.module; });
  for (std::size_t i = 0; i < modules_.size(); ++i) {
    const auto& spec = modules_[i];
    if (i > 0 && modules_[i - 1].module == spec.module) {
      throw_data_error("module " + std::string(to_string(spec.module)) + " declared twice");
    }
    if (spec.layers == 0) {
      throw_data_error("module " + std::string(to_string(spec.module)) + " has no layers");
    }
    if (spec.submodules.empty()) {
      throw_data_error("module " + std::string(to_string(spec.module)) + " has no submodules");
    }
    std::set<std::string> names;
    for (const auto& sub : spec.submodules) {
      if (sub.width == 0) throw_data_error("submodule '" + sub.name + "' has zero width");
      if (sub.name.empty() || sub.name.find('/') != std::string::npos) {
        throw_data_error("invalid submodule name '" + sub.name + "'");
      }
      if (!names.insert(sub.name).second) {
        throw_data_error("submodule '" + sub.name + "' declared twice");
      }
    }
    offsets_.push_back(total_);
    total_ += spec.total();
  }
}

bool ComponentSchema::has_module(ModuleName module) const {
  return std::any_of(modules_.begin(), modules_.end(),
                     [&](const ModuleSpec& m) { return m.module == module; });
}

const ModuleSpec& ComponentSchema::module(ModuleName module) const {
  for (const auto& spec : modules_) {
    if (spec.module == module) return spec;
  }
  throw_data_error("module " + std::string(to_string(module)) + " not in schema");
}

std::size_t ComponentSchema::module_offset(ModuleName module) const {
  for (std::size_t i = 0; i < modules_.size(); ++i) {
    if (modules_[i].module == module) return offsets_[i];
  }
  throw_data_error("module " + std::string(to_string(module)) + " not in schema");
}

std::size_t ComponentSchema::column_of(const NeuronId& id) const {
  return module_offset(id.module) + module(id.module).local_column(id);
}

NeuronId ComponentSchema::neuron_at(std::size_t column) const {
  for (std::size_t i = modules_.size(); i-- > 0;) {
    if (column >= offsets_[i]) {
      return modules_[i].neuron_at_local(column - offsets_[i]);
    }
  }
  throw_data_error("column " + std::to_string(column) + " out of range");
}

ModuleSpec ComponentSchema::reference_module(ModuleName module) {
  using G = SubmoduleGroup;
  ModuleSpec spec;
  spec.module = module;
  spec.layers = 24;
  switch (module) {
    case ModuleName::speech_encoder:
      spec.submodules = {
          {"ffn1_layer_norm", 1024, G::ffn},
          {"ffn1.intermediate_dense", 4096, G::ffn},
          {"ffn1.output_dense", 1024, G::ffn},
          {"ffn2_layer_norm", 1024, G::ffn},
          {"ffn2.intermediate_dense", 4096, G::ffn},
          {"ffn2.output_dense", 1024, G::ffn},
          {"layer_norm", 1024, G::attn},
          {"linear_q", 1024, G::attn},
          {"linear_k", 1024, G::attn},
          {"linear_v", 1024, G::attn},
          {"linear_out", 1024, G::attn},
          {"conv_module.layer_norm", 1024, G::conv},
          {"conv_module.pointwise_conv1", 2048, G::conv},
          {"conv_module.glu", 1024, G::conv},
          {"conv_module.depthwise_conv", 1024, G::conv},
          {"conv_module.depthwise_layer_norm", 1024, G::conv},
          {"conv_module.pointwise_conv2", 1024, G::conv},
      };
      break;
    case ModuleName::text_encoder:
      spec.submodules = {
          {"self_attn_layer_norm", 1024, G::attn},
          {"self_attn.q_proj", 1024, G::attn},
          {"self_attn.k_proj", 1024, G::attn},
          {"self_attn.v_proj", 1024, G::attn},
          {"self_attn.out_proj", 1024, G::attn},
          {"ffn_layer_norm", 1024, G::ffn},
          {"ffn.fc1", 8192, G::ffn},
          {"ffn.fc2", 1024, G::ffn},
      };
      break;
    case ModuleName::text_decoder:
      spec.submodules = {
          {"self_attn_layer_norm", 1024, G::attn},
          {"self_attn.q_proj", 1024, G::attn},
          {"self_attn.k_proj", 1024, G::attn},
          {"self_attn.v_proj", 1024, G::attn},
          {"self_attn.out_proj", 1024, G::attn},
          {"cross_attn_layer_norm", 1024, G::attn},
          {"cross_attn.q_proj", 1024, G::attn},
          {"cross_attn.k_proj", 1024, G::attn},
          {"cross_attn.v_proj", 1024, G::attn},
          {"cross_attn.out_proj", 1024, G::attn},
          {"ffn_layer_norm", 1024, G::ffn},
          {"ffn.fc1", 8192, G::ffn},
          {"ffn.fc2", 1024, G::ffn},
      };
      break;
  }
  return spec;
}

ComponentSchema ComponentSchema::reference() {
  return ComponentSchema({reference_module(ModuleName::speech_encoder),
                          reference_module(ModuleName::text_encoder),
                          reference_module(ModuleName::text_decoder)});
}

SubmoduleGroup infer_group(std::string_view name) {
  if (name.find("conv") != std::string_view::npos) return SubmoduleGroup::conv;
  if (name.find("ffn") != std::string_view::npos || name.find("fc") != std::string_view::npos ||
      name.find("dense") != std::string_view::npos || name.find("mlp") != std::string_view::npos) {
    return SubmoduleGroup::ffn;
  }
  return SubmoduleGroup::attn;
}

}  // namespace neuronscope
