// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neuronscope/types.hpp"

namespace neuronscope {

struct SubmoduleSpec {
  std::string name;
  std::size_t width = 0;
  SubmoduleGroup group = SubmoduleGroup::attn;

  friend bool operator==(const SubmoduleSpec&, const SubmoduleSpec&) = default;
};

/// One model module with `layers` identical layers. Submodule order is the
/// column order within a layer.
struct ModuleSpec {
  ModuleName module = ModuleName::text_decoder;
  std::size_t layers = 0;
  std::vector<SubmoduleSpec> submodules;

  std::size_t per_layer() const;
  std::size_t total() const { return per_layer() * layers; }

  // Offset of submodule `i` inside one layer.
  std::size_t submodule_offset(std::size_t i) const;
  std::optional<std::size_t> find_submodule(std::string_view name) const;

  // Module-local column <-> neuron.
  std::size_t local_column(const NeuronId& id) const;
  NeuronId neuron_at_local(std::size_t column) const;

  // Index of the (layer, submodule) cell, row-major over layers.
  std::size_t cell_of(const NeuronId& id) const;
  std::size_t cell_count() const { return layers * submodules.size(); }

  friend bool operator==(const ModuleSpec&, const ModuleSpec&) = default;
};

/// Ordered set of modules. Columns run (module, layer, submodule, index)
/// ascending with modules in ModuleName order.
class ComponentSchema {
 public:
  ComponentSchema() = default;
  explicit ComponentSchema(std::vector<ModuleSpec> modules);

  const std::vector<ModuleSpec>& modules() const { return modules_; }
  std::size_t total() const { return total_; }

  bool has_module(ModuleName module) const;
  const ModuleSpec& module(ModuleName module) const;
  std::size_t module_offset(ModuleName module) const;

  std::size_t column_of(const NeuronId& id) const;
  NeuronId neuron_at(std::size_t column) const;

  friend bool operator==(const ComponentSchema& a, const ComponentSchema& b) {
    return a.modules_ == b.modules_;
  }

  /// Per-layer component widths of the reference 24-layer encoder-decoder
  /// (speech encoder 24,576 / text encoder 15,360 / text decoder 20,480 per
  /// layer). Attention distance embeddings are not part of the table.
  static ModuleSpec reference_module(ModuleName module);
  static ComponentSchema reference();

 private:
  std::vector<ModuleSpec> modules_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// Family for a submodule name when a schema file does not state it.
SubmoduleGroup infer_group(std::string_view submodule_name);

}  // namespace neuronscope
