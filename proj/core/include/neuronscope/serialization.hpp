// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON / CSV / binary encodings of the analysis artifacts. JSON output is
// deterministic: object keys are sorted and doubles are printed with
// round-trip precision.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neuronscope/ap_ranking.hpp"
#include "neuronscope/dump_format.hpp"
#include "neuronscope/intervention.hpp"
#include "neuronscope/magnitude.hpp"
#include "neuronscope/metrics.hpp"
#include "neuronscope/structure.hpp"
#include "neuronscope/synthetic.hpp"

namespace neuronscope {

using Json = nlohmann::json;

// Parse failures throw Error(data) with the offending field in the message.

Json to_json(const ModuleSpec& spec);
ModuleSpec module_spec_from_json(const Json& j);

Json to_json(const ComponentSchema& schema);
ComponentSchema schema_from_json(const Json& j);

Json to_json(const ExampleMeta& example);
ExampleMeta example_from_json(const Json& j);

Json to_json(const DumpHeader& header);
DumpHeader dump_header_from_json(const Json& j);

Json to_json(const TargetSpec& spec);
TargetSpec target_from_json(const Json& j);

// {"format":"neuronscope.ap_table","target":...,"scope":...,"scores":[...]}
Json to_json(const APTable& table);
APTable ap_table_from_json(const Json& j);

Json to_json(const SelectionSet& selection);
SelectionSet selection_from_json(const Json& j);

// {"format":"neuronscope.selections","selections":[...]}
Json selections_to_json(std::span<const SelectionSet> selections);
std::vector<SelectionSet> selections_from_json(const Json& j);

Json to_json(const NeuronStats& stats);
NeuronStats stats_from_json(const Json& j);

// {kind, seed, provenance, neurons:[{module,layer,submodule,index,replacement}]}
Json to_json(const InterventionPlan& plan);
InterventionPlan plan_from_json(const Json& j);

Json to_json(const PlantSpec& spec);
PlantSpec plant_spec_from_json(const Json& j);

Json to_json(const MetricResult& result);
Json to_json(const LayerHistogram& histogram);
Json to_json(const OverlapMatrix& matrix);
Json to_json(const GiniReport& report);
Json to_json(const MagnitudeCurve& curve);

// layer,submodule,group,count
std::string histogram_csv(const LayerHistogram& histogram);
// condition,layer,value,deviation
std::string magnitude_csv(std::span<const MagnitudeCurve> curves);

std::string dump_json(const Json& j);  // two-space indent, trailing newline
Json parse_json(std::string_view text);
Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& j);

// Binary AP sidecar: "NAPT", u32 version 1, u64 metadata length, metadata
// JSON (the AP table without scores), float64 LE scores, u32 CRC-32 of the
// score bytes.
void write_ap_table_binary(const APTable& table, std::ostream& out);
APTable read_ap_table_binary(std::istream& in);

}  // namespace neuronscope
