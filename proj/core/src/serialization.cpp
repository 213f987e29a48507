// SPDX-License-Identifier: Apache-2.0
#include "neuronscope/serialization.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "neuronscope/error.hpp"
#include "neuronscope/io.hpp"

namespace neuronscope {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw_data_error(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw_data_error(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    const auto& value = field(j, key);
    if constexpr (std::is_unsigned_v<T>) {
      if (!value.is_number_unsigned()) {
        throw_data_error(std::string("field '") + key + "' must be a non-negative integer");
      }
    }
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw_data_error(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> get_optional(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw_data_error(std::string("field '") + key + "' has the wrong type");
  }
}

// Enum parsers raise usage errors; inside files a bad value is a data error.
template <class Fn>
auto parse_field(const Json& j, const char* key, Fn parse) {
  const auto text = get<std::string>(j, key);
  try {
    return parse(text);
  } catch (const Error& e) {
    throw_data_error(e.what());
  }
}

template <class T, class Fn>
Json optional_json(const std::optional<T>& value, Fn convert) {
  return value ? Json(convert(*value)) : Json(nullptr);
}

Json neuron_json(const NeuronId& id) {
  return Json{{"module", std::string(to_string(id.module))},
              {"layer", id.layer},
              {"submodule", id.submodule},
              {"index", id.index}};
}

NeuronId neuron_from_json(const Json& j) {
  if (j.is_string()) {
    try {
      return NeuronId::parse(j.get<std::string>());
    } catch (const Error& e) {
      throw_data_error(e.what());
    }
  }
  NeuronId id;
  id.module = parse_field(j, "module", parse_module);
  id.layer = get<std::size_t>(j, "layer");
  id.submodule = get<std::string>(j, "submodule");
  id.index = get<std::size_t>(j, "index");
  return id;
}

}  // namespace

Json to_json(const ModuleSpec& spec) {
  Json subs = Json::array();
  for (const auto& sub : spec.submodules) {
    subs.push_back(
        {{"name", sub.name}, {"width", sub.width}, {"group", std::string(to_string(sub.group))}});
  }
  return Json{{"module", std::string(to_string(spec.module))},
              {"layers", spec.layers},
              {"submodules", subs}};
}

ModuleSpec module_spec_from_json(const Json& j) {
  ModuleSpec spec;
  spec.module = parse_field(j, "module", parse_module);
  spec.layers = get<std::size_t>(j, "layers");
  const Json& subs = field(j, "submodules");
  if (!subs.is_array()) throw_data_error("'submodules' must be an array");
  for (const auto& s : subs) {
    SubmoduleSpec sub;
    sub.name = get<std::string>(s, "name");
    sub.width = get<std::size_t>(s, "width");
    if (auto group = get_optional<std::string>(s, "group")) {
      try {
        sub.group = parse_group(*group);
      } catch (const Error& e) {
        throw_data_error(e.what());
      }
    } else {
      sub.group = infer_group(sub.name);
    }
    spec.submodules.push_back(std::move(sub));
  }
  return spec;
}

Json to_json(const ComponentSchema& schema) {
  Json modules = Json::array();
  for (const auto& m : schema.modules()) modules.push_back(to_json(m));
  return Json{{"modules", modules}};
}

ComponentSchema schema_from_json(const Json& j) {
  if (j.is_string()) {
    // Shorthand for the reference layout, optionally restricted to a module.
    const auto name = j.get<std::string>();
    if (name == "reference") return ComponentSchema::reference();
    try {
      return ComponentSchema({ComponentSchema::reference_module(parse_module(name))});
    } catch (const Error& e) {
      throw_data_error(e.what());
    }
  }
  const Json& modules = field(j, "modules");
  if (!modules.is_array()) throw_data_error("'modules' must be an array");
  std::vector<ModuleSpec> specs;
  for (const auto& m : modules) specs.push_back(module_spec_from_json(m));
  return ComponentSchema(std::move(specs));
}

Json to_json(const ExampleMeta& ex) {
  return Json{{"id", ex.example_id},
              {"language", ex.language},
              {"modality", std::string(to_string(ex.modality))},
              {"task", optional_json(ex.task, [](Task t) { return std::string(to_string(t)); })},
              {"sequence_length", ex.sequence_length}};
}

ExampleMeta example_from_json(const Json& j) {
  ExampleMeta ex;
  ex.example_id = get<std::string>(j, "id");
  ex.language = get<std::string>(j, "language");
  ex.modality = parse_field(j, "modality", parse_modality);
  if (auto task = get_optional<std::string>(j, "task")) {
    try {
      ex.task = parse_task(*task);
    } catch (const Error& e) {
      throw_data_error(e.what());
    }
  }
  ex.sequence_length = get<std::uint64_t>(j, "sequence_length");
  return ex;
}

Json to_json(const DumpHeader& header) {
  Json examples = Json::array();
  for (const auto& ex : header.examples) examples.push_back(to_json(ex));
  return Json{{"schema", to_json(header.schema)}, {"examples", examples}};
}

DumpHeader dump_header_from_json(const Json& j) {
  DumpHeader header;
  header.schema = schema_from_json(field(j, "schema"));
  const Json& examples = field(j, "examples");
  if (!examples.is_array()) throw_data_error("'examples' must be an array");
  for (const auto& ex : examples) header.examples.push_back(example_from_json(ex));
  return header;
}

Json to_json(const TargetSpec& spec) {
  auto modality_name = [](Modality m) { return std::string(to_string(m)); };
  return Json{{"setting", std::string(to_string(spec.setting))},
              {"language", optional_json(spec.language, [](const std::string& s) { return s; })},
              {"modality", optional_json(spec.modality, modality_name)},
              {"restricted_modality", optional_json(spec.restricted_modality, modality_name)}};
}

TargetSpec target_from_json(const Json& j) {
  TargetSpec spec;
  try {
    spec.setting = parse_setting(get<std::string>(j, "setting"));
    spec.language = get_optional<std::string>(j, "language");
    if (auto m = get_optional<std::string>(j, "modality")) spec.modality = parse_modality(*m);
    if (auto m = get_optional<std::string>(j, "restricted_modality")) {
      spec.restricted_modality = parse_modality(*m);
    }
    spec.validate();
  } catch (const Error& e) {
    throw_data_error(e.what());
  }
  return spec;
}

Json to_json(const APTable& table) {
  return Json{{"format", "neuronscope.ap_table"},
              {"target", to_json(table.target)},
              {"target_name", table.target.name()},
              {"scope", to_json(table.scope)},
              {"examples", table.examples},
              {"positives", table.positives},
              {"scores", table.scores}};
}

APTable ap_table_from_json(const Json& j) {
  APTable table;
  table.target = target_from_json(field(j, "target"));
  table.scope = module_spec_from_json(field(j, "scope"));
  table.examples = get<std::size_t>(j, "examples");
  table.positives = get<std::size_t>(j, "positives");
  table.scores = get<std::vector<double>>(j, "scores");
  if (table.scores.size() != table.scope.total()) {
    throw_data_error("AP table has " + std::to_string(table.scores.size()) +
                     " scores for a scope of " + std::to_string(table.scope.total()));
  }
  return table;
}

Json to_json(const SelectionSet& selection) {
  Json neurons = Json::array();
  for (std::size_t i = 0; i < selection.neurons.size(); ++i) {
    neurons.push_back({{"id", selection.neurons[i].to_string()}, {"ap", selection.scores[i]}});
  }
  return Json{{"target", to_json(selection.target)},
              {"label", selection.label()},
              {"scope", to_json(selection.scope)},
              {"polarity", std::string(to_string(selection.polarity))},
              {"k", selection.k},
              {"neurons", neurons}};
}

SelectionSet selection_from_json(const Json& j) {
  SelectionSet s;
  s.target = target_from_json(field(j, "target"));
  s.scope = module_spec_from_json(field(j, "scope"));
  s.polarity = parse_field(j, "polarity", parse_polarity);
  s.k = get<std::size_t>(j, "k");
  const Json& neurons = field(j, "neurons");
  if (!neurons.is_array()) throw_data_error("'neurons' must be an array");
  for (const auto& n : neurons) {
    s.neurons.push_back(neuron_from_json(field(n, "id")));
    s.scores.push_back(get<double>(n, "ap"));
  }
  if (s.neurons.size() != s.k) throw_data_error("selection size differs from k");
  return s;
}

Json selections_to_json(std::span<const SelectionSet> selections) {
  Json list = Json::array();
  for (const auto& s : selections) list.push_back(to_json(s));
  return Json{{"format", "neuronscope.selections"}, {"selections", list}};
}

std::vector<SelectionSet> selections_from_json(const Json& j) {
  std::vector<SelectionSet> out;
  if (j.contains("selections")) {
    for (const auto& s : field(j, "selections")) out.push_back(selection_from_json(s));
  } else {
    out.push_back(selection_from_json(j));
  }
  return out;
}

Json to_json(const NeuronStats& stats) {
  Json entries = Json::array();
  for (const auto& s : stats.entries()) {
    entries.push_back({{"id", s.neuron.to_string()}, {"median", s.median}, {"count", s.count}});
  }
  return Json{{"format", "neuronscope.neuron_stats"}, {"neurons", entries}};
}

NeuronStats stats_from_json(const Json& j) {
  std::vector<NeuronStat> stats;
  for (const auto& e : field(j, "neurons")) {
    NeuronStat s;
    s.neuron = neuron_from_json(field(e, "id"));
    s.median = get<double>(e, "median");
    s.count = get<std::size_t>(e, "count");
    if (s.count == 0) throw_data_error("statistic with zero examples");
    stats.push_back(std::move(s));
  }
  return NeuronStats(std::move(stats));
}

Json to_json(const InterventionPlan& plan) {
  Json neurons = Json::array();
  for (const auto& e : plan.entries) {
    Json n = neuron_json(e.neuron);
    n["replacement"] = e.replacement;
    neurons.push_back(std::move(n));
  }
  return Json{{"kind", std::string(to_string(plan.kind))},
              {"seed", plan.seed ? Json(*plan.seed) : Json(nullptr)},
              {"provenance", plan.provenance},
              {"neurons", neurons}};
}

InterventionPlan plan_from_json(const Json& j) {
  InterventionPlan plan;
  plan.kind = parse_field(j, "kind", parse_plan_kind);
  plan.seed = get_optional<std::uint64_t>(j, "seed");
  plan.provenance = get_optional<std::string>(j, "provenance").value_or("");
  std::set<NeuronId> seen;
  for (const auto& n : field(j, "neurons")) {
    PlanEntry entry{neuron_from_json(n), get<double>(n, "replacement")};
    if (!std::isfinite(entry.replacement)) throw_data_error("non-finite replacement");
    if (!seen.insert(entry.neuron).second) {
      throw_data_error("duplicate neuron " + entry.neuron.to_string() + " in plan");
    }
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

Json to_json(const PlantSpec& spec) {
  Json modalities = Json::array();
  for (auto m : spec.modalities) modalities.push_back(std::string(to_string(m)));
  Json planted = Json::array();
  for (const auto& p : spec.planted) {
    planted.push_back(
        {{"id", p.neuron.to_string()},
         {"language", optional_json(p.target.language, [](const std::string& s) { return s; })},
         {"modality", optional_json(p.target.modality,
                                    [](Modality m) { return std::string(to_string(m)); })},
         {"positive_mean", p.positive_mean},
         {"negative_mean", p.negative_mean},
         {"stddev", p.stddev}});
  }
  return Json{{"schema", to_json(spec.schema)},
              {"languages", spec.languages},
              {"modalities", modalities},
              {"examples_per_cell", spec.examples_per_cell},
              {"planted", planted},
              {"seed", spec.seed},
              {"background_mean", spec.background_mean},
              {"background_stddev", spec.background_stddev}};
}

PlantSpec plant_spec_from_json(const Json& j) {
  PlantSpec spec;
  spec.schema = schema_from_json(field(j, "schema"));
  spec.languages = get<std::vector<std::string>>(j, "languages");
  if (j.contains("modalities")) {
    spec.modalities.clear();
    for (const auto& m : get<std::vector<std::string>>(j, "modalities")) {
      try {
        spec.modalities.push_back(parse_modality(m));
      } catch (const Error& e) {
        throw_data_error(e.what());
      }
    }
  }
  spec.examples_per_cell = get<std::size_t>(j, "examples_per_cell");
  spec.seed = get_optional<std::uint64_t>(j, "seed").value_or(kDefaultSeed);
  spec.background_mean = get_optional<double>(j, "background_mean").value_or(0.0);
  spec.background_stddev = get_optional<double>(j, "background_stddev").value_or(1.0);
  if (j.contains("planted")) {
    for (const auto& p : field(j, "planted")) {
      PlantedNeuron planted;
      planted.neuron = neuron_from_json(field(p, "id"));
      planted.target.language = get_optional<std::string>(p, "language");
      if (auto m = get_optional<std::string>(p, "modality")) {
        try {
          planted.target.modality = parse_modality(*m);
        } catch (const Error& e) {
          throw_data_error(e.what());
        }
      }
      planted.positive_mean = get<double>(p, "positive_mean");
      planted.negative_mean = get<double>(p, "negative_mean");
      planted.stddev = get<double>(p, "stddev");
      spec.planted.push_back(std::move(planted));
    }
  }
  return spec;
}

Json to_json(const MetricResult& result) {
  Json j{{"name", std::string(to_string(result.name))}, {"value", result.value}};
  if (!result.per_example.empty()) {
    Json per = Json::array();
    for (const auto& v : result.per_example) per.push_back(v ? Json(*v) : Json(nullptr));
    j["per_example"] = per;
  }
  return j;
}

Json to_json(const LayerHistogram& histogram) {
  Json cells = Json::array();
  const auto& scope = histogram.scope;
  for (std::size_t l = 0; l < scope.layers; ++l) {
    for (std::size_t s = 0; s < scope.submodules.size(); ++s) {
      cells.push_back({{"layer", l},
                       {"submodule", scope.submodules[s].name},
                       {"group", std::string(to_string(scope.submodules[s].group))},
                       {"count", histogram.count(l, s)}});
    }
  }
  return Json{{"module", std::string(to_string(scope.module))},
              {"total", histogram.total()},
              {"cells", cells}};
}

Json to_json(const OverlapMatrix& matrix) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < matrix.row_labels.size(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < matrix.col_labels.size(); ++c) row.push_back(matrix.at(r, c));
    rows.push_back(row);
  }
  return Json{{"rows", matrix.row_labels}, {"cols", matrix.col_labels}, {"cells", rows}};
}

Json to_json(const GiniReport& report) {
  return Json{{"value", report.value}, {"unit", report.unit}, {"cells", report.cells}};
}

Json to_json(const MagnitudeCurve& curve) {
  return Json{{"condition", curve.condition.label()},
              {"values", curve.values},
              {"deviations", curve.deviations}};
}

namespace {

std::string format_double(double value) {
  // Shortest round-trip form via the JSON serializer.
  return Json(value).dump();
}

}  // namespace

std::string histogram_csv(const LayerHistogram& histogram) {
  std::ostringstream out;
  out << "layer,submodule,group,count\n";
  const auto& scope = histogram.scope;
  for (std::size_t l = 0; l < scope.layers; ++l) {
    for (std::size_t s = 0; s < scope.submodules.size(); ++s) {
      out << l << ',' << scope.submodules[s].name << ',' << to_string(scope.submodules[s].group)
          << ',' << histogram.count(l, s) << '\n';
    }
  }
  return out.str();
}

std::string magnitude_csv(std::span<const MagnitudeCurve> curves) {
  std::ostringstream out;
  out << "condition,layer,value,deviation\n";
  for (const auto& curve : curves) {
    for (std::size_t l = 0; l < curve.values.size(); ++l) {
      out << curve.condition.label() << ',' << l << ',' << format_double(curve.values[l]) << ','
          << (l < curve.deviations.size() ? format_double(curve.deviations[l]) : "") << '\n';
    }
  }
  return out.str();
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw_data_error(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json(const std::filesystem::path& path) { return parse_json(read_text_file(path)); }

void save_json(const std::filesystem::path& path, const Json& j) {
  write_text_atomic(path, dump_json(j));
}

namespace {

constexpr char kApMagic[4] = {'N', 'A', 'P', 'T'};
constexpr std::uint32_t kApVersion = 1;

}  // namespace

void write_ap_table_binary(const APTable& table, std::ostream& out) {
  Json meta = to_json(table);
  meta.erase("scores");
  meta["count"] = table.scores.size();
  const std::string text = meta.dump();

  unsigned char header[16];
  std::memcpy(header, kApMagic, 4);
  put_u32_le(header + 4, kApVersion);
  put_u64_le(header + 8, text.size());
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  std::vector<unsigned char> bytes(table.scores.size() * 8);
  for (std::size_t i = 0; i < table.scores.size(); ++i) {
    put_u64_le(bytes.data() + 8 * i, std::bit_cast<std::uint64_t>(table.scores[i]));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  unsigned char crc[4];
  put_u32_le(crc, crc32_update(crc32_init(), bytes));
  out.write(reinterpret_cast<const char*>(crc), 4);
  if (!out) throw_io_error("failed to write AP table");
}

APTable read_ap_table_binary(std::istream& in) {
  unsigned char header[16];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header) ||
      std::memcmp(header, kApMagic, 4) != 0) {
    throw_data_error("unrecognized format");
  }
  if (get_u32_le(header + 4) != kApVersion) throw_data_error("unsupported version");
  const std::uint64_t meta_len = get_u64_le(header + 8);
  if (meta_len > (std::uint64_t{1} << 32)) throw_data_error("malformed metadata");
  std::string text(meta_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(meta_len))) {
    throw_data_error("truncated payload");
  }
  Json meta;
  try {
    meta = Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw_data_error("malformed metadata");
  }
  const auto count = get<std::size_t>(meta, "count");
  meta["scores"] = Json::array();
  std::vector<unsigned char> bytes(count * 8);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    throw_data_error("truncated payload");
  }
  unsigned char crc[4];
  if (!in.read(reinterpret_cast<char*>(crc), 4)) throw_data_error("truncated payload");
  if (get_u32_le(crc) != crc32_update(crc32_init(), bytes)) throw_data_error("checksum mismatch");

  std::vector<double> scores(count);
  for (std::size_t i = 0; i < count; ++i) {
    scores[i] = std::bit_cast<double>(get_u64_le(bytes.data() + 8 * i));
  }
  meta["scores"] = scores;
  return ap_table_from_json(meta);
}

}  // namespace neuronscope
