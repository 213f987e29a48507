// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "neuronscope/dump_format.hpp"
#include "neuronscope/error.hpp"
#include "neuronscope/intervention.hpp"
#include "neuronscope/io.hpp"
#include "neuronscope/magnitude.hpp"
#include "neuronscope/metrics.hpp"
#include "neuronscope/structure.hpp"
#include "neuronscope/svg.hpp"
#include "neuronscope/synthetic.hpp"

namespace neuronscope::cli {
namespace fs = std::filesystem;

const std::string& single_input(const RunConfig& config) {
  if (config.inputs.size() != 1) throw_usage_error("expected exactly one --input");
  return config.inputs.front();
}

ModuleName resolve_module(const RunConfig& config, const ComponentSchema& schema) {
  if (config.module) {
    const auto module = parse_module(*config.module);
    if (!schema.has_module(module)) {
      throw_usage_error("module '" + *config.module + "' is not in the input schema");
    }
    return module;
  }
  if (schema.modules().size() != 1) {
    throw_usage_error("input holds several modules; pass --module");
  }
  return schema.modules().front().module;
}

TargetSpec resolve_target(const RunConfig& config) {
  if (!config.setting) throw_usage_error("--setting is required");
  TargetSpec t;
  t.setting = parse_setting(*config.setting);
  t.language = config.language;
  const auto modality =
      config.modality ? std::optional<Modality>(parse_modality(*config.modality)) : std::nullopt;
  // In the unimodal setting --modality names the modality the examples are
  // restricted to.
  if (t.setting == Setting::unimodal_language) {
    t.restricted_modality = modality;
  } else {
    t.modality = modality;
  }
  t.validate();
  return t;
}

std::vector<Polarity> resolve_polarities(const RunConfig& config) {
  const std::string p = config.polarity.value_or("both");
  if (p == "both") return {Polarity::top, Polarity::bottom};
  return {parse_polarity(p)};
}

std::vector<std::size_t> resolve_budgets(const RunConfig& config, std::size_t module_total) {
  if (!config.k.empty()) {
    for (auto k : config.k) {
      if (k == 0 || k > module_total) {
        throw_usage_error("--k " + std::to_string(k) + " is outside 1.." +
                          std::to_string(module_total));
      }
    }
    return config.k;
  }
  std::vector<std::size_t> out;
  for (auto k : kReferenceBudgets) {
    if (k <= module_total) out.push_back(k);
  }
  if (out.empty()) out.push_back(module_total);
  return out;
}

namespace {

bool has_extension(const std::string& path, std::string_view ext) {
  return fs::path(path).extension() == ext;
}

fs::path with_suffix(const fs::path& base, const std::string& suffix) {
  fs::path p = base;
  p.replace_extension();
  return p.string() + suffix;
}

const std::string& required_out(const RunConfig& config, std::string_view what) {
  if (!config.out) throw_usage_error(std::string(what) + " needs --out");
  return *config.out;
}

std::vector<SelectionSet> filtered_selections(const RunConfig& config) {
  auto all = load_selections(single_input(config));
  const auto polarities = resolve_polarities(config);
  std::vector<SelectionSet> out;
  for (auto& s : all) {
    const bool k_ok = config.k.empty() ||
                      std::find(config.k.begin(), config.k.end(), s.k) != config.k.end();
    const bool p_ok =
        std::find(polarities.begin(), polarities.end(), s.polarity) != polarities.end();
    if (k_ok && p_ok) out.push_back(std::move(s));
  }
  if (out.empty()) throw_usage_error("no selection matches --k/--polarity");
  return out;
}

std::vector<std::string> read_segments(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

Json summary_of(const DumpHeader& header) {
  std::map<std::string, std::size_t> languages;
  std::map<std::string, std::size_t> modalities;
  std::map<std::string, std::size_t> tasks;
  for (const auto& ex : header.examples) {
    ++languages[ex.language];
    ++modalities[std::string(to_string(ex.modality))];
    ++tasks[ex.task ? std::string(to_string(*ex.task)) : "none"];
  }
  Json modules = Json::array();
  for (const auto& m : header.schema.modules()) {
    modules.push_back({{"module", to_string(m.module)},
                       {"layers", m.layers},
                       {"per_layer", m.per_layer()},
                       {"neurons", m.total()}});
  }
  return {{"rows", header.examples.size()},
          {"columns", header.schema.total()},
          {"modules", modules},
          {"languages", languages},
          {"modalities", modalities},
          {"tasks", tasks}};
}

}  // namespace

std::vector<SelectionSet> load_selections(const fs::path& path) {
  const Json j = load_json(path);
  if (j.is_object() && j.value("format", "") == "neuronscope.ap_table") {
    throw_usage_error(path.string() + " is an AP table; run 'select' first");
  }
  if (j.is_object() && j.contains("selections")) return selections_from_json(j);
  return {selection_from_json(j)};
}

APTable load_ap_table(const fs::path& path) {
  if (path.extension() == ".napt") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io_error("cannot open " + path.string());
    return read_ap_table_binary(in);
  }
  return ap_table_from_json(load_json(path));
}

void save_ap_table(const fs::path& path, const APTable& table) {
  if (path.extension() == ".napt") {
    write_file_atomic(path, [&](std::ostream& o) { write_ap_table_binary(table, o); });
  } else {
    save_json(path, to_json(table));
  }
}

std::string slug(std::string_view label) {
  std::string out(label);
  for (auto& ch : out) {
    if (ch == ':' || ch == '/' || ch == '@' || ch == '+' || ch == ' ') ch = '_';
  }
  return out;
}

void emit(const Context& ctx, const std::string& text) {
  if (ctx.config.out) {
    write_text_atomic(*ctx.config.out, text);
  } else {
    ctx.out << text;
  }
}

void emit(const Context& ctx, const Json& j) { emit(ctx, dump_json(j)); }

void cmd_validate(const Context& ctx) {
  const auto& path = single_input(ctx.config);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("cannot open " + path);
  DumpReader reader(in);
  std::vector<float> row(reader.columns());
  while (reader.next_row(row)) require_finite(row);
  reader.finish();
  Json j = summary_of(reader.header());
  j["format"] = "neuronscope.validation";
  j["status"] = "ok";
  emit(ctx, j);
}

void cmd_rank(const Context& ctx) {
  const auto target = resolve_target(ctx.config);
  const auto dataset = load_dataset(single_input(ctx.config));
  const auto module = resolve_module(ctx.config, dataset.schema());
  const auto table = rank_neurons(dataset, target, module, {ctx.config.threads, 64});
  if (ctx.config.out && has_extension(*ctx.config.out, ".napt")) {
    save_ap_table(*ctx.config.out, table);
  } else {
    emit(ctx, to_json(table));
  }
}

void cmd_select(const Context& ctx) {
  const auto table = load_ap_table(single_input(ctx.config));
  std::vector<SelectionSet> out;
  for (auto k : resolve_budgets(ctx.config, table.scores.size())) {
    for (auto p : resolve_polarities(ctx.config)) out.push_back(select(table, p, k));
  }
  emit(ctx, selections_to_json(out));
}

void cmd_histogram(const Context& ctx) {
  const auto selections = filtered_selections(ctx.config);
  if (ctx.config.out && has_extension(*ctx.config.out, ".csv")) {
    if (selections.size() != 1) {
      throw_usage_error("CSV output holds one selection; narrow it with --k and --polarity");
    }
    emit(ctx, histogram_csv(histogram(selections.front())));
  } else {
    Json list = Json::array();
    for (const auto& s : selections) {
      Json h = to_json(histogram(s));
      h["selection"] = s.label();
      list.push_back(std::move(h));
    }
    emit(ctx, Json{{"format", "neuronscope.histograms"}, {"histograms", list}});
  }
  if (ctx.config.svg) {
    const fs::path base = required_out(ctx.config, "--svg");
    for (const auto& s : selections) {
      const auto hist = histogram(s);
      std::set<SubmoduleGroup> groups;
      for (const auto& sub : s.scope.submodules) groups.insert(sub.group);
      for (auto g : groups) {
        write_text_atomic(
            with_suffix(base, "." + slug(s.label()) + "." + std::string(to_string(g)) + ".svg"),
            svg::layer_histogram_chart(hist, g, s.label() + " (" + std::string(to_string(g)) + ")"));
      }
    }
  }
}

void cmd_overlap(const Context& ctx) {
  if (ctx.config.inputs.empty() || ctx.config.inputs.size() > 2) {
    throw_usage_error("overlap takes one or two --input selection files");
  }
  auto rows_cfg = ctx.config;
  rows_cfg.inputs = {ctx.config.inputs.front()};
  auto cols_cfg = ctx.config;
  cols_cfg.inputs = {ctx.config.inputs.back()};
  const auto rows = filtered_selections(rows_cfg);
  const auto cols = filtered_selections(cols_cfg);
  const auto matrix = overlap_matrix(rows, cols);
  emit(ctx, to_json(matrix));
  if (ctx.config.svg) {
    write_text_atomic(with_suffix(required_out(ctx.config, "--svg"), ".svg"),
                      svg::overlap_chart(matrix, "Selection overlap"));
  }
}

void cmd_gini(const Context& ctx) {
  Json list = Json::array();
  for (const auto& s : filtered_selections(ctx.config)) {
    Json g = to_json(gini_report(histogram(s)));
    g["selection"] = s.label();
    list.push_back(std::move(g));
  }
  emit(ctx, Json{{"format", "neuronscope.gini"}, {"reports", list}});
}

void cmd_medians(const Context& ctx) {
  const auto dataset = load_dataset(single_input(ctx.config));
  const auto module = resolve_module(ctx.config, dataset.schema());
  if (ctx.config.selections) {
    std::set<NeuronId> ids;
    for (const auto& s : load_selections(*ctx.config.selections)) {
      if (s.scope.module != module) throw_usage_error("selection scope differs from --module");
      ids.insert(s.neurons.begin(), s.neurons.end());
    }
    const std::vector<NeuronId> list(ids.begin(), ids.end());
    emit(ctx, to_json(compute_medians(dataset, list, ctx.config.threads)));
  } else {
    emit(ctx, to_json(compute_module_medians(dataset, module, ctx.config.threads)));
  }
}

void cmd_plan(const Context& ctx) {
  const auto& input = single_input(ctx.config);
  const auto polarities = resolve_polarities(ctx.config);

  // Medians come from --stats when given, from the dump otherwise. The dump
  // header always supplies the schema.
  std::optional<ActivationDataset> dataset;
  ComponentSchema schema;
  if (ctx.config.stats) {
    schema = load_dump_header(input).schema;
  } else {
    dataset = load_dataset(input);
    schema = dataset->schema();
  }
  const auto module = resolve_module(ctx.config, schema);
  auto stats_for = [&](const std::vector<NeuronId>& ids) {
    if (ctx.config.stats) return stats_from_json(load_json(*ctx.config.stats));
    return compute_medians(*dataset, ids, ctx.config.threads);
  };

  InterventionPlan plan;
  if (ctx.config.baseline) {
    if (ctx.config.selections) throw_usage_error("--baseline does not take --selections");
    if (ctx.config.k.size() != 1) throw_usage_error("--baseline needs a single --k");
    const std::size_t count = ctx.config.k.front() * polarities.size();
    const std::uint64_t seed = ctx.config.seed.value_or(kDefaultSeed);
    const auto& scope = schema.module(module);
    if (count > scope.total()) throw_usage_error("baseline size exceeds the module");
    const auto ids = sample_neurons(schema, module, count, seed);
    plan = make_random_baseline(schema, module, count, seed, stats_for(ids));
  } else {
    if (!ctx.config.selections) throw_usage_error("plan needs --selections or --baseline");
    const Json j = load_json(*ctx.config.selections);
    std::vector<SelectionSet> chosen;
    if (j.is_object() && j.value("format", "") == "neuronscope.ap_table") {
      if (ctx.config.k.size() != 1) throw_usage_error("planning from an AP table needs one --k");
      const auto table = ap_table_from_json(j);
      for (auto p : polarities) chosen.push_back(select(table, p, ctx.config.k.front()));
    } else {
      std::set<std::size_t> budgets;
      for (auto& s : load_selections(*ctx.config.selections)) {
        const bool k_ok = ctx.config.k.empty() || s.k == ctx.config.k.front();
        if (k_ok && std::find(polarities.begin(), polarities.end(), s.polarity) != polarities.end()) {
          budgets.insert(s.k);
          chosen.push_back(std::move(s));
        }
      }
      if (chosen.empty()) throw_usage_error("no selection matches --k/--polarity");
      if (budgets.size() > 1) throw_usage_error("selections hold several budgets; pass --k");
    }
    for (const auto& s : chosen) {
      if (s.scope.module != module) throw_usage_error("selection scope differs from --module");
    }
    std::set<NeuronId> unique;
    for (const auto& s : chosen) unique.insert(s.neurons.begin(), s.neurons.end());
    plan = make_plan(chosen, stats_for({unique.begin(), unique.end()}));
  }

  if (ctx.config.out) {
    save_json(*ctx.config.out, to_json(plan));
    const auto& scope = schema.module(module);
    ctx.out << dump_json({{"plan", *ctx.config.out},
                          {"kind", to_string(plan.kind)},
                          {"neurons", plan.entries.size()},
                          {"module", to_string(module)},
                          {"module_neurons", scope.total()},
                          {"targeted_fraction", targeted_fraction(plan, schema, module)}});
  } else {
    emit(ctx, to_json(plan));
  }
}

void cmd_apply(const Context& ctx) {
  if (!ctx.config.plan) throw_usage_error("apply needs --plan");
  const auto& out = required_out(ctx.config, "apply");
  const auto dataset = load_dataset(single_input(ctx.config));
  const auto plan = plan_from_json(load_json(*ctx.config.plan));
  save_dataset(apply_plan(dataset, plan), out);
  ctx.out << dump_json({{"output", out}, {"rows", dataset.rows()}, {"targeted", plan.entries.size()}});
}

void cmd_score(const Context& ctx) {
  if (!ctx.config.reference || !ctx.config.hypothesis) {
    throw_usage_error("score needs --reference and --hypothesis");
  }
  if (!ctx.config.language) throw_usage_error("score needs --language");
  const auto refs = read_segments(*ctx.config.reference);
  const auto hyps = read_segments(*ctx.config.hypothesis);
  if (refs.size() != hyps.size()) {
    throw_data_error("reference has " + std::to_string(refs.size()) + " segments, hypothesis " +
                     std::to_string(hyps.size()));
  }
  Json metrics = Json::array();
  for (const auto& m : score_corpus(refs, hyps, *ctx.config.language)) {
    metrics.push_back(to_json(m));
  }
  emit(ctx, Json{{"format", "neuronscope.scores"},
                 {"language", *ctx.config.language},
                 {"segments", refs.size()},
                 {"metrics", metrics}});
}

void cmd_magnitude(const Context& ctx) {
  const auto dataset = load_dataset(single_input(ctx.config));
  const auto module = resolve_module(ctx.config, dataset.schema());
  const auto curves =
      deviation_curves(condition_curves(dataset, module, {ctx.config.absolute}));
  if (ctx.config.out && has_extension(*ctx.config.out, ".csv")) {
    emit(ctx, magnitude_csv(curves));
  } else {
    Json list = Json::array();
    for (const auto& c : curves) list.push_back(to_json(c));
    emit(ctx, Json{{"format", "neuronscope.magnitude"},
                   {"module", to_string(module)},
                   {"absolute", ctx.config.absolute},
                   {"trend", mean_trend(curves)},
                   {"curves", list}});
  }
  if (ctx.config.svg) {
    write_text_atomic(with_suffix(required_out(ctx.config, "--svg"), ".svg"),
                      svg::magnitude_chart(curves, true, std::string(to_string(module))));
  }
}

void cmd_synth(const Context& ctx) {
  const auto& out = required_out(ctx.config, "synth");
  auto spec = plant_spec_from_json(load_json(single_input(ctx.config)));
  if (ctx.config.seed) spec.seed = *ctx.config.seed;
  const auto dataset = generate(spec, ctx.config.threads);
  save_dataset(dataset, out);
  Json j = summary_of(DumpHeader{dataset.schema(), dataset.examples()});
  j["output"] = out;
  j["planted"] = spec.planted.size();
  j["seed"] = spec.seed;
  ctx.out << dump_json(j);
}

}  // namespace neuronscope::cli
