// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "neuronscope/dump_format.hpp"
#include "neuronscope/error.hpp"
#include "neuronscope/intervention.hpp"
#include "neuronscope/io.hpp"
#include "neuronscope/magnitude.hpp"
#include "neuronscope/parallel.hpp"
#include "neuronscope/structure.hpp"
#include "neuronscope/svg.hpp"

namespace neuronscope::cli {
namespace fs = std::filesystem;

namespace {

class ReportWriter {
 public:
  explicit ReportWriter(fs::path root) : root_(std::move(root)) {}

  void text(const fs::path& rel, std::string_view content) {
    fs::create_directories((root_ / rel).parent_path());
    write_text_atomic(root_ / rel, content);
    artifacts_.insert(rel.generic_string());
  }
  void json(const fs::path& rel, const Json& j) { text(rel, dump_json(j)); }
  void ap_table(const fs::path& rel, const APTable& table) {
    fs::create_directories((root_ / rel).parent_path());
    save_ap_table(root_ / rel, table);
    artifacts_.insert(rel.generic_string());
  }
  void skip(std::string what, std::string reason) {
    skipped_.push_back({{"what", std::move(what)}, {"reason", std::move(reason)}});
  }

  const fs::path& root() const { return root_; }
  Json artifacts() const { return Json(std::vector<std::string>(artifacts_.begin(), artifacts_.end())); }
  const Json& skipped() const { return skipped_; }

 private:
  fs::path root_;
  std::set<std::string> artifacts_;
  Json skipped_ = Json::array();
};

struct TargetResult {
  TargetSpec target;
  std::vector<SelectionSet> selections;
};

std::vector<TargetSpec> targets_for(ModuleName module, const std::set<std::string>& languages,
                                    const std::set<Modality>& modalities) {
  std::vector<TargetSpec> out;
  for (auto m : modalities) {
    for (const auto& lang : languages) {
      TargetSpec t;
      t.setting = Setting::unimodal_language;
      t.language = lang;
      t.restricted_modality = m;
      out.push_back(t);
    }
  }
  if (module != ModuleName::text_decoder) return out;
  for (const auto& lang : languages) {
    TargetSpec t;
    t.setting = Setting::multimodal_language;
    t.language = lang;
    out.push_back(t);
  }
  for (auto m : modalities) {
    TargetSpec t;
    t.setting = Setting::modality;
    t.modality = m;
    out.push_back(t);
  }
  for (auto m : modalities) {
    for (const auto& lang : languages) {
      TargetSpec t;
      t.setting = Setting::language_modality;
      t.language = lang;
      t.modality = m;
      out.push_back(t);
    }
  }
  return out;
}

std::string k_name(std::size_t k) { return "k" + std::to_string(k); }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::vector<TargetResult> experiment1(ReportWriter& w, const ActivationDataset& dataset,
                                      ModuleName module, const std::vector<std::size_t>& budgets,
                                      const RunConfig& config) {
  std::set<std::string> languages;
  std::set<Modality> modalities;
  for (const auto& ex : dataset.examples()) {
    languages.insert(ex.language);
    modalities.insert(ex.modality);
  }
  const fs::path dir = fs::path("experiment1") / std::string(to_string(module));
  std::vector<TargetResult> results;
  Json summary = Json::array();
  for (const auto& target : targets_for(module, languages, modalities)) {
    APTable table;
    try {
      table = rank_neurons(dataset, target, module, {config.threads, 64});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::data) throw;
      w.skip(std::string(to_string(module)) + "/" + target.name(), e.what());
      continue;
    }
    const fs::path tdir = dir / slug(target.name());
    w.ap_table(tdir / "ap_table.napt", table);

    TargetResult result{target, {}};
    Json histograms = Json::array();
    Json ginis = Json::array();
    for (auto k : budgets) {
      for (auto p : {Polarity::top, Polarity::bottom}) {
        auto sel = select(table, p, k);
        const auto hist = histogram(sel);
        Json h = to_json(hist);
        h["selection"] = sel.label();
        histograms.push_back(std::move(h));
        Json g = to_json(gini_report(hist));
        g["selection"] = sel.label();
        ginis.push_back(std::move(g));
        if (config.svg && p == Polarity::top) {
          std::set<SubmoduleGroup> groups;
          for (const auto& sub : sel.scope.submodules) groups.insert(sub.group);
          for (auto g : groups) {
            const std::string group(to_string(g));
            w.text(tdir / (k_name(k) + "_" + group + ".svg"),
                   svg::layer_histogram_chart(hist, g, sel.label() + " (" + group + ")"));
          }
        }
        result.selections.push_back(std::move(sel));
      }
    }
    w.json(tdir / "selections.json", selections_to_json(result.selections));
    w.json(tdir / "histograms.json", {{"format", "neuronscope.histograms"}, {"histograms", histograms}});
    w.json(tdir / "gini.json", {{"format", "neuronscope.gini"}, {"reports", ginis}});
    summary.push_back({{"target", target.name()},
                       {"examples", table.examples},
                       {"positives", table.positives},
                       {"gini", ginis}});
    results.push_back(std::move(result));
  }
  w.json(dir / "summary.json", {{"module", to_string(module)}, {"targets", summary}});

  // Speech-conditioned against text-conditioned selections of each language.
  if (module == ModuleName::text_decoder && modalities.size() == 2) {
    for (auto k : budgets) {
      std::vector<SelectionSet> rows;
      std::vector<SelectionSet> cols;
      for (const auto& lang : languages) {
        const SelectionSet* speech = nullptr;
        const SelectionSet* text = nullptr;
        for (const auto& r : results) {
          if (r.target.setting != Setting::language_modality || r.target.language != lang) continue;
          for (const auto& s : r.selections) {
            if (s.k != k || s.polarity != Polarity::top) continue;
            (r.target.modality == Modality::speech ? speech : text) = &s;
          }
        }
        if (speech && text) {
          rows.push_back(*speech);
          cols.push_back(*text);
        }
      }
      if (rows.empty()) {
        w.skip("overlap/" + k_name(k), "no language has both speech and text selections");
        continue;
      }
      const auto matrix = overlap_matrix(rows, cols);
      w.json(fs::path("experiment1") / ("overlap_top_" + k_name(k) + ".json"), to_json(matrix));
      if (config.svg) {
        w.text(fs::path("experiment1") / ("overlap_top_" + k_name(k) + ".svg"),
               svg::overlap_chart(matrix, "Speech vs text top-" + std::to_string(k)));
      }
    }
  }
  return results;
}

void experiment2(ReportWriter& w, const ActivationDataset& dataset, ModuleName module,
                 const std::vector<std::size_t>& budgets, const std::vector<TargetResult>& targets,
                 const RunConfig& config) {
  const fs::path dir = fs::path("experiment2") / std::string(to_string(module));
  const auto stats = compute_module_medians(dataset, module, config.threads);
  const auto& schema = dataset.schema();
  const std::uint64_t seed = config.seed.value_or(kDefaultSeed);
  Json summary = Json::array();
  auto record = [&](const fs::path& rel, const InterventionPlan& plan) {
    w.json(rel, to_json(plan));
    summary.push_back({{"plan", rel.generic_string()},
                       {"kind", to_string(plan.kind)},
                       {"neurons", plan.entries.size()},
                       {"targeted_fraction", targeted_fraction(plan, schema, module)}});
  };
  for (const auto& t : targets) {
    for (auto k : budgets) {
      std::vector<SelectionSet> both;
      for (const auto& s : t.selections) {
        if (s.k == k) both.push_back(s);
      }
      record(dir / slug(t.target.name()) / ("plan_" + k_name(k) + ".json"), make_plan(both, stats));
    }
  }
  const std::size_t total = schema.module(module).total();
  for (auto k : budgets) {
    if (2 * k > total) {
      w.skip(std::string(to_string(module)) + "/baseline_" + k_name(k),
             "baseline of 2k neurons exceeds the module");
      continue;
    }
    record(dir / ("baseline_" + k_name(k) + ".json"),
           make_random_baseline(schema, module, 2 * k, seed, stats));
  }
  w.json(dir / "summary.json", {{"module", to_string(module)}, {"seed", seed}, {"plans", summary}});
}

void experiment3(ReportWriter& w, const ActivationDataset& dataset, ModuleName module,
                 const RunConfig& config) {
  const fs::path dir = fs::path("experiment3") / std::string(to_string(module));
  auto curves = condition_curves(dataset, module);
  if (curves.size() < 2) {
    w.skip(std::string(to_string(module)) + "/magnitude", "fewer than two conditions");
    return;
  }
  curves = deviation_curves(std::move(curves));
  Json list = Json::array();
  for (const auto& c : curves) list.push_back(to_json(c));
  w.json(dir / "magnitude.json", {{"format", "neuronscope.magnitude"},
                                  {"module", to_string(module)},
                                  {"absolute", false},
                                  {"trend", mean_trend(curves)},
                                  {"curves", list}});
  w.text(dir / "magnitude.csv", magnitude_csv(curves));
  if (config.svg) {
    w.text(dir / "deviation.svg",
           svg::magnitude_chart(curves, true, std::string(to_string(module)) + " deviation x1000"));
    w.text(dir / "magnitude.svg",
           svg::magnitude_chart(curves, false, std::string(to_string(module)) + " magnitude"));
  }
}

}  // namespace

void cmd_report(const Context& ctx) {
  const auto& config = ctx.config;
  if (!config.out) throw_usage_error("report needs --out DIR");
  const auto& input = single_input(config);
  const auto dataset = load_dataset(input);

  std::vector<ModuleName> modules;
  if (config.module) {
    modules.push_back(resolve_module(config, dataset.schema()));
  } else {
    for (const auto& m : dataset.schema().modules()) modules.push_back(m.module);
  }

  const fs::path root = *config.out;
  fs::create_directories(root);
  ReportWriter w(root);
  Json module_budgets = Json::object();
  for (auto module : modules) {
    const auto budgets = resolve_budgets(config, dataset.schema().module(module).total());
    module_budgets[std::string(to_string(module))] = budgets;
    const auto targets = experiment1(w, dataset, module, budgets, config);
    experiment2(w, dataset, module, budgets, targets, config);
    experiment3(w, dataset, module, config);
  }

  Json index = {{"format", "neuronscope.report"},
                {"input", input},
                {"seed", config.seed.value_or(kDefaultSeed)},
                {"svg", config.svg},
                {"budgets", module_budgets},
                {"artifacts", w.artifacts()},
                {"skipped", w.skipped()}};
  write_text_atomic(root / "report.json", dump_json(index));
  // Everything time- or machine-dependent lives here so the rest of the
  // directory is reproducible.
  write_text_atomic(root / "run_info.json",
                    dump_json({{"created", utc_timestamp()},
                               {"version", "0.1.0"},
                               {"workers", resolve_workers(config.threads)}}));
  ctx.out << dump_json({{"report", root.generic_string()},
                        {"artifacts", index["artifacts"].size()},
                        {"skipped", index["skipped"].size()}});
}

}  // namespace neuronscope::cli
