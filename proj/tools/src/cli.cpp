// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "neuronscope/error.hpp"

namespace neuronscope::cli {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 1;

const std::vector<std::string> kModules = {"speech_encoder", "text_encoder", "text_decoder"};

// Every flag name any subcommand understands; config keys outside this set
// are rejected, keys for flags another subcommand owns are ignored.
const std::vector<std::string> kKnownKeys = {
    "input",      "module", "setting",  "language", "modality", "k",         "polarity",
    "seed",       "out",    "svg",      "selections", "stats",  "plan",      "reference",
    "hypothesis", "baseline", "abs",    "threads"};

CLI::Option* add(CLI::App* sub, RunConfig& c, const std::string& name) {
  if (name == "input") return sub->add_option("--input,-i", c.inputs, "Input file (repeatable)");
  if (name == "module") {
    return sub->add_option("--module,-m", c.module, "Module scope")
        ->check(CLI::IsMember(kModules));
  }
  if (name == "setting") {
    return sub->add_option("--setting", c.setting,
                           "unimodal_language | multimodal_language | modality | "
                           "language_modality");
  }
  if (name == "language") return sub->add_option("--language,-l", c.language, "Language code");
  if (name == "modality") {
    return sub->add_option("--modality", c.modality, "speech | text")
        ->check(CLI::IsMember({"speech", "text"}));
  }
  if (name == "k") {
    return sub->add_option("--k,-k", c.k, "Neuron budget(s), comma separated")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
  }
  if (name == "polarity") {
    return sub->add_option("--polarity", c.polarity, "top | bottom | both")
        ->check(CLI::IsMember({"top", "bottom", "both"}));
  }
  if (name == "seed") return sub->add_option("--seed", c.seed, "Random seed");
  if (name == "out") return sub->add_option("--out,-o", c.out, "Output path");
  if (name == "svg") return sub->add_flag("--svg", c.svg, "Also write SVG charts");
  if (name == "selections") {
    return sub->add_option("--selections", c.selections, "Selections or AP table file");
  }
  if (name == "stats") return sub->add_option("--stats", c.stats, "Precomputed medians file");
  if (name == "plan") return sub->add_option("--plan", c.plan, "Intervention plan file");
  if (name == "reference") {
    return sub->add_option("--reference", c.reference, "Reference text, one segment per line");
  }
  if (name == "hypothesis") {
    return sub->add_option("--hypothesis", c.hypothesis, "Hypothesis text, one segment per line");
  }
  if (name == "baseline") {
    return sub->add_flag("--baseline", c.baseline, "Uniform random neurons instead of a selection");
  }
  if (name == "abs") return sub->add_flag("--abs", c.absolute, "Average absolute activations");
  if (name == "threads") {
    return sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  }
  throw std::logic_error("unknown flag " + name);
}

template <class T>
T config_value(const Json& v, const std::string& key) {
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) throw_usage_error("config key '" + key + "' has the wrong type");
    }
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw_usage_error("config key '" + key + "' has the wrong type");
  }
}

void assign(RunConfig& c, const std::string& key, const Json& v) {
  auto text = [&] { return config_value<std::string>(v, key); };
  if (key == "input") {
    c.inputs = v.is_array() ? config_value<std::vector<std::string>>(v, key)
                            : std::vector<std::string>{text()};
  } else if (key == "module") {
    c.module = text();
    if (std::find(kModules.begin(), kModules.end(), *c.module) == kModules.end()) {
      throw_usage_error("config key 'module' has an unknown value");
    }
  } else if (key == "setting") {
    c.setting = text();
  } else if (key == "language") {
    c.language = text();
  } else if (key == "modality") {
    c.modality = text();
  } else if (key == "k") {
    if (v.is_array()) {
      c.k.clear();
      for (const auto& e : v) c.k.push_back(config_value<std::size_t>(e, key));
    } else {
      c.k = {config_value<std::size_t>(v, key)};
    }
  } else if (key == "polarity") {
    c.polarity = text();
  } else if (key == "seed") {
    c.seed = config_value<std::uint64_t>(v, key);
  } else if (key == "out") {
    c.out = text();
  } else if (key == "svg") {
    c.svg = config_value<bool>(v, key);
  } else if (key == "selections") {
    c.selections = text();
  } else if (key == "stats") {
    c.stats = text();
  } else if (key == "plan") {
    c.plan = text();
  } else if (key == "reference") {
    c.reference = text();
  } else if (key == "hypothesis") {
    c.hypothesis = text();
  } else if (key == "baseline") {
    c.baseline = config_value<bool>(v, key);
  } else if (key == "abs") {
    c.absolute = config_value<bool>(v, key);
  } else if (key == "threads") {
    c.threads = config_value<std::size_t>(v, key);
  }
}

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> flags;
  void (*run)(const Context&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"validate", "Check a dump file and summarize its contents", {"input", "out"}, cmd_validate},
      {"rank", "Average precision of every neuron of one module for one target",
       {"input", "module", "setting", "language", "modality", "out", "threads"}, cmd_rank},
      {"select", "Top and bottom k neurons from an AP table",
       {"input", "k", "polarity", "out"}, cmd_select},
      {"histogram", "Selected-neuron counts per layer and submodule",
       {"input", "k", "polarity", "out", "svg"}, cmd_histogram},
      {"overlap", "Pairwise overlap between selections",
       {"input", "k", "polarity", "out", "svg"}, cmd_overlap},
      {"gini", "Concentration of selections over layer and submodule cells",
       {"input", "k", "polarity", "out"}, cmd_gini},
      {"medians", "Per-neuron medians over pooled activations",
       {"input", "module", "selections", "out", "threads"}, cmd_medians},
      {"plan", "Median-replacement or random-baseline intervention plan",
       {"input", "module", "selections", "stats", "k", "polarity", "seed", "baseline", "out",
        "threads"},
       cmd_plan},
      {"apply", "Apply an intervention plan to a dump", {"input", "plan", "out"}, cmd_apply},
      {"score", "WER or CER, BLEU, chrF and combined score for a corpus",
       {"reference", "hypothesis", "language", "out"}, cmd_score},
      {"magnitude", "Layer-wise activation magnitudes and deviation curves",
       {"input", "module", "abs", "out", "svg"}, cmd_magnitude},
      {"synth", "Generate a synthetic dump with planted selective neurons",
       {"input", "seed", "out", "threads"}, cmd_synth},
      {"report", "Run every analysis for one study into a directory",
       {"input", "module", "k", "seed", "out", "svg", "threads"}, cmd_report},
  };
  return table;
}

void write_error(std::ostream& err, std::string_view kind, std::string_view message) {
  Json j = {{"error", {{"kind", kind}, {"message", message}}}};
  err << j.dump() << '\n';
}

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
      return "usage";
    case ErrorKind::data:
      return "data";
    case ErrorKind::io:
      return "io";
  }
  return "data";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"neuronscope: find and analyse language- and modality-selective neurons"};
  app.name("neuronscope");
  app.require_subcommand(1);
  app.set_version_flag("--version", "neuronscope 0.1.0");

  RunConfig config;
  std::optional<std::string> config_path;
  struct Bound {
    const Command* command;
    CLI::App* app;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Bound> bound;
  for (const auto& command : commands()) {
    Bound b{&command, app.add_subcommand(command.name, command.help), {}};
    for (const auto& flag : command.flags) b.options[flag] = add(b.app, config, flag);
    b.app->add_option("--config", config_path, "JSON file with default flag values");
    bound.push_back(std::move(b));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return kExitUsage;
  }

  const auto selected = std::find_if(bound.begin(), bound.end(),
                                     [](const Bound& b) { return b.app->parsed(); });
  try {
    if (config_path) {
      const Json file = load_json(*config_path);
      if (!file.is_object()) throw_usage_error("config file must hold a JSON object");
      for (const auto& [key, value] : file.items()) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
          throw_usage_error("unknown config key '" + key + "'");
        }
        auto it = selected->options.find(key);
        if (it == selected->options.end() || it->second->count() > 0) continue;
        assign(config, key, value);
      }
    }
    selected->command->run(Context{config, out});
    out.flush();
  } catch (const Error& e) {
    write_error(err, kind_name(e.kind()), e.what());
    return e.kind() == ErrorKind::usage ? kExitUsage : kExitData;
  } catch (const std::bad_alloc&) {
    write_error(err, "io", "out of memory");
    return kExitData;
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
    return kExitInternal;
  }
  return 0;
}

}  // namespace neuronscope::cli
