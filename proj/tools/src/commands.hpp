// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neuronscope/ap_ranking.hpp"
#include "neuronscope/random.hpp"
#include "neuronscope/serialization.hpp"

namespace neuronscope::cli {

// Resolved options after flags, config file and defaults have been merged.
struct RunConfig {
  std::vector<std::string> inputs;
  std::optional<std::string> module;
  std::optional<std::string> setting;
  std::optional<std::string> language;
  std::optional<std::string> modality;
  std::vector<std::size_t> k;  // empty = reference budgets
  std::optional<std::string> polarity;
  std::optional<std::uint64_t> seed;  // kDefaultSeed when unset
  std::optional<std::string> out;
  bool svg = false;

  std::optional<std::string> selections;
  std::optional<std::string> stats;
  std::optional<std::string> plan;
  std::optional<std::string> reference;
  std::optional<std::string> hypothesis;
  bool baseline = false;
  bool absolute = false;
  std::size_t threads = 0;
};

struct Context {
  const RunConfig& config;
  std::ostream& out;
};

void cmd_validate(const Context& ctx);
void cmd_rank(const Context& ctx);
void cmd_select(const Context& ctx);
void cmd_histogram(const Context& ctx);
void cmd_overlap(const Context& ctx);
void cmd_gini(const Context& ctx);
void cmd_medians(const Context& ctx);
void cmd_plan(const Context& ctx);
void cmd_apply(const Context& ctx);
void cmd_score(const Context& ctx);
void cmd_magnitude(const Context& ctx);
void cmd_synth(const Context& ctx);
void cmd_report(const Context& ctx);

// Helpers shared between subcommands.
const std::string& single_input(const RunConfig& config);
ModuleName resolve_module(const RunConfig& config, const ComponentSchema& schema);
TargetSpec resolve_target(const RunConfig& config);
std::vector<Polarity> resolve_polarities(const RunConfig& config);
std::vector<std::size_t> resolve_budgets(const RunConfig& config, std::size_t module_total);
std::vector<SelectionSet> load_selections(const std::filesystem::path& path);
APTable load_ap_table(const std::filesystem::path& path);
void save_ap_table(const std::filesystem::path& path, const APTable& table);
std::string slug(std::string_view label);

// Writes `text` to --out atomically when set, to the output stream otherwise.
void emit(const Context& ctx, const std::string& text);
void emit(const Context& ctx, const Json& j);

}  // namespace neuronscope::cli
