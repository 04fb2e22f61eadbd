#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "spie/agents/sarsa.hpp"
#include "spie/linfa/linear_q.hpp"

namespace spie::harness {

// Flat "key = value" text; '#' starts a comment, blank lines are skipped.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& origin() const { return origin_; }

  // Throws if any key was never read through a getter.
  void reject_unused() const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class ExperimentKind { kRun, kCoverage, kHardExp, kGoal, kNmrdp, kMountainCar };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kRun;
  // Grid name, "riverswim", "sixarms", an MDP table path, or empty for MountainCar.
  std::string env = "OF-small";
  long steps = 0;
  long episodes = 0;
  long max_episode_steps = 0;
  std::size_t seeds = 10;
  std::uint64_t base_seed = 0;
  int switch_period = 30;
  bool frozen_repr = false;
  bool optimistic = false;
};

struct ExperimentConfig {
  ExperimentSpec experiment;
  agents::AgentConfig agent;         // tabular experiments
  linfa::LinearAgentConfig linear;  // MountainCar
};

// Unknown keys are an error. Tabular keys: name intrinsic alpha eta eta_pr
// gamma gamma_repr gamma_pr beta epsilon q_init frozen strict_pseudocode
// optimistic. Linear keys: name intrinsic alpha eta_sf eta_pf gamma gamma_sf
// gamma_pf beta epsilon rff_dim rff_sigma rff_seed. Experiment keys:
// experiment env steps episodes max_episode_steps seeds base_seed
// switch_period frozen_repr.
ExperimentConfig parse_experiment_config(const KeyValueConfig& kv);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Preset file under data/presets, e.g. "riverswim_sarsa_srr".
std::filesystem::path preset_path(const std::string& name);
agents::AgentConfig load_agent_preset(const std::string& name);
linfa::LinearAgentConfig load_linear_preset(const std::string& name);

}  // namespace spie::harness
