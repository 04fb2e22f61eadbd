#include "spie/harness/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spie::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": empty key");
    if (cfg.values_.count(key)) {
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument(origin_ + ": missing key '" + key + "'");
  used_.insert(key);
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw std::invalid_argument(origin_ + ": key '" + key + "' is not a number: " + v);
  }
  return out;
}

long KeyValueConfig::get_long(const std::string& key) const {
  const std::string v = get_string(key);
  long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw std::invalid_argument(origin_ + ": key '" + key + "' is not an integer: " + v);
  }
  return out;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const std::string v = lower(get_string(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(origin_ + ": key '" + key + "' is not a boolean: " + v);
}

void KeyValueConfig::reject_unused() const {
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) throw std::invalid_argument(origin_ + ": unknown key '" + key + "'");
  }
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kRun: return "run";
    case ExperimentKind::kCoverage: return "coverage";
    case ExperimentKind::kHardExp: return "hardexp";
    case ExperimentKind::kGoal: return "goal";
    case ExperimentKind::kNmrdp: return "nmrdp";
    case ExperimentKind::kMountainCar: return "mountaincar";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  const std::string n = lower(name);
  for (auto k : {ExperimentKind::kRun, ExperimentKind::kCoverage, ExperimentKind::kHardExp,
                 ExperimentKind::kGoal, ExperimentKind::kNmrdp, ExperimentKind::kMountainCar}) {
    if (to_string(k) == n) return k;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

ExperimentConfig parse_experiment_config(const KeyValueConfig& kv) {
  ExperimentConfig out;
  auto& ex = out.experiment;
  if (kv.has("experiment")) ex.kind = parse_experiment_kind(kv.get_string("experiment"));
  if (kv.has("env")) ex.env = kv.get_string("env");
  if (kv.has("steps")) ex.steps = kv.get_long("steps");
  if (kv.has("episodes")) ex.episodes = kv.get_long("episodes");
  if (kv.has("max_episode_steps")) ex.max_episode_steps = kv.get_long("max_episode_steps");
  if (kv.has("seeds")) {
    const long n = kv.get_long("seeds");
    if (n <= 0) throw std::invalid_argument(kv.origin() + ": seeds must be positive");
    ex.seeds = static_cast<std::size_t>(n);
  }
  if (kv.has("base_seed")) ex.base_seed = static_cast<std::uint64_t>(kv.get_long("base_seed"));
  if (kv.has("switch_period")) ex.switch_period = static_cast<int>(kv.get_long("switch_period"));
  if (kv.has("frozen_repr")) ex.frozen_repr = kv.get_bool("frozen_repr");

  if (ex.kind == ExperimentKind::kMountainCar) {
    auto& c = out.linear;
    if (kv.has("name")) c.name = kv.get_string("name");
    if (kv.has("intrinsic")) c.kind = intrinsic::parse_intrinsic_kind(kv.get_string("intrinsic"));
    if (kv.has("alpha")) c.alpha = kv.get_double("alpha");
    if (kv.has("eta_sf")) c.eta_sf = kv.get_double("eta_sf");
    if (kv.has("eta_pf")) c.eta_pf = kv.get_double("eta_pf");
    if (kv.has("gamma")) c.gamma = kv.get_double("gamma");
    if (kv.has("gamma_sf")) c.gamma_sf = kv.get_double("gamma_sf");
    if (kv.has("gamma_pf")) c.gamma_pf = kv.get_double("gamma_pf");
    if (kv.has("beta")) c.beta = kv.get_double("beta");
    if (kv.has("epsilon")) c.epsilon = kv.get_double("epsilon");
    if (kv.has("rff_dim")) c.rff_dim = static_cast<std::size_t>(kv.get_long("rff_dim"));
    if (kv.has("rff_sigma")) c.rff_sigma = kv.get_double("rff_sigma");
    if (kv.has("rff_seed")) c.rff_seed = static_cast<std::uint64_t>(kv.get_long("rff_seed"));
    c.seed = ex.base_seed;
    kv.reject_unused();
    c.validate();
    return out;
  }

  auto& c = out.agent;
  if (kv.has("name")) c.name = kv.get_string("name");
  if (kv.has("intrinsic")) c.intrinsic.kind = intrinsic::parse_intrinsic_kind(kv.get_string("intrinsic"));
  if (kv.has("alpha")) c.alpha = kv.get_double("alpha");
  if (kv.has("eta")) c.eta = kv.get_double("eta");
  if (kv.has("eta_pr")) c.eta_pr = kv.get_double("eta_pr");
  if (kv.has("gamma")) c.gamma = kv.get_double("gamma");
  if (kv.has("gamma_repr")) c.gamma_repr = kv.get_double("gamma_repr");
  if (kv.has("gamma_pr")) c.gamma_pr = kv.get_double("gamma_pr");
  if (kv.has("beta")) c.intrinsic.beta = kv.get_double("beta");
  if (kv.has("epsilon")) c.epsilon = kv.get_double("epsilon");
  if (kv.has("q_init")) c.q_init = kv.get_double("q_init");
  if (kv.has("frozen")) c.intrinsic.frozen = kv.get_bool("frozen");
  if (kv.has("strict_pseudocode")) c.strict_pseudocode = kv.get_bool("strict_pseudocode");
  if (kv.has("optimistic")) ex.optimistic = kv.get_bool("optimistic");
  c.seed = ex.base_seed;
  kv.reject_unused();
  c.validate();
  return out;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(KeyValueConfig::load(path));
}

std::filesystem::path preset_path(const std::string& name) {
  return data_path("presets/" + name + ".cfg");
}

agents::AgentConfig load_agent_preset(const std::string& name) {
  return load_experiment_config(preset_path(name)).agent;
}

linfa::LinearAgentConfig load_linear_preset(const std::string& name) {
  return load_experiment_config(preset_path(name)).linear;
}

}  // namespace spie::harness
