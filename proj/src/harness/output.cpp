#include "spie/harness/output.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace spie::harness {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string OutputHeader::render() const {
  std::ostringstream os;
  os << "# experiment=" << experiment << "\n";
  if (!env.empty()) os << "# env=" << env << "\n";
  os << "# seeds=" << seeds << " base_seed=" << base_seed << " (run i uses seed base_seed+i)\n";
  for (const auto& [k, v] : extra) os << "# " << k << "=" << v << "\n";
  return os.str();
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string slug(const std::string& name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "agent" : out;
}

std::string step_log_csv(const OutputHeader& header, const RunRecord& run) {
  std::ostringstream os;
  os << header.render() << "# seed=" << run.seed << " fingerprint=" << run.fingerprint << "\n"
     << "# r_int is the unscaled intrinsic reward; unique_states counts the start state\n"
     << "t,s,a,r_ext,r_int,done,unique_states\n";
  for (const auto& r : run.steps) {
    os << r.t << ',' << r.s << ',' << r.a << ',' << format_number(r.r_ext) << ',' << format_number(r.r_int) << ','
       << (r.done ? 1 : 0) << ',' << r.unique_states << '\n';
  }
  return os.str();
}

std::string episode_log_csv(const OutputHeader& header, const RunRecord& run) {
  std::ostringstream os;
  os << header.render() << "# seed=" << run.seed << " fingerprint=" << run.fingerprint << "\n"
     << "episode,length,return,terminated\n";
  for (const auto& e : run.episodes) {
    os << e.episode << ',' << e.length << ',' << format_number(e.ret) << ',' << (e.terminated ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string aggregate_csv(const OutputHeader& header, const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << header.render() << "agent,metric,mean,stderr,n_seeds\n";
  for (const auto& r : rows) {
    os << r.agent << ',' << r.metric << ',' << format_number(r.stat.mean) << ',' << format_number(r.stat.std_error)
       << ',' << r.stat.n_seeds << '\n';
  }
  return os.str();
}

std::string series_csv(const OutputHeader& header, const std::vector<NamedSeries>& series) {
  std::ostringstream os;
  os << header.render() << "agent,series,x,y,err\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.data->x.size(); ++i) {
      os << s.agent << ',' << s.series << ',' << format_number(s.data->x[i]) << ',' << format_number(s.data->y[i])
         << ',' << format_number(s.data->err[i]) << '\n';
    }
  }
  return os.str();
}

void emit_runs(const fs::path& dir, const OutputHeader& header, const std::string& agent,
               const std::vector<RunRecord>& runs) {
  const fs::path base = dir / "runs" / slug(agent);
  for (const auto& run : runs) {
    const std::string stem = "seed_" + std::to_string(run.seed);
    if (!run.steps.empty()) atomic_write(base / (stem + "_steps.csv"), step_log_csv(header, run));
    atomic_write(base / (stem + "_episodes.csv"), episode_log_csv(header, run));
  }
}

void emit_coverage(const fs::path& dir, OutputHeader header, const std::vector<CoverageResult>& results, long budget) {
  header.extra.emplace_back("budget", std::to_string(budget));
  header.extra.emplace_back("not_reached", std::to_string(budget + 1) + " (milestone not reached within budget)");
  std::vector<AggregateRow> rows;
  std::vector<NamedSeries> series;
  std::ostringstream per_seed;
  per_seed << header.render() << "agent,seed,steps_to_50,steps_to_90,steps_to_99\n";
  for (const auto& r : results) {
    rows.push_back({r.agent, "steps_to_50", r.steps_to_50});
    rows.push_back({r.agent, "steps_to_90", r.steps_to_90});
    rows.push_back({r.agent, "steps_to_99", r.steps_to_99});
    series.push_back({r.agent, "unique_states", &r.curve});
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      const auto& m = r.milestones[i];
      per_seed << r.agent << ',' << r.runs[i].seed << ',' << encode_milestone(m.steps_to_50, budget) << ','
               << encode_milestone(m.steps_to_90, budget) << ',' << encode_milestone(m.steps_to_99, budget) << '\n';
    }
    emit_runs(dir, header, r.agent, r.runs);
  }
  atomic_write(dir / "aggregate.csv", aggregate_csv(header, rows));
  atomic_write(dir / "milestones.csv", per_seed.str());
  atomic_write(dir / "coverage_curves.csv", series_csv(header, series));
}

void emit_hardexp(const fs::path& dir, const OutputHeader& header, const std::vector<HardExpResult>& results) {
  std::vector<AggregateRow> rows;
  std::ostringstream per_seed;
  per_seed << header.render() << "agent,seed,cumulative_reward\n";
  for (const auto& r : results) {
    rows.push_back({r.agent, "cumulative_reward", r.stat});
    for (std::size_t i = 0; i < r.totals.size(); ++i) {
      per_seed << r.agent << ',' << header.base_seed + i << ',' << format_number(r.totals[i]) << '\n';
    }
  }
  atomic_write(dir / "aggregate.csv", aggregate_csv(header, rows));
  atomic_write(dir / "per_seed.csv", per_seed.str());
  atomic_write(dir / "table.txt", table1_report(header.env, results));
}

namespace {

void emit_curves(const fs::path& dir, const OutputHeader& header, const std::vector<CurveResult>& agents) {
  std::vector<NamedSeries> series;
  for (const auto& a : agents) {
    series.push_back({a.agent, "episode_length", &a.length});
    series.push_back({a.agent, "return", &a.ret});
    emit_runs(dir, header, a.agent, a.runs);
  }
  atomic_write(dir / "learning_curves.csv", series_csv(header, series));
}

}  // namespace

void emit_goal(const fs::path& dir, OutputHeader header, const GoalTaskResult& result) {
  header.extra.emplace_back("shortest_path", std::to_string(result.reference));
  emit_curves(dir, header, result.agents);
  std::vector<AggregateRow> rows;
  for (const auto& a : result.agents) {
    std::vector<double> final_len;
    for (const auto& run : a.runs) final_len.push_back(static_cast<double>(run.episodes.back().length));
    rows.push_back({a.agent, "final_episode_length", aggregate(final_len)});
  }
  atomic_write(dir / "aggregate.csv", aggregate_csv(header, rows));
}

void emit_nmrdp(const fs::path& dir, OutputHeader header, const NmrdpResult& result) {
  std::string switches, refs;
  for (auto e : result.switch_episodes) switches += (switches.empty() ? "" : " ") + std::to_string(e);
  for (auto r : result.phase_reference) refs += (refs.empty() ? "" : " ") + std::to_string(r);
  header.extra.emplace_back("switch_episodes", switches);
  header.extra.emplace_back("shortest_path_per_goal", refs);
  emit_curves(dir, header, result.agents);
  std::vector<AggregateRow> rows;
  for (std::size_t i = 0; i < result.agents.size(); ++i) {
    rows.push_back({result.agents[i].agent, "mean_recovery_episodes", result.recovery_stat[i]});
  }
  atomic_write(dir / "aggregate.csv", aggregate_csv(header, rows));
}

void emit_mountaincar(const fs::path& dir, OutputHeader header, const std::vector<MountainCarResult>& results,
                      long episodes) {
  header.extra.emplace_back("episodes", std::to_string(episodes));
  header.extra.emplace_back("never_succeeded", std::to_string(episodes) + " (first_success_episode sentinel)");
  std::vector<AggregateRow> rows;
  std::vector<NamedSeries> series;
  for (const auto& r : results) {
    rows.push_back({r.agent, "first_success_episode", r.first_success_stat});
    rows.push_back({r.agent, "final_100_return", r.final_return_stat});
    series.push_back({r.agent, "return", &r.ret});
    series.push_back({r.agent, "episode_length", &r.length});
  }
  atomic_write(dir / "aggregate.csv", aggregate_csv(header, rows));
  atomic_write(dir / "learning_curves.csv", series_csv(header, series));
}

void emit_sweep(const fs::path& dir, const OutputHeader& header, const SweepResult& result) {
  std::ostringstream os;
  os << header.render() << "# best_row=" << result.best << "\n"
     << "row,config,mean,stderr,n_seeds\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    os << i << ",\"" << r.config.canonical() << "\"," << format_number(r.stat.mean) << ','
       << format_number(r.stat.std_error) << ',' << r.stat.n_seeds << '\n';
  }
  atomic_write(dir / "sweep.csv", os.str());
}

}  // namespace spie::harness
