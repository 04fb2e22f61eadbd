#include "spie/harness/run_record.hpp"

namespace spie::harness {

std::vector<std::size_t> RunRecord::coverage_curve() const {
  std::vector<std::size_t> curve;
  curve.reserve(steps.size() + 1);
  curve.push_back(initial_unique);
  for (const auto& row : steps) curve.push_back(row.unique_states);
  return curve;
}

bool same_trajectory(const RunRecord& a, const RunRecord& b) {
  if (a.seed != b.seed || a.n_states != b.n_states || a.initial_unique != b.initial_unique ||
      a.total_steps != b.total_steps || a.total_extrinsic != b.total_extrinsic ||
      a.steps.size() != b.steps.size() || a.episodes.size() != b.episodes.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto& x = a.steps[i];
    const auto& y = b.steps[i];
    if (x.t != y.t || x.s != y.s || x.a != y.a || x.r_ext != y.r_ext || x.done != y.done ||
        x.unique_states != y.unique_states) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    const auto& x = a.episodes[i];
    const auto& y = b.episodes[i];
    if (x.episode != y.episode || x.length != y.length || x.ret != y.ret ||
        x.terminated != y.terminated) {
      return false;
    }
  }
  return true;
}

}  // namespace spie::harness
