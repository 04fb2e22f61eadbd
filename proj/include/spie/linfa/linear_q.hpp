#pragma once

#include <string>

#include "spie/harness/run_record.hpp"
#include "spie/intrinsic/reward.hpp"
#include "spie/linfa/rff.hpp"

namespace spie::linfa {

// Defaults are the MountainCar tuple
// (alpha, eta_sf, eta_pf, gamma, gamma_sf, gamma_pf, beta, epsilon)
// = (0.1, 0.2, 0.2, 0.99, 0.95, 0.95, 1000, 0.3).
struct LinearAgentConfig {
  std::string name = "Q-SF-PF";
  intrinsic::IntrinsicKind kind = intrinsic::IntrinsicKind::kSF_PF;
  double alpha = 0.1;
  double eta_sf = 0.2;
  double eta_pf = 0.2;
  double gamma = 0.99;
  double gamma_sf = 0.95;
  double gamma_pf = 0.95;
  double beta = 1000.0;
  double epsilon = 0.3;
  std::size_t rff_dim = kDefaultRffDim;
  double rff_sigma = kDefaultRffSigma;
  // Features are drawn from rff_seed + seed, so each run has its own map.
  std::uint64_t rff_seed = 0;
  std::uint64_t seed = 0;

  void validate() const;
  std::string canonical() const;
  std::string fingerprint() const;
};

inline constexpr long kMountainCarEpisodeCap = 10'000;

// Q-learning with linear function approximation over the RFF map on
// MountainCar, with online SF (and PF for sf_pf) learning feeding the
// intrinsic reward. Only per-episode rows are recorded; an episode cut at
// `max_episode_steps` is logged with terminated = false.
harness::RunRecord run_linear_q(const LinearAgentConfig& config, long episodes,
                                long max_episode_steps = kMountainCarEpisodeCap);

// Index of the first episode that reached the flag, or -1.
long first_success_episode(const harness::RunRecord& record);

}  // namespace spie::linfa
