#pragma once

#include <array>

#include "spie/common.hpp"

namespace spie::envs {

struct ContinuousState {
  double position = 0.0;
  double velocity = 0.0;
};

struct MountainCarStep {
  ContinuousState next;
  double reward = 0.0;
  bool done = false;
};

namespace mountain_car {
inline constexpr double kMinPosition = -1.2;
inline constexpr double kMaxPosition = 0.6;
inline constexpr double kMaxSpeed = 0.07;
inline constexpr double kGoalPosition = 0.5;
inline constexpr double kForce = 0.001;
inline constexpr double kGravity = 0.0025;
inline constexpr double kGoalReward = 1.0;
inline constexpr std::size_t kActions = 3;
// Action index -> thrust direction.
inline constexpr std::array<double, kActions> kThrust = {-1.0, 0.0, 1.0};
}  // namespace mountain_car

// One step of the classic dynamics. `thrust` is -1, 0 or +1; out-of-range
// inputs are clamped. Zero reward unless the flag is reached.
MountainCarStep mountaincar_step(const ContinuousState& state, double thrust);

class MountainCar {
 public:
  ContinuousState reset(Rng& rng);
  MountainCarStep step(ActionId action);
  const ContinuousState& state() const { return state_; }
  std::size_t n_actions() const { return mountain_car::kActions; }

 private:
  ContinuousState state_;
};

}  // namespace spie::envs
