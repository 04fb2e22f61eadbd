#include "spie/envs/mountain_car.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spie::envs {

using namespace mountain_car;

MountainCarStep mountaincar_step(const ContinuousState& state, double thrust) {
  thrust = std::clamp(thrust, -1.0, 1.0);
  const double x = std::clamp(state.position, kMinPosition, kMaxPosition);
  double v = std::clamp(state.velocity, -kMaxSpeed, kMaxSpeed);

  v = std::clamp(v + kForce * thrust - kGravity * std::cos(3.0 * x), -kMaxSpeed, kMaxSpeed);
  double next_x = std::clamp(x + v, kMinPosition, kMaxPosition);
  // Inelastic left wall.
  if (next_x <= kMinPosition && v < 0.0) v = 0.0;

  MountainCarStep out;
  out.next = {next_x, v};
  out.done = next_x >= kGoalPosition;
  out.reward = out.done ? kGoalReward : 0.0;
  return out;
}

ContinuousState MountainCar::reset(Rng& rng) {
  std::uniform_real_distribution<double> start(-0.6, -0.4);
  state_ = {start(rng), 0.0};
  return state_;
}

MountainCarStep MountainCar::step(ActionId action) {
  if (action >= kActions) throw std::out_of_range("MountainCar action out of range");
  auto out = mountaincar_step(state_, kThrust[action]);
  state_ = out.next;
  return out;
}

}  // namespace spie::envs
