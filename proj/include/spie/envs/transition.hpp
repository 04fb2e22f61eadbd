#pragma once

#include "spie/common.hpp"

namespace spie::envs {

// (s_t, a_t, r_t, s_{t+1}, a_{t+1}) plus the termination flag of s_{t+1}.
struct Transition {
  StateId s = 0;
  ActionId a = 0;
  double r_ext = 0.0;
  StateId s_next = 0;
  ActionId a_next = 0;
  bool done = false;
};

}  // namespace spie::envs
