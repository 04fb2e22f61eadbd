#pragma once

#include <memory>

#include "spie/envs/grid.hpp"
#include "spie/envs/mdp.hpp"

namespace spie::envs {

struct StepResult {
  StateId next = 0;
  double reward = 0.0;
  bool done = false;
};

// Stepping interface the tabular agents run against. Each step and each reset
// consumes exactly one uniform draw from the supplied generator.
class TabularEnvironment {
 public:
  virtual ~TabularEnvironment() = default;

  virtual std::size_t n_states() const = 0;
  virtual std::size_t n_actions() const = 0;
  virtual StateId reset(Rng& rng) = 0;
  virtual StepResult step(ActionId action, Rng& rng) = 0;

  // The MDP currently in force (the active goal for scheduled tasks).
  virtual const DiscreteMdpSpec& mdp() const = 0;
  virtual std::unique_ptr<TabularEnvironment> clone() const = 0;
};

class MdpEnvironment final : public TabularEnvironment {
 public:
  explicit MdpEnvironment(DiscreteMdpSpec spec) : spec_(std::move(spec)) {}

  std::size_t n_states() const override { return spec_.n_states(); }
  std::size_t n_actions() const override { return spec_.n_actions(); }
  StateId reset(Rng& rng) override;
  StepResult step(ActionId action, Rng& rng) override;
  const DiscreteMdpSpec& mdp() const override { return spec_; }
  std::unique_ptr<TabularEnvironment> clone() const override {
    return std::make_unique<MdpEnvironment>(*this);
  }

  StateId state() const { return state_; }

 private:
  DiscreteMdpSpec spec_;
  StateId state_ = 0;
};

// RiverSwim and SixArms, read from data/mdps.
DiscreteMdpSpec riverswim_spec();
DiscreteMdpSpec sixarms_spec();
inline constexpr ActionId kRiverLeft = 0;
inline constexpr ActionId kRiverRight = 1;

// Goal-reaching grid whose active goal walks through the GridSpec schedule:
// goal i stays active for its activation length in episodes, then the next
// one takes over, wrapping around. Only the active goal terminates.
class NmrdpEnvironment final : public TabularEnvironment {
 public:
  explicit NmrdpEnvironment(const GridSpec& base);

  std::size_t n_states() const override { return layout_.n_states(); }
  std::size_t n_actions() const override { return kGridActions; }
  StateId reset(Rng& rng) override;
  StepResult step(ActionId action, Rng& rng) override;
  const DiscreteMdpSpec& mdp() const override { return goal_mdps_[active_goal()]; }
  std::unique_ptr<TabularEnvironment> clone() const override {
    return std::make_unique<NmrdpEnvironment>(*this);
  }

  // Index into the goal schedule; a pure function of the episode counter.
  std::size_t active_goal() const { return goal_for_episode(episode_); }
  std::size_t goal_for_episode(long episode) const;
  // Episode currently running (0-based); -1 before the first reset.
  long episode() const { return episode_; }
  const GridLayout& layout() const { return layout_; }

 private:
  GridLayout layout_;
  std::vector<DiscreteMdpSpec> goal_mdps_;
  long cycle_length_ = 0;
  long episode_ = -1;
  StateId state_ = 0;
};

// A single-goal schedule behaves exactly like the stationary goal task.
std::unique_ptr<NmrdpEnvironment> nmrdp_wrap(const GridSpec& base);

}  // namespace spie::envs
