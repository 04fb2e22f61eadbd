#include "spie/envs/environment.hpp"

#include <stdexcept>

namespace spie::envs {

StateId MdpEnvironment::reset(Rng& rng) {
  state_ = spec_.sample_start(rng);
  return state_;
}

StepResult MdpEnvironment::step(ActionId action, Rng& rng) {
  const Outcome& o = spec_.sample(state_, action, rng);
  state_ = o.next;
  return {o.next, o.reward, spec_.is_terminal(o.next)};
}

DiscreteMdpSpec riverswim_spec() { return load_mdp_table(data_path("mdps/riverswim.txt")); }

DiscreteMdpSpec sixarms_spec() { return load_mdp_table(data_path("mdps/sixarms.txt")); }

NmrdpEnvironment::NmrdpEnvironment(const GridSpec& base) : layout_(base) {
  if (base.goal_schedule.empty()) {
    throw std::invalid_argument("grid '" + base.map_name + "' has an empty goal schedule");
  }
  for (std::size_t i = 0; i < base.goal_schedule.size(); ++i) {
    if (base.goal_schedule[i].episodes <= 0) {
      throw std::invalid_argument("goal activation length must be positive");
    }
    cycle_length_ += base.goal_schedule[i].episodes;
    goal_mdps_.push_back(build_grid(base, GridTask::kGoal, i));
  }
}

std::size_t NmrdpEnvironment::goal_for_episode(long episode) const {
  if (episode < 0) episode = 0;
  long offset = episode % cycle_length_;
  const auto& schedule = layout_.spec().goal_schedule;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (offset < schedule[i].episodes) return i;
    offset -= schedule[i].episodes;
  }
  return schedule.size() - 1;
}

StateId NmrdpEnvironment::reset(Rng& rng) {
  ++episode_;
  state_ = mdp().sample_start(rng);
  return state_;
}

StepResult NmrdpEnvironment::step(ActionId action, Rng& rng) {
  const auto& spec = mdp();
  const Outcome& o = spec.sample(state_, action, rng);
  state_ = o.next;
  return {o.next, o.reward, spec.is_terminal(o.next)};
}

std::unique_ptr<NmrdpEnvironment> nmrdp_wrap(const GridSpec& base) {
  return std::make_unique<NmrdpEnvironment>(base);
}

}  // namespace spie::envs
