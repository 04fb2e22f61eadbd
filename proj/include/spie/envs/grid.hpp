#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spie/envs/mdp.hpp"

namespace spie::envs {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

std::string to_string(const Cell& cell);

struct ScheduledGoal {
  Cell cell;
  int episodes = 30;  // activation length before the next goal takes over
};

// Rectangular grid world. Cells outside the grid and walls block movement.
struct GridSpec {
  std::string map_name;
  int width = 0;
  int height = 0;
  std::vector<Cell> walls;
  Cell start;
  std::vector<ScheduledGoal> goal_schedule;
};

enum class GridTask {
  kExploration,  // continuing, all rewards zero, no terminals
  kGoal,         // -1 per step, 0 and termination on entering the active goal
};

// Grid moves, in action-index order.
enum GridAction : ActionId { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr std::size_t kGridActions = 4;

// Validated indexing of the free cells of a GridSpec (row-major order).
class GridLayout {
 public:
  explicit GridLayout(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  std::size_t n_states() const { return cells_.size(); }
  bool is_wall(const Cell& c) const;
  bool in_bounds(const Cell& c) const;
  const Cell& cell(StateId s) const { return cells_[s]; }
  std::optional<StateId> state(const Cell& c) const;
  StateId start_state() const { return *state(spec_.start); }
  StateId goal_state(std::size_t schedule_index) const;

  // Deterministic successor; bumping into a wall or the border stays put.
  StateId move(StateId s, ActionId a) const;

  // Breadth-first shortest-path length in moves; nullopt when unreachable.
  std::optional<int> shortest_path(StateId from, StateId to) const;

 private:
  GridSpec spec_;
  std::vector<Cell> cells_;
  std::vector<int> state_of_cell_;  // -1 for walls
};

// Throws std::invalid_argument (naming the cell) for walls on the start or a
// goal and for disconnected free space.
DiscreteMdpSpec build_grid(const GridSpec& spec, GridTask task = GridTask::kExploration,
                           std::size_t goal_index = 0);

// '#' wall, '.' free, 'S' start, 'G' then '1', '2' scheduled goals.
GridSpec parse_grid_map(const std::string& text, const std::string& name,
                        int activation_episodes = 30);
GridSpec load_grid_map(const std::filesystem::path& path, const std::string& name,
                       int activation_episodes = 30);

// Named layouts shipped under data/maps: OF-small, Cluster-simple,
// Cluster-hard, OF-large, Cluster-simple-large.
GridSpec named_grid(const std::string& name, int activation_episodes = 30);
const std::vector<std::string>& grid_names();

}  // namespace spie::envs
