#include "spie/envs/grid.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spie::envs {

std::string to_string(const Cell& cell) {
  return "(" + std::to_string(cell.row) + ", " + std::to_string(cell.col) + ")";
}

GridLayout::GridLayout(const GridSpec& spec) : spec_(spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    throw std::invalid_argument("grid '" + spec.map_name + "' has non-positive size");
  }
  state_of_cell_.assign(static_cast<std::size_t>(spec.width * spec.height), 0);
  for (const auto& w : spec.walls) {
    if (!in_bounds(w)) throw std::invalid_argument("wall outside grid at " + to_string(w));
    state_of_cell_[static_cast<std::size_t>(w.row * spec.width + w.col)] = -1;
  }
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      auto& slot = state_of_cell_[static_cast<std::size_t>(r * spec.width + c)];
      if (slot < 0) continue;
      slot = static_cast<int>(cells_.size());
      cells_.push_back({r, c});
    }
  }
  if (cells_.empty()) throw std::invalid_argument("grid '" + spec.map_name + "' has no free cells");

  auto require_free = [&](const Cell& c, const char* what) {
    if (!in_bounds(c) || is_wall(c)) {
      throw std::invalid_argument(std::string(what) + " on wall or outside grid at " + to_string(c));
    }
  };
  require_free(spec.start, "start");
  for (const auto& g : spec.goal_schedule) require_free(g.cell, "goal");

  std::vector<bool> seen(cells_.size(), false);
  std::deque<StateId> frontier{start_state()};
  seen[start_state()] = true;
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    for (ActionId a = 0; a < kGridActions; ++a) {
      const StateId n = move(s, a);
      if (!seen[n]) {
        seen[n] = true;
        frontier.push_back(n);
      }
    }
  }
  for (StateId s = 0; s < cells_.size(); ++s) {
    if (!seen[s]) {
      throw std::invalid_argument("free cell " + to_string(cells_[s]) +
                                  " is disconnected from the start in grid '" + spec.map_name + "'");
    }
  }
}

bool GridLayout::in_bounds(const Cell& c) const {
  return c.row >= 0 && c.col >= 0 && c.row < spec_.height && c.col < spec_.width;
}

bool GridLayout::is_wall(const Cell& c) const {
  return state_of_cell_[static_cast<std::size_t>(c.row * spec_.width + c.col)] < 0;
}

std::optional<StateId> GridLayout::state(const Cell& c) const {
  if (!in_bounds(c) || is_wall(c)) return std::nullopt;
  return static_cast<StateId>(state_of_cell_[static_cast<std::size_t>(c.row * spec_.width + c.col)]);
}

StateId GridLayout::goal_state(std::size_t schedule_index) const {
  if (schedule_index >= spec_.goal_schedule.size()) {
    throw std::out_of_range("goal index out of range for grid '" + spec_.map_name + "'");
  }
  return *state(spec_.goal_schedule[schedule_index].cell);
}

StateId GridLayout::move(StateId s, ActionId a) const {
  Cell c = cells_[s];
  switch (a) {
    case kUp: --c.row; break;
    case kDown: ++c.row; break;
    case kLeft: --c.col; break;
    case kRight: ++c.col; break;
    default: throw std::out_of_range("grid action out of range");
  }
  return state(c).value_or(s);
}

std::optional<int> GridLayout::shortest_path(StateId from, StateId to) const {
  std::vector<int> dist(cells_.size(), -1);
  std::deque<StateId> frontier{from};
  dist[from] = 0;
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    if (s == to) return dist[s];
    for (ActionId a = 0; a < kGridActions; ++a) {
      const StateId n = move(s, a);
      if (dist[n] < 0) {
        dist[n] = dist[s] + 1;
        frontier.push_back(n);
      }
    }
  }
  return std::nullopt;
}

DiscreteMdpSpec build_grid(const GridSpec& spec, GridTask task, std::size_t goal_index) {
  const GridLayout layout(spec);
  const std::size_t n = layout.n_states();
  MdpBuilder builder(n, kGridActions);
  builder.start(layout.start_state(), 1.0);

  if (task == GridTask::kExploration) {
    for (StateId s = 0; s < n; ++s) {
      for (ActionId a = 0; a < kGridActions; ++a) builder.add(s, a, layout.move(s, a), 1.0, 0.0);
    }
    return builder.build();
  }

  const StateId goal = layout.goal_state(goal_index);
  builder.terminal(goal);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < kGridActions; ++a) {
      if (s == goal) {
        builder.add(s, a, s, 1.0, 0.0);
        continue;
      }
      const StateId next = layout.move(s, a);
      builder.add(s, a, next, 1.0, next == goal ? 0.0 : -1.0);
    }
  }
  return builder.build();
}

GridSpec parse_grid_map(const std::string& text, const std::string& name, int activation_episodes) {
  GridSpec spec;
  spec.map_name = name;
  std::istringstream in(text);
  std::string line;
  std::optional<Cell> start;
  std::map<char, Cell> goals;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (spec.width == 0) spec.width = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != spec.width) {
      throw std::invalid_argument("map '" + name + "' row " + std::to_string(row) +
                                  " has width " + std::to_string(line.size()) + ", expected " +
                                  std::to_string(spec.width));
    }
    for (int col = 0; col < spec.width; ++col) {
      const char ch = line[static_cast<std::size_t>(col)];
      const Cell cell{row, col};
      switch (ch) {
        case '#': spec.walls.push_back(cell); break;
        case '.': break;
        case 'S':
          if (start) throw std::invalid_argument("map '" + name + "' has more than one start");
          start = cell;
          break;
        case 'G':
        case '1':
        case '2':
          if (goals.count(ch)) {
            throw std::invalid_argument("map '" + name + "' repeats goal '" + std::string(1, ch) + "'");
          }
          goals[ch] = cell;
          break;
        default:
          throw std::invalid_argument("map '" + name + "' has unknown symbol '" + std::string(1, ch) +
                                      "' at " + to_string(cell));
      }
    }
    ++row;
  }
  spec.height = row;
  if (!start) throw std::invalid_argument("map '" + name + "' has no start 'S'");
  spec.start = *start;
  for (char key : {'G', '1', '2'}) {
    if (auto it = goals.find(key); it != goals.end()) {
      spec.goal_schedule.push_back({it->second, activation_episodes});
    }
  }
  GridLayout validate(spec);
  return spec;
}

GridSpec load_grid_map(const std::filesystem::path& path, const std::string& name,
                       int activation_episodes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid map " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid_map(buf.str(), name, activation_episodes);
}

const std::vector<std::string>& grid_names() {
  static const std::vector<std::string> names = {"OF-small", "Cluster-simple", "Cluster-hard",
                                                 "OF-large", "Cluster-simple-large"};
  return names;
}

GridSpec named_grid(const std::string& name, int activation_episodes) {
  static const std::map<std::string, std::string> files = {
      {"OF-small", "of_small.txt"},     {"Cluster-simple", "cluster_simple.txt"},
      {"Cluster-hard", "cluster_hard.txt"}, {"OF-large", "of_large.txt"},
      {"Cluster-simple-large", "cluster_simple_large.txt"},
  };
  const auto it = files.find(name);
  if (it == files.end()) throw std::invalid_argument("unknown grid '" + name + "'");
  return load_grid_map(data_path("maps/" + it->second), name, activation_episodes);
}

}  // namespace spie::envs
