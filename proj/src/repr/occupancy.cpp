#include "spie/repr/occupancy.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace spie::repr {

namespace {

void require_kind(const OccupancyMatrix& m, OccupancyKind kind, const char* op) {
  if (m.kind() != kind) {
    throw std::invalid_argument(std::string(op) + " expects a " + to_string(kind) + " matrix, got " +
                                to_string(m.kind()));
  }
}

void require_states(const OccupancyMatrix& m, const envs::Transition& t) {
  if (t.s >= m.size() || t.s_next >= m.size()) {
    throw std::out_of_range("transition state outside the occupancy matrix");
  }
}

}  // namespace

std::string to_string(OccupancyKind kind) {
  switch (kind) {
    case OccupancyKind::kSR: return "SR";
    case OccupancyKind::kFR: return "FR";
    case OccupancyKind::kPR: return "PR";
  }
  return "?";
}

OccupancyKind parse_occupancy_kind(const std::string& name) {
  if (name == "SR" || name == "sr") return OccupancyKind::kSR;
  if (name == "FR" || name == "fr") return OccupancyKind::kFR;
  if (name == "PR" || name == "pr") return OccupancyKind::kPR;
  throw std::invalid_argument("unknown occupancy kind '" + name + "'");
}

OccupancyMatrix::OccupancyMatrix(OccupancyKind kind, std::size_t n_states, double gamma)
    : OccupancyMatrix(kind, Eigen::MatrixXd::Zero(n_states, n_states), gamma) {}

OccupancyMatrix::OccupancyMatrix(OccupancyKind kind, Eigen::MatrixXd values, double gamma)
    : kind_(kind), values_(std::move(values)), gamma_(gamma) {
  if (values_.rows() != values_.cols()) throw std::invalid_argument("occupancy matrix must be square");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("occupancy discount must lie in [0, 1)");
}

void sr_td_update(OccupancyMatrix& m, const envs::Transition& t, double eta) {
  require_kind(m, OccupancyKind::kSR, "sr_td_update");
  require_states(m, t);
  auto& M = m.values();
  const double g = t.done ? 0.0 : m.gamma();
  Eigen::RowVectorXd target = g * M.row(t.s_next);
  target(t.s) += 1.0;
  M.row(t.s) += eta * (target - M.row(t.s));
}

void fr_td_update(OccupancyMatrix& f, const envs::Transition& t, double eta) {
  require_kind(f, OccupancyKind::kFR, "fr_td_update");
  require_states(f, t);
  auto& F = f.values();
  const double g = t.done ? 0.0 : f.gamma();
  Eigen::RowVectorXd target = g * F.row(t.s_next);
  target(t.s) = 1.0;
  F.row(t.s) += eta * (target - F.row(t.s));
}

void pr_td_update(OccupancyMatrix& n, const envs::Transition& t, double eta) {
  require_kind(n, OccupancyKind::kPR, "pr_td_update");
  require_states(n, t);
  auto& N = n.values();
  const double g = t.done ? 0.0 : n.gamma();
  Eigen::VectorXd target = g * N.col(t.s);
  target(t.s_next) += 1.0;
  N.col(t.s_next) += eta * (target - N.col(t.s_next));
}

void td_update(OccupancyMatrix& m, const envs::Transition& t, double eta) {
  switch (m.kind()) {
    case OccupancyKind::kSR: sr_td_update(m, t, eta); break;
    case OccupancyKind::kFR: fr_td_update(m, t, eta); break;
    case OccupancyKind::kPR: pr_td_update(m, t, eta); break;
  }
}

void write_csv(std::ostream& out, const OccupancyMatrix& m) {
  const auto& v = m.values();
  out << "# kind=" << to_string(m.kind()) << " gamma=" << std::setprecision(17) << m.gamma()
      << " n=" << m.size() << "\n";
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (j) out << ',';
      out << v(i, j);
    }
    out << '\n';
  }
}

OccupancyMatrix read_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0) {
    throw std::invalid_argument("occupancy CSV: missing header");
  }
  std::istringstream hs(header.substr(2));
  std::string kind_s;
  double gamma = 0.0;
  std::size_t n = 0;
  for (std::string field; hs >> field;) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const auto key = field.substr(0, eq);
    const auto val = field.substr(eq + 1);
    if (key == "kind") kind_s = val;
    else if (key == "gamma") gamma = std::stod(val);
    else if (key == "n") n = std::stoul(val);
  }
  Eigen::MatrixXd values(n, n);
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("occupancy CSV: truncated");
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(ls, cell, ',')) throw std::invalid_argument("occupancy CSV: short row");
      values(i, j) = std::stod(cell);
    }
  }
  return OccupancyMatrix(parse_occupancy_kind(kind_s), std::move(values), gamma);
}

}  // namespace spie::repr
