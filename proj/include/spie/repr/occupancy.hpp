#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "spie/envs/transition.hpp"

namespace spie::repr {

enum class OccupancyKind { kSR, kFR, kPR };

std::string to_string(OccupancyKind kind);
OccupancyKind parse_occupancy_kind(const std::string& name);

// Dense |S|x|S| occupancy matrix with its own discount.
//   SR: M[s, s'] discounted future occupancy of s' from s (row per source).
//   FR: F[s, s'] discount raised to the first hitting time of s' from s.
//   PR: N[s, s'] discounted occupancy of s among the predecessors of s'
//       (column per target).
class OccupancyMatrix {
 public:
  OccupancyMatrix(OccupancyKind kind, std::size_t n_states, double gamma);
  OccupancyMatrix(OccupancyKind kind, Eigen::MatrixXd values, double gamma);

  OccupancyKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  double operator()(StateId i, StateId j) const { return values_(i, j); }

  double row_l1(StateId s) const { return values_.row(s).cwiseAbs().sum(); }
  double col_l1(StateId s) const { return values_.col(s).cwiseAbs().sum(); }

 private:
  OccupancyKind kind_;
  Eigen::MatrixXd values_;
  double gamma_;
};

// Online TD updates. Each uses the pre-update bootstrap and multiplies it by
// (1 - done).
//   SR: M[s,.]  += eta (e_s  + g M[s',.] - M[s,.])
//   FR: F[s,.]  += eta (e_s  + g (1 - e_s) * F[s',.] - F[s,.])
//   PR: N[.,s'] += eta (e_s' + g N[.,s] - N[.,s'])
void sr_td_update(OccupancyMatrix& m, const envs::Transition& t, double eta);
void fr_td_update(OccupancyMatrix& f, const envs::Transition& t, double eta);
void pr_td_update(OccupancyMatrix& n, const envs::Transition& t, double eta);
// Dispatches on m.kind().
void td_update(OccupancyMatrix& m, const envs::Transition& t, double eta);

// CSV: a "# kind=<SR|FR|PR> gamma=<g> n=<n>" header followed by n
// comma-separated rows.
void write_csv(std::ostream& out, const OccupancyMatrix& m);
OccupancyMatrix read_csv(std::istream& in);

}  // namespace spie::repr
