#include "spie/repr/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spie::repr {

namespace {

Eigen::MatrixXd discounted_inverse(const Eigen::MatrixXd& kernel, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in [0, 1)");
  const auto n = kernel.rows();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - gamma * kernel;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (!(lu.rcond() > 1e-14)) throw std::runtime_error("occupancy system (I - gamma P) is singular");
  Eigen::MatrixXd inv = lu.inverse();
  if (!inv.allFinite()) throw std::runtime_error("occupancy system (I - gamma P) is singular");
  return inv;
}

// Forward reachability over the support graph, following edges (i -> j) when
// forward, (j -> i) otherwise.
std::vector<bool> reachable_from_zero(const Eigen::MatrixXd& p, bool forward) {
  const auto n = p.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = forward ? p(i, j) : p(j, i);
      if (w > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

void validate_stochastic(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw std::invalid_argument("transition matrix must be square and non-empty");
  }
  if ((p.array() < 0.0).any()) throw std::invalid_argument("transition matrix has negative entries");
  const Eigen::VectorXd sums = p.rowwise().sum();
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    if (std::abs(sums(i) - 1.0) > 1e-9) {
      throw std::invalid_argument("transition row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

bool is_irreducible(const Eigen::MatrixXd& p) {
  for (bool forward : {true, false}) {
    for (bool seen : reachable_from_zero(p, forward)) {
      if (!seen) return false;
    }
  }
  return true;
}

OccupancyMatrix analytic_sr(const Eigen::MatrixXd& p, double gamma) {
  validate_stochastic(p);
  return OccupancyMatrix(OccupancyKind::kSR, discounted_inverse(p, gamma), gamma);
}

OccupancyMatrix analytic_fr(const Eigen::MatrixXd& p, double gamma) {
  validate_stochastic(p);
  Eigen::MatrixXd m = discounted_inverse(p, gamma);
  const Eigen::VectorXd diag = m.diagonal();
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) /= diag(j);
  // Diagonal is 1 by definition; remove the rounding residue.
  m.diagonal().setOnes();
  return OccupancyMatrix(OccupancyKind::kFR, std::move(m), gamma);
}

StationaryDistribution stationary_distribution(const Eigen::MatrixXd& p) {
  validate_stochastic(p);
  if (!is_irreducible(p)) {
    throw std::runtime_error("stationary_distribution: chain is reducible, not ergodic");
  }
  const auto n = p.rows();
  const Eigen::MatrixXd lazy_t =
      (0.5 * (Eigen::MatrixXd::Identity(n, n) + p)).transpose();
  Eigen::VectorXd z = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd next(n);
  for (long it = 1; it <= kPowerIterationCap; ++it) {
    next.noalias() = lazy_t * z;
    next /= next.sum();
    const double change = (next - z).lpNorm<1>();
    z.swap(next);
    if (change < kPowerIterationTolerance) return {z, it};
  }
  throw std::runtime_error("stationary_distribution: power iteration did not converge, chain not ergodic");
}

Eigen::MatrixXd retrospective_transition(const Eigen::MatrixXd& p, const Eigen::VectorXd& z) {
  if (z.size() != p.rows()) throw std::invalid_argument("stationary vector size mismatch");
  if ((z.array() <= 0.0).any()) throw std::invalid_argument("stationary vector must be positive");
  return z.asDiagonal() * p * z.cwiseInverse().asDiagonal();
}

OccupancyMatrix analytic_pr(const Eigen::MatrixXd& p, double gamma) {
  const auto z = stationary_distribution(p).z;
  return analytic_pr(p, z, gamma);
}

OccupancyMatrix analytic_pr(const Eigen::MatrixXd& p, const Eigen::VectorXd& z, double gamma) {
  validate_stochastic(p);
  return OccupancyMatrix(OccupancyKind::kPR, discounted_inverse(retrospective_transition(p, z), gamma),
                         gamma);
}

}  // namespace spie::repr
