#pragma once

#include <Eigen/Dense>

#include "spie/repr/occupancy.hpp"

namespace spie::repr {

struct StationaryDistribution {
  Eigen::VectorXd z;
  long iterations = 0;
};

inline constexpr long kPowerIterationCap = 1'000'000;
inline constexpr double kPowerIterationTolerance = 1e-12;

// P must be square and row-stochastic (rows sum to 1 within 1e-9).
void validate_stochastic(const Eigen::MatrixXd& p);

// Strong connectivity of the support graph of P.
bool is_irreducible(const Eigen::MatrixXd& p);

// M = (I - gamma P)^-1. Throws std::runtime_error if the system is singular.
OccupancyMatrix analytic_sr(const Eigen::MatrixXd& p, double gamma);

// Closed-form first-occupancy matrix, F[s, j] = M[s, j] / M[j, j].
OccupancyMatrix analytic_fr(const Eigen::MatrixXd& p, double gamma);

// zP = z by power iteration on the lazy chain (I + P) / 2, which shares its
// stationary distribution with P and is aperiodic whenever P is irreducible.
// Throws std::runtime_error ("not ergodic") for reducible chains or when the
// iteration cap is hit.
StationaryDistribution stationary_distribution(const Eigen::MatrixXd& p);

// Retrospective kernel Pr[i, j] = P[i, j] z[i] / z[j] = P(s_t = i | s_t+1 = j).
Eigen::MatrixXd retrospective_transition(const Eigen::MatrixXd& p, const Eigen::VectorXd& z);

// N = (I - gamma Pr)^-1.
OccupancyMatrix analytic_pr(const Eigen::MatrixXd& p, double gamma);
OccupancyMatrix analytic_pr(const Eigen::MatrixXd& p, const Eigen::VectorXd& z, double gamma);

}  // namespace spie::repr
