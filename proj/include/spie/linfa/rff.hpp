#pragma once

#include <Eigen/Dense>

#include "spie/envs/mountain_car.hpp"

namespace spie::linfa {

// Random Fourier features over a 2-d input:
//   phi_i(x) = sqrt(2 / D) cos(w_i . x + b_i),  w_i ~ N(0, sigma^-2 I),  b_i ~ U[0, 2 pi).
// The inner product phi(x).phi(y) approximates exp(-|x - y|^2 / (2 sigma^2)).
struct RffSpec {
  Eigen::MatrixXd frequencies;  // D x 2
  Eigen::VectorXd phases;       // D
  double sigma = 0.5;
  std::uint64_t seed = 0;

  std::size_t dim() const { return static_cast<std::size_t>(phases.size()); }
};

inline constexpr std::size_t kDefaultRffDim = 128;
inline constexpr double kDefaultRffSigma = 0.5;

RffSpec make_rff(std::size_t dim, double sigma, std::uint64_t seed);

// Features of an already-normalized input, written into `out` (resized).
void rff_features(const RffSpec& spec, const Eigen::Vector2d& x, Eigen::VectorXd& out);
Eigen::VectorXd rff_features(const RffSpec& spec, const Eigen::Vector2d& x);
// Single-precision variant used by the MountainCar agent.
void rff_features(const RffSpec& spec, const Eigen::Vector2d& x, Eigen::VectorXf& out);

// MountainCar position and velocity mapped to [0, 1]^2 from their bounds.
Eigen::Vector2d normalize(const envs::ContinuousState& state);
Eigen::VectorXd rff_features(const RffSpec& spec, const envs::ContinuousState& state);

}  // namespace spie::linfa
