#include "spie/linfa/rff.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace spie::linfa {

RffSpec make_rff(std::size_t dim, double sigma, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("RFF dimension must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("RFF bandwidth must be positive");
  RffSpec spec;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.frequencies.resize(static_cast<Eigen::Index>(dim), 2);
  spec.phases.resize(static_cast<Eigen::Index>(dim));
  Rng rng(seed);
  std::normal_distribution<double> freq(0.0, 1.0 / sigma);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (Eigen::Index i = 0; i < spec.phases.size(); ++i) {
    spec.frequencies(i, 0) = freq(rng);
    spec.frequencies(i, 1) = freq(rng);
    spec.phases(i) = phase(rng);
  }
  return spec;
}

void rff_features(const RffSpec& spec, const Eigen::Vector2d& x, Eigen::VectorXd& out) {
  const double scale = std::sqrt(2.0 / static_cast<double>(spec.dim()));
  out = (spec.frequencies * x + spec.phases).array().cos() * scale;
}

void rff_features(const RffSpec& spec, const Eigen::Vector2d& x, Eigen::VectorXf& out) {
  const float scale = static_cast<float>(std::sqrt(2.0 / static_cast<double>(spec.dim())));
  out = (spec.frequencies.col(0) * x(0) + spec.frequencies.col(1) * x(1) + spec.phases).cast<float>();
  out = out.array().cos() * scale;
}

Eigen::VectorXd rff_features(const RffSpec& spec, const Eigen::Vector2d& x) {
  Eigen::VectorXd out;
  rff_features(spec, x, out);
  return out;
}

Eigen::Vector2d normalize(const envs::ContinuousState& state) {
  using namespace envs::mountain_car;
  return {(state.position - kMinPosition) / (kMaxPosition - kMinPosition),
          (state.velocity + kMaxSpeed) / (2.0 * kMaxSpeed)};
}

Eigen::VectorXd rff_features(const RffSpec& spec, const envs::ContinuousState& state) {
  return rff_features(spec, normalize(state));
}

}  // namespace spie::linfa
