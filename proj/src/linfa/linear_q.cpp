#include "spie/linfa/linear_q.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "spie/envs/mountain_car.hpp"
#include "spie/linfa/successor_features.hpp"

namespace spie::linfa {

using intrinsic::IntrinsicKind;

void LinearAgentConfig::validate() const {
  auto in_open_closed = [](double x) { return x > 0.0 && x <= 1.0; };
  auto in_open = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_open_closed(alpha)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!in_open_closed(eta_sf) || !in_open_closed(eta_pf)) {
    throw std::invalid_argument("eta_sf and eta_pf must lie in (0, 1]");
  }
  if (!in_open(gamma) || !in_open(gamma_sf) || !in_open(gamma_pf)) {
    throw std::invalid_argument("discounts must lie in (0, 1)");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be non-negative");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (kind != IntrinsicKind::kNone && kind != IntrinsicKind::kSF && kind != IntrinsicKind::kSF_PF) {
    throw std::invalid_argument("linear agent supports intrinsic kinds none, sf and sf_pf");
  }
}

std::string LinearAgentConfig::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17) << "name=" << name << ";intrinsic=" << intrinsic::to_string(kind)
     << ";alpha=" << alpha << ";eta_sf=" << eta_sf << ";eta_pf=" << eta_pf << ";gamma=" << gamma
     << ";gamma_sf=" << gamma_sf << ";gamma_pf=" << gamma_pf << ";beta=" << beta
     << ";epsilon=" << epsilon << ";rff_dim=" << rff_dim << ";rff_sigma=" << rff_sigma
     << ";rff_seed=" << rff_seed;
  return os.str();
}

std::string LinearAgentConfig::fingerprint() const { return hex64(fnv1a(canonical())); }

namespace {

// q holds theta * phi for the state being acted in.
std::size_t greedy(const Eigen::VectorXf& q, double epsilon, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(q.size()) - 1);
    return pick(rng);
  }
  Eigen::Index best = 0;
  q.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

}  // namespace

harness::RunRecord run_linear_q(const LinearAgentConfig& config, long episodes, long max_episode_steps) {
  config.validate();
  if (episodes <= 0) throw std::invalid_argument("episode budget must be positive");
  if (max_episode_steps <= 0) throw std::invalid_argument("episode step cap must be positive");

  Rng rng(config.seed);
  const RffSpec rff = make_rff(config.rff_dim, config.rff_sigma, config.rff_seed + config.seed);
  envs::MountainCar car;
  const auto n_actions = car.n_actions();
  const auto dim = static_cast<Eigen::Index>(config.rff_dim);

  using RowMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMatrix theta = RowMatrix::Zero(static_cast<Eigen::Index>(n_actions), dim);
  const bool learn_sf = config.kind == IntrinsicKind::kSF || config.kind == IntrinsicKind::kSF_PF;
  const bool learn_pf = config.kind == IntrinsicKind::kSF_PF;
  SfPfLearner learner(config.rff_dim, n_actions, config.gamma_sf, config.eta_sf, learn_pf, config.gamma_pf,
                      config.eta_pf);

  harness::RunRecord record;
  record.seed = config.seed;
  record.fingerprint = config.fingerprint();

  const auto alpha = static_cast<float>(config.alpha);
  Eigen::VectorXf phi(dim), phi_next(dim);
  Eigen::VectorXf q(static_cast<Eigen::Index>(n_actions)), q_next(static_cast<Eigen::Index>(n_actions));
  for (long ep = 0; ep < episodes; ++ep) {
    rff_features(rff, normalize(car.reset(rng)), phi);
    q.noalias() = theta * phi;
    std::size_t a = greedy(q, config.epsilon, rng);
    if (learn_sf) learner.begin(phi, a);
    harness::EpisodeRow row{ep, 0, 0.0, false};
    for (long step = 0; step < max_episode_steps; ++step) {
      const auto out = car.step(a);
      rff_features(rff, normalize(out.next), phi_next);
      q_next.noalias() = theta * phi_next;
      const std::size_t a_next = greedy(q_next, config.epsilon, rng);

      double r_int = 0.0;
      if (learn_sf) {
        const auto norms = learner.step(phi, a, phi_next, a_next, out.done);
        r_int = learn_pf ? r_sf_pf_from_norms(norms.xi, norms.psi) : r_sf_from_norm(norms.psi);
      }
      const double r_total = intrinsic::combine(out.reward, r_int, config.beta);
      const double target = out.done ? r_total : r_total + config.gamma * q_next.maxCoeff();
      const auto row_a = static_cast<Eigen::Index>(a);
      const float step_size = alpha * static_cast<float>(target - q(row_a));
      theta.row(row_a).noalias() += step_size * phi.transpose();

      ++row.length;
      row.ret += out.reward;
      record.total_extrinsic += out.reward;
      ++record.total_steps;
      if (out.done) {
        row.terminated = true;
        break;
      }
      // theta changed only in row a, along phi.
      q_next(row_a) += step_size * phi.dot(phi_next);
      phi.swap(phi_next);
      q.swap(q_next);
      a = a_next;
    }
    record.episodes.push_back(row);
  }
  return record;
}

long first_success_episode(const harness::RunRecord& record) {
  for (const auto& e : record.episodes) {
    if (e.terminated) return e.episode;
  }
  return -1;
}

}  // namespace spie::linfa
