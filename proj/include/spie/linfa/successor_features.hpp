#pragma once

#include <vector>

#include <Eigen/Dense>

namespace spie::linfa {

// psi(s, a) = W_a phi(s), one D x D matrix per action.
class LinearSf {
 public:
  LinearSf(std::size_t dim, std::size_t n_actions, double gamma);

  std::size_t dim() const { return dim_; }
  std::size_t n_actions() const { return weights_.size(); }
  double gamma() const { return gamma_; }
  Eigen::VectorXd psi(const Eigen::VectorXd& phi, std::size_t action) const;
  const Eigen::MatrixXd& weights(std::size_t action) const { return weights_[action]; }
  Eigen::MatrixXd& weights(std::size_t action) { return weights_[action]; }

 private:
  std::size_t dim_;
  std::vector<Eigen::MatrixXd> weights_;
  double gamma_;
};

// xi(s) = V mu(s); the base features mu are the same map as phi.
class LinearPf {
 public:
  LinearPf(std::size_t dim, double gamma);

  std::size_t dim() const { return dim_; }
  double gamma() const { return gamma_; }
  Eigen::VectorXd xi(const Eigen::VectorXd& mu) const { return weights_ * mu; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  Eigen::MatrixXd& weights() { return weights_; }

 private:
  std::size_t dim_;
  Eigen::MatrixXd weights_;
  double gamma_;
};

// Semi-gradient TD step on
//   delta = phi_t + gamma (1 - done) psi(s', a') - psi(s, a),
// touching only W_{a_t}. The step is normalized by |phi_t|^2, so psi(s, a)
// moves by exactly eta * delta; with one-hot features this is the tabular SR
// update. Returns delta.
Eigen::VectorXd sf_td_step(LinearSf& sf, const Eigen::VectorXd& phi_t, std::size_t a_t,
                           const Eigen::VectorXd& phi_next, std::size_t a_next, double eta,
                           bool done = false);

// Time-reversed mirror:
//   delta = mu(s') + gamma (1 - done) xi(s) - xi(s'),
// moving the prediction at s' by eta * delta. With one-hot features this is
// the tabular PR column update. Returns delta.
Eigen::VectorXd pf_td_step(LinearPf& pf, const Eigen::VectorXd& phi_t, const Eigen::VectorXd& phi_next,
                           double eta, bool done = false);

// 1 / max(|xi(s')|_1, eps) - 1 / max(|psi(s, a)|_1, eps).
double r_sf_pf_from_norms(double xi_norm, double psi_norm);
double r_sf_pf(const LinearSf& sf, const LinearPf& pf, const Eigen::VectorXd& phi_t, std::size_t a_t,
               const Eigen::VectorXd& phi_next);
// 1 / max(|psi(s, a)|_1, eps).
double r_sf_from_norm(double psi_norm);

}  // namespace spie::linfa

namespace spie::linfa {

// Single-precision D x D matrix whose rank-one updates are queued and folded
// in as one matrix product every kBatch updates.
class DeferredMatrix {
 public:
  static constexpr Eigen::Index kBatch = 32;

  explicit DeferredMatrix(Eigen::Index dim);

  Eigen::Index dim() const { return base_.rows(); }
  // out = W x
  void apply(const Eigen::VectorXf& x, Eigen::VectorXf& out) const;
  // W += u v^T
  void add_outer(const Eigen::VectorXf& u, const Eigen::VectorXf& v);
  Eigen::MatrixXf dense() const;

 private:
  void flush();

  Eigen::MatrixXf base_, u_, v_;
  Eigen::Index pending_ = 0;
  mutable Eigen::VectorXf coeff_;
};

// The agent's SF / PF learners. Same semi-gradient, |phi|^2-normalized steps
// as sf_td_step and pf_td_step, in single precision. psi(s_t, a_t) and xi(s_t)
// are carried over from the previous step (corrected for the update made
// there), so each learner costs one mat-vec and one rank-one update per step.
class SfPfLearner {
 public:
  SfPfLearner(std::size_t dim, std::size_t n_actions, double gamma_sf, double eta_sf, bool with_pf = false,
              double gamma_pf = 0.0, double eta_pf = 0.0);

  // Start of an episode in feature state phi0 with first action a0.
  void begin(const Eigen::VectorXf& phi0, std::size_t a0);

  struct Norms {
    double psi = 0.0;  // |psi(s_t, a_t)|_1 after the update
    double xi = 0.0;   // |xi(s_{t+1})|_1 after the update (0 without PF)
  };
  Norms step(const Eigen::VectorXf& phi_t, std::size_t a_t, const Eigen::VectorXf& phi_next, std::size_t a_next,
             bool done);

  Eigen::MatrixXd sf_weights(std::size_t action) const { return sf_.at(action).dense().cast<double>(); }
  Eigen::MatrixXd pf_weights() const { return pf_.dense().cast<double>(); }

 private:
  std::vector<DeferredMatrix> sf_;
  DeferredMatrix pf_;
  bool with_pf_;
  float gamma_sf_, eta_sf_, gamma_pf_, eta_pf_;
  Eigen::VectorXf psi_t_, psi_next_, xi_t_, xi_next_, delta_, scaled_;
};

}  // namespace spie::linfa
