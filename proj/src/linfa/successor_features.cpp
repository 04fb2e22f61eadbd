#include "spie/linfa/successor_features.hpp"

#include <algorithm>
#include <stdexcept>

#include "spie/common.hpp"

namespace spie::linfa {

namespace {

void require_dim(const Eigen::VectorXd& v, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(v.size()) != dim) {
    throw std::invalid_argument(std::string(what) + ": feature dimension mismatch");
  }
}

// Rank-one update that moves W * phi by exactly `change`.
void normalized_update(Eigen::MatrixXd& w, const Eigen::VectorXd& phi, const Eigen::VectorXd& change) {
  const double sq = phi.squaredNorm();
  if (sq <= 0.0) return;
  w.noalias() += (change / sq) * phi.transpose();
}

}  // namespace

LinearSf::LinearSf(std::size_t dim, std::size_t n_actions, double gamma)
    : dim_(dim), weights_(n_actions, Eigen::MatrixXd::Zero(dim, dim)), gamma_(gamma) {
  if (dim == 0 || n_actions == 0) throw std::invalid_argument("LinearSf needs positive sizes");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("SF discount must lie in [0, 1)");
}

Eigen::VectorXd LinearSf::psi(const Eigen::VectorXd& phi, std::size_t action) const {
  return weights_.at(action) * phi;
}

LinearPf::LinearPf(std::size_t dim, double gamma)
    : dim_(dim), weights_(Eigen::MatrixXd::Zero(dim, dim)), gamma_(gamma) {
  if (dim == 0) throw std::invalid_argument("LinearPf needs a positive dimension");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("PF discount must lie in [0, 1)");
}

Eigen::VectorXd sf_td_step(LinearSf& sf, const Eigen::VectorXd& phi_t, std::size_t a_t,
                           const Eigen::VectorXd& phi_next, std::size_t a_next, double eta, bool done) {
  require_dim(phi_t, sf.dim(), "sf_td_step");
  require_dim(phi_next, sf.dim(), "sf_td_step");
  Eigen::VectorXd delta = phi_t - sf.psi(phi_t, a_t);
  if (!done) delta.noalias() += sf.gamma() * sf.psi(phi_next, a_next);
  normalized_update(sf.weights(a_t), phi_t, eta * delta);
  return delta;
}

Eigen::VectorXd pf_td_step(LinearPf& pf, const Eigen::VectorXd& phi_t, const Eigen::VectorXd& phi_next,
                           double eta, bool done) {
  require_dim(phi_t, pf.dim(), "pf_td_step");
  require_dim(phi_next, pf.dim(), "pf_td_step");
  Eigen::VectorXd delta = phi_next - pf.xi(phi_next);
  if (!done) delta.noalias() += pf.gamma() * pf.xi(phi_t);
  normalized_update(pf.weights(), phi_next, eta * delta);
  return delta;
}

double r_sf_pf_from_norms(double xi_norm, double psi_norm) {
  return 1.0 / std::max(xi_norm, kNormEpsilon) - 1.0 / std::max(psi_norm, kNormEpsilon);
}

double r_sf_from_norm(double psi_norm) { return 1.0 / std::max(psi_norm, kNormEpsilon); }

double r_sf_pf(const LinearSf& sf, const LinearPf& pf, const Eigen::VectorXd& phi_t, std::size_t a_t,
               const Eigen::VectorXd& phi_next) {
  return r_sf_pf_from_norms(pf.xi(phi_next).lpNorm<1>(), sf.psi(phi_t, a_t).lpNorm<1>());
}

}  // namespace spie::linfa

namespace spie::linfa {

DeferredMatrix::DeferredMatrix(Eigen::Index dim)
    : base_(Eigen::MatrixXf::Zero(dim, dim)),
      u_(Eigen::MatrixXf::Zero(dim, kBatch)),
      v_(Eigen::MatrixXf::Zero(dim, kBatch)),
      coeff_(kBatch) {}

void DeferredMatrix::apply(const Eigen::VectorXf& x, Eigen::VectorXf& out) const {
  out.noalias() = base_ * x;
  if (pending_ == 0) return;
  coeff_.head(pending_).noalias() = v_.leftCols(pending_).transpose() * x;
  out.noalias() += u_.leftCols(pending_) * coeff_.head(pending_);
}

void DeferredMatrix::add_outer(const Eigen::VectorXf& u, const Eigen::VectorXf& v) {
  u_.col(pending_) = u;
  v_.col(pending_) = v;
  if (++pending_ == kBatch) flush();
}

void DeferredMatrix::flush() {
  if (pending_ == 0) return;
  base_.noalias() += u_.leftCols(pending_) * v_.leftCols(pending_).transpose();
  pending_ = 0;
}

Eigen::MatrixXf DeferredMatrix::dense() const {
  Eigen::MatrixXf out = base_;
  if (pending_ > 0) out.noalias() += u_.leftCols(pending_) * v_.leftCols(pending_).transpose();
  return out;
}

SfPfLearner::SfPfLearner(std::size_t dim, std::size_t n_actions, double gamma_sf, double eta_sf, bool with_pf,
                         double gamma_pf, double eta_pf)
    : sf_(n_actions, DeferredMatrix(static_cast<Eigen::Index>(dim))),
      pf_(with_pf ? static_cast<Eigen::Index>(dim) : 0),
      with_pf_(with_pf),
      gamma_sf_(static_cast<float>(gamma_sf)),
      eta_sf_(static_cast<float>(eta_sf)),
      gamma_pf_(static_cast<float>(gamma_pf)),
      eta_pf_(static_cast<float>(eta_pf)) {
  if (dim == 0 || n_actions == 0) throw std::invalid_argument("SfPfLearner needs positive sizes");
  const auto d = static_cast<Eigen::Index>(dim);
  for (auto* v : {&psi_t_, &psi_next_, &xi_t_, &xi_next_, &delta_, &scaled_}) v->setZero(d);
}

void SfPfLearner::begin(const Eigen::VectorXf& phi0, std::size_t a0) {
  sf_.at(a0).apply(phi0, psi_t_);
  if (with_pf_) pf_.apply(phi0, xi_t_);
}

SfPfLearner::Norms SfPfLearner::step(const Eigen::VectorXf& phi_t, std::size_t a_t, const Eigen::VectorXf& phi_next,
                                     std::size_t a_next, bool done) {
  Norms out;
  const float sq_t = phi_t.squaredNorm();
  delta_ = phi_t - psi_t_;
  if (!done) {
    sf_[a_next].apply(phi_next, psi_next_);
    delta_.noalias() += gamma_sf_ * psi_next_;
  }
  if (sq_t > 0.0f) {
    const float c = eta_sf_ / sq_t;
    scaled_ = c * delta_;
    sf_[a_t].add_outer(scaled_, phi_t);
    if (!done && a_next == a_t) psi_next_.noalias() += phi_t.dot(phi_next) * scaled_;
    psi_t_.noalias() += eta_sf_ * delta_;
  }
  out.psi = static_cast<double>(psi_t_.lpNorm<1>());
  psi_t_.swap(psi_next_);

  if (with_pf_) {
    const float sq_next = phi_next.squaredNorm();
    pf_.apply(phi_next, xi_next_);
    delta_ = phi_next - xi_next_;
    if (!done) delta_.noalias() += gamma_pf_ * xi_t_;
    if (sq_next > 0.0f) {
      scaled_ = (eta_pf_ / sq_next) * delta_;
      pf_.add_outer(scaled_, phi_next);
      xi_next_.noalias() += eta_pf_ * delta_;
    }
    out.xi = static_cast<double>(xi_next_.lpNorm<1>());
    xi_t_.swap(xi_next_);
  }
  return out;
}

}  // namespace spie::linfa
