#pragma once

#include <string>

#include "spie/envs/transition.hpp"
#include "spie/repr/occupancy.hpp"

namespace spie::intrinsic {

enum class IntrinsicKind {
  kNone,
  kSR,     // 1 / ||M[s,:]||_1
  kFR,     // ||F[s,:]||_1
  kSRR,    // M[s,s'] - ||M[:,s']||_1
  kSRR_A,  // M[s,s']
  kSRR_B,  // -||M[:,s']||_1
  kSR_PR,  // M[s,s'] - ||N[:,s']||_1
  kSF,     // 1 / ||psi(s,a)||_1 (linear agents)
  kSF_PF,  // 1 / ||xi(s')||_1 - 1 / ||psi(s,a)||_1 (linear agents)
};

// Config names: none|sr|fr|srr|srr_a|srr_b|sr_pr|sf|sf_pf.
std::string to_string(IntrinsicKind kind);
IntrinsicKind parse_intrinsic_kind(const std::string& name);
bool is_tabular(IntrinsicKind kind);
bool needs_sr(IntrinsicKind kind);
bool needs_fr(IntrinsicKind kind);
bool needs_pr(IntrinsicKind kind);

struct IntrinsicRewardSpec {
  IntrinsicKind kind = IntrinsicKind::kNone;
  double beta = 0.0;
  // Use a fixed precomputed representation instead of learning it online.
  bool frozen = false;

  void validate() const;
};

double r_srr(const repr::OccupancyMatrix& m, const envs::Transition& t);
double r_srr_a(const repr::OccupancyMatrix& m, const envs::Transition& t);
double r_srr_b(const repr::OccupancyMatrix& m, const envs::Transition& t);
// Zero rows are clamped at kNormEpsilon.
double r_sr(const repr::OccupancyMatrix& m, const envs::Transition& t);
double r_fr(const repr::OccupancyMatrix& f, const envs::Transition& t);
double r_sr_pr(const repr::OccupancyMatrix& m, const repr::OccupancyMatrix& n,
               const envs::Transition& t);

inline double combine(double r_ext, double r_int, double beta) { return r_ext + beta * r_int; }

}  // namespace spie::intrinsic
