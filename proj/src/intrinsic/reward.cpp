#include "spie/intrinsic/reward.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace spie::intrinsic {

using repr::OccupancyKind;
using repr::OccupancyMatrix;

namespace {

const std::map<IntrinsicKind, std::string>& names() {
  static const std::map<IntrinsicKind, std::string> table = {
      {IntrinsicKind::kNone, "none"},   {IntrinsicKind::kSR, "sr"},
      {IntrinsicKind::kFR, "fr"},       {IntrinsicKind::kSRR, "srr"},
      {IntrinsicKind::kSRR_A, "srr_a"}, {IntrinsicKind::kSRR_B, "srr_b"},
      {IntrinsicKind::kSR_PR, "sr_pr"}, {IntrinsicKind::kSF, "sf"},
      {IntrinsicKind::kSF_PF, "sf_pf"},
  };
  return table;
}

void expect(const OccupancyMatrix& m, OccupancyKind kind, const char* fn) {
  if (m.kind() != kind) {
    throw std::invalid_argument(std::string(fn) + " expects a " + repr::to_string(kind) + " matrix");
  }
}

}  // namespace

std::string to_string(IntrinsicKind kind) { return names().at(kind); }

IntrinsicKind parse_intrinsic_kind(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return c == '-' ? '_' : static_cast<char>(std::tolower(c)); });
  for (const auto& [kind, n] : names()) {
    if (n == lower) return kind;
  }
  throw std::invalid_argument("unknown intrinsic reward kind '" + name + "'");
}

bool is_tabular(IntrinsicKind kind) { return kind != IntrinsicKind::kSF && kind != IntrinsicKind::kSF_PF; }

bool needs_sr(IntrinsicKind kind) {
  switch (kind) {
    case IntrinsicKind::kSR:
    case IntrinsicKind::kSRR:
    case IntrinsicKind::kSRR_A:
    case IntrinsicKind::kSRR_B:
    case IntrinsicKind::kSR_PR: return true;
    default: return false;
  }
}

bool needs_fr(IntrinsicKind kind) { return kind == IntrinsicKind::kFR; }
bool needs_pr(IntrinsicKind kind) { return kind == IntrinsicKind::kSR_PR; }

void IntrinsicRewardSpec::validate() const {
  if (!(beta >= 0.0)) throw std::invalid_argument("intrinsic scale beta must be non-negative");
}

double r_srr_a(const OccupancyMatrix& m, const envs::Transition& t) {
  expect(m, OccupancyKind::kSR, "r_srr_a");
  return m(t.s, t.s_next);
}

double r_srr_b(const OccupancyMatrix& m, const envs::Transition& t) {
  expect(m, OccupancyKind::kSR, "r_srr_b");
  return -m.col_l1(t.s_next);
}

double r_srr(const OccupancyMatrix& m, const envs::Transition& t) {
  return r_srr_a(m, t) + r_srr_b(m, t);
}

double r_sr(const OccupancyMatrix& m, const envs::Transition& t) {
  expect(m, OccupancyKind::kSR, "r_sr");
  return 1.0 / std::max(m.row_l1(t.s), kNormEpsilon);
}

double r_fr(const OccupancyMatrix& f, const envs::Transition& t) {
  expect(f, OccupancyKind::kFR, "r_fr");
  return f.row_l1(t.s);
}

double r_sr_pr(const OccupancyMatrix& m, const OccupancyMatrix& n, const envs::Transition& t) {
  expect(m, OccupancyKind::kSR, "r_sr_pr");
  expect(n, OccupancyKind::kPR, "r_sr_pr");
  if (m.size() != n.size()) throw std::invalid_argument("r_sr_pr: SR and PR sizes differ");
  return m(t.s, t.s_next) - n.col_l1(t.s_next);
}

}  // namespace spie::intrinsic
