#include "xydm/xstate.hpp"

#include <cmath>
#include <sstream>

#include "xydm/errors.hpp"

namespace xydm {

XState XState::maximally_mixed() { return from_elements(0.25, 0.25, 0.25, 0.25, 0.0, 0.0); }

XState XState::bell_phi_plus() { return from_elements(0.5, 0.5, 0.0, 0.0, 0.0, 0.5); }

XState XState::bell_psi_plus() { return from_elements(0.0, 0.0, 0.5, 0.5, 0.5, 0.0); }

XState XState::classical_mixture() { return from_elements(0.5, 0.5, 0.0, 0.0, 0.0, 0.0); }

XState XState::werner(double p) {
  const double q = (1.0 - p) / 4.0;
  return from_elements(p / 2.0 + q, p / 2.0 + q, q, q, 0.0, p / 2.0);
}

XState XState::from_elements(double u_plus, double u_minus, double w_plus, double w_minus,
                             double x, double y) {
  XState s{u_plus, u_minus, w_plus, w_minus, x, y, 0.0, 0.0};
  s.sz_i = (u_plus + w_plus) - 0.5;
  s.sz_j = (u_plus + w_minus) - 0.5;
  return s;
}

namespace {

const char* first_violation(const XState& s, double tol) {
  const double diag[] = {s.u_plus, s.u_minus, s.w_plus, s.w_minus};
  for (double d : diag) {
    if (!std::isfinite(d)) return "non-finite diagonal element";
  }
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.sz_i) ||
      !std::isfinite(s.sz_j)) {
    return "non-finite element";
  }
  if (std::abs(s.u_plus + s.u_minus + s.w_plus + s.w_minus - 1.0) > tol) return "trace is not 1";
  for (double d : diag) {
    if (d < -tol) return "negative diagonal element";
  }
  if (s.u_plus * s.u_minus < s.y * s.y - tol) return "outer block is not positive";
  if (s.w_plus * s.w_minus < s.x * s.x - tol) return "inner block is not positive";
  if (std::abs(s.sz_i - (s.u_plus + s.w_plus - 0.5)) > tol) return "sz_i inconsistent with diagonal";
  if (std::abs(s.sz_j - (s.u_plus + s.w_minus - 0.5)) > tol) return "sz_j inconsistent with diagonal";
  return nullptr;
}

}  // namespace

void validate(const XState& s, double tol) {
  if (const char* why = first_violation(s, tol)) {
    std::ostringstream os;
    os.precision(17);
    os << "invalid XState (" << why << "): u+=" << s.u_plus << " u-=" << s.u_minus
       << " w+=" << s.w_plus << " w-=" << s.w_minus << " x=" << s.x << " y=" << s.y
       << " sz_i=" << s.sz_i << " sz_j=" << s.sz_j;
    throw ValidationError(os.str());
  }
}

bool is_valid(const XState& s, double tol) { return first_violation(s, tol) == nullptr; }

std::array<double, 4> eigenvalues(const XState& s) {
  validate(s);
  const double w_mean = 0.5 * (s.w_plus + s.w_minus);
  const double r_in = std::hypot(0.5 * (s.w_plus - s.w_minus), s.x);
  const double u_mean = 0.5 * (s.u_plus + s.u_minus);
  const double r_out = std::hypot(0.5 * (s.u_plus - s.u_minus), s.y);
  std::array<double, 4> ev{w_mean - r_in, w_mean + r_in, u_mean - r_out, u_mean + r_out};
  for (double& v : ev) {
    if (v < 0.0) {
      if (v < -kStateTolerance) {
        throw ValidationError("XState has a negative eigenvalue beyond tolerance");
      }
      v = 0.0;
    }
  }
  return ev;
}

double entropy(std::span<const double> spectrum) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : spectrum) {
    if (!(p >= -kStateTolerance) || p > 1.0 + 1e-10) {
      throw DomainError("probability outside [0, 1] in entropy");
    }
    sum += p;
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (std::abs(sum - 1.0) > 1e-10) throw DomainError("spectrum does not sum to 1");
  return h;
}

double binary_entropy(double p) {
  if (!(p >= -kStateTolerance && p <= 1.0 + kStateTolerance)) {
    throw DomainError("binary entropy argument outside [0, 1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

ReducedEntropies reduced_entropies(const XState& s) {
  const auto check = [](double sz) {
    if (!(std::abs(sz) <= 0.5 + kStateTolerance)) {
      throw DomainError("magnetization outside [-1/2, 1/2]");
    }
  };
  check(s.sz_i);
  check(s.sz_j);
  return {binary_entropy(0.5 + s.sz_i), binary_entropy(0.5 + s.sz_j)};
}

Eigen::Matrix4d to_matrix(const XState& s) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = s.u_plus;
  m(1, 1) = s.w_plus;
  m(2, 2) = s.w_minus;
  m(3, 3) = s.u_minus;
  m(1, 2) = m(2, 1) = s.x;
  m(0, 3) = m(3, 0) = s.y;
  return m;
}

double purity(const XState& s) {
  return s.u_plus * s.u_plus + s.u_minus * s.u_minus + s.w_plus * s.w_plus +
         s.w_minus * s.w_minus + 2.0 * s.x * s.x + 2.0 * s.y * s.y;
}

}  // namespace xydm
