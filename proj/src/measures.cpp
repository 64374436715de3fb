#include "xydm/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "xydm/errors.hpp"

namespace xydm {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double xlog2x_term(double part, double whole) {
  // −part·log₂(part/whole), zero when part vanishes.
  if (part <= 0.0 || whole <= 0.0) return 0.0;
  return -part * std::log2(part / whole);
}

// p·S(M/p) for a 2×2 Hermitian (unnormalised) block M with trace p.
double weighted_entropy_2x2(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double p = a + d;
  if (p <= 1e-300) return 0.0;
  const double disc = std::hypot(a - d, 2.0 * std::abs(m(0, 1)));
  const double hi = std::min(p, 0.5 * (p + disc));
  const double lo = std::max(0.0, p - hi);
  return xlog2x_term(hi, p) + xlog2x_term(lo, p);
}

std::array<Eigen::Vector2cd, 2> measurement_basis(double theta, double phi) {
  const cd phase = std::polar(1.0, phi);
  Eigen::Vector2cd k1(std::cos(theta), phase * std::sin(theta));
  Eigen::Vector2cd k2(std::sin(theta), -phase * std::cos(theta));
  return {k1, k2};
}

// Unnormalised conditional state of the unmeasured qubit. Index of ρ is 2a + c
// with a the qubit-i label and c the qubit-j label.
Eigen::Matrix2cd conditional_block(const Eigen::Matrix4cd& rho, const Eigen::Vector2cd& k,
                                   MeasuredSite site) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      cd acc = 0.0;
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          if (site == MeasuredSite::J) {
            acc += std::conj(k[c]) * rho(2 * a + c, 2 * b + d) * k[d];
          } else {
            acc += std::conj(k[c]) * rho(2 * c + a, 2 * d + b) * k[d];
          }
        }
      }
      m(a, b) = acc;
    }
  }
  return m;
}

struct Vertex {
  double theta;
  double phi;
  double value;
};

// Deterministic Nelder-Mead on the (θ, φ) plane; angles are unconstrained
// because the objective is periodic.
Vertex nelder_mead(const Eigen::Matrix4cd& rho, MeasuredSite site, Vertex start, double step) {
  auto f = [&](double t, double p) { return conditional_entropy(rho, t, p, site); };
  std::array<Vertex, 3> s{start, Vertex{start.theta + step, start.phi, 0.0},
                          Vertex{start.theta, start.phi + step, 0.0}};
  s[1].value = f(s[1].theta, s[1].phi);
  s[2].value = f(s[2].theta, s[2].phi);
  auto order = [&s] {
    std::sort(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) {
      if (l.value != r.value) return l.value < r.value;
      if (l.theta != r.theta) return l.theta < r.theta;
      return l.phi < r.phi;
    });
  };
  for (int iter = 0; iter < 400; ++iter) {
    order();
    const double size = std::max(std::hypot(s[1].theta - s[0].theta, s[1].phi - s[0].phi),
                                 std::hypot(s[2].theta - s[0].theta, s[2].phi - s[0].phi));
    if (s[2].value - s[0].value < 1e-15 && size < 1e-9) break;
    const double ct = 0.5 * (s[0].theta + s[1].theta);
    const double cp = 0.5 * (s[0].phi + s[1].phi);
    auto at = [&](double coef) {
      Vertex v{ct + coef * (s[2].theta - ct), cp + coef * (s[2].phi - cp), 0.0};
      v.value = f(v.theta, v.phi);
      return v;
    };
    const Vertex reflected = at(-1.0);
    if (reflected.value < s[0].value) {
      const Vertex expanded = at(-2.0);
      s[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < s[1].value) {
      s[2] = reflected;
    } else {
      const Vertex contracted =
          reflected.value < s[2].value ? at(-0.5) : at(0.5);
      if (contracted.value < std::min(reflected.value, s[2].value)) {
        s[2] = contracted;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].theta = s[0].theta + 0.5 * (s[i].theta - s[0].theta);
          s[i].phi = s[0].phi + 0.5 * (s[i].phi - s[0].phi);
          s[i].value = f(s[i].theta, s[i].phi);
        }
      }
    }
  }
  order();
  return s[0];
}

// Maps (θ, φ) onto θ ∈ [0, π/2), φ ∈ [0, 2π) describing the same measurement.
void canonicalize(double& theta, double& phi) {
  theta = std::fmod(theta, kPi);
  if (theta < 0.0) theta += kPi;
  if (theta >= 0.5 * kPi) theta -= 0.5 * kPi;
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;
}

}  // namespace

std::string_view to_string(DiscordBranch b) {
  switch (b) {
    case DiscordBranch::QD1:
      return "QD1";
    case DiscordBranch::QD2:
      return "QD2";
    case DiscordBranch::BruteForce:
      return "bruteforce";
  }
  return "?";
}

Eigen::Matrix4cd to_complex_matrix(const XState& s) { return to_matrix(s).cast<cd>(); }

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()[i];
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

Eigen::Matrix2cd partial_trace(const Eigen::Matrix4cd& rho, MeasuredSite keep) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        out(a, b) += keep == MeasuredSite::I ? rho(2 * a + c, 2 * b + c) : rho(2 * c + a, 2 * c + b);
      }
    }
  }
  return out;
}

double mutual_information(const XState& s) {
  const auto spectrum = eigenvalues(s);
  const auto reduced = reduced_entropies(s);
  return reduced.site_i + reduced.site_j - entropy(spectrum);
}

double conditional_entropy(const Eigen::Matrix4cd& rho, double theta, double phi,
                           MeasuredSite site) {
  double total = 0.0;
  for (const auto& k : measurement_basis(theta, phi)) {
    total += weighted_entropy_2x2(conditional_block(rho, k, site));
  }
  return total;
}

double conditional_entropy(const XState& s, double theta, double phi, MeasuredSite site) {
  validate(s);
  return conditional_entropy(to_complex_matrix(s), theta, phi, site);
}

BruteForceDiscord discord_bruteforce(const Eigen::Matrix4cd& rho, BruteForceGrid grid,
                                     MeasuredSite site) {
  if (grid.n_theta < 2 || grid.n_phi < 1) throw DomainError("brute-force grid too small");
  const double dtheta = 0.5 * kPi / (grid.n_theta - 1);
  const double dphi = 2.0 * kPi / grid.n_phi;

  std::vector<Vertex> cells;
  cells.reserve(static_cast<std::size_t>(grid.n_theta) * grid.n_phi);
  for (int a = 0; a < grid.n_theta; ++a) {
    for (int b = 0; b < grid.n_phi; ++b) {
      const double t = a * dtheta;
      const double p = b * dphi;
      cells.push_back({t, p, conditional_entropy(rho, t, p, site)});
    }
  }
  constexpr std::size_t kSeeds = 4;
  const std::size_t seeds = std::min(kSeeds, cells.size());
  std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(seeds), cells.end(),
                    [](const Vertex& l, const Vertex& r) {
                      if (l.value != r.value) return l.value < r.value;
                      if (l.theta != r.theta) return l.theta < r.theta;
                      return l.phi < r.phi;
                    });

  Vertex best = cells.front();
  for (std::size_t i = 0; i < seeds; ++i) {
    const Vertex polished = nelder_mead(rho, site, cells[i], 0.5 * std::min(dtheta, dphi));
    if (polished.value < best.value) best = polished;
  }
  canonicalize(best.theta, best.phi);

  const double s_joint = von_neumann_entropy(rho);
  const double s_i = von_neumann_entropy(partial_trace(rho, MeasuredSite::I));
  const double s_j = von_neumann_entropy(partial_trace(rho, MeasuredSite::J));
  const double s_unmeasured = site == MeasuredSite::J ? s_i : s_j;
  const double mi = s_i + s_j - s_joint;

  BruteForceDiscord out;
  out.min_conditional_entropy = best.value;
  out.classical_correlation = s_unmeasured - best.value;
  out.quantum_discord = mi - out.classical_correlation;
  out.theta = best.theta;
  out.phi = best.phi;
  return out;
}

BruteForceDiscord discord_bruteforce(const XState& s, BruteForceGrid grid, MeasuredSite site) {
  validate(s);
  return discord_bruteforce(to_complex_matrix(s), grid, site);
}

double concurrence(const XState& s) {
  validate(s);
  const double outer = std::abs(s.x) - std::sqrt(std::max(0.0, s.u_plus * s.u_minus));
  const double inner = std::abs(s.y) - std::sqrt(std::max(0.0, s.w_plus * s.w_minus));
  return std::clamp(2.0 * std::max({0.0, outer, inner}), 0.0, 1.0);
}

double general_concurrence_oracle(const Eigen::Matrix4cd& rho) {
  constexpr double tol = 1e-9;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw DomainError("concurrence oracle: matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cd(1.0, 0.0)) > tol) {
    throw DomainError("concurrence oracle: trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw DomainError("concurrence oracle: matrix is not positive semidefinite");
  }
  // ζ_k = singular values of D (V† Y V*) D with ρ = V D² V†, Y = σ^y ⊗ σ^y.
  // Their squares are the eigenvalues of ρ ρ̃.
  Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
  y(0, 3) = -1.0;
  y(3, 0) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  const Eigen::Matrix4cd& v = es.eigenvectors();
  Eigen::Vector4d d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::Matrix4cd core = v.adjoint() * y * v.conjugate();
  Eigen::Matrix4cd a = d.asDiagonal() * core * d.asDiagonal();
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);
  const Eigen::Vector4d z = svd.singularValues();  // descending
  return std::max(0.0, z[0] - z[1] - z[2] - z[3]);
}

MeasureReport discord_closed_form(const XState& s) {
  validate(s);
  MeasureReport rep;
  rep.mutual_information = mutual_information(s);
  rep.concurrence = concurrence(s);
  rep.lambda_cap =
      std::hypot(s.u_plus - s.u_minus, 2.0 * (std::abs(s.x) + std::abs(s.y)));

  double qd = 0.0;
  if (std::abs(s.w_plus - s.w_minus) > 1e-9) {
    const BruteForceDiscord bf = discord_bruteforce(s);
    qd = bf.quantum_discord;
    rep.discord_branch = DiscordBranch::BruteForce;
  } else {
    const double omega = s.w_plus;
    const double s_i = reduced_entropies(s).site_i;
    const double s_ij = entropy(eigenvalues(s));
    const double cond_z = xlog2x_term(s.u_plus, s.u_plus + omega) +
                          xlog2x_term(omega, s.u_plus + omega) +
                          xlog2x_term(s.u_minus, s.u_minus + omega) +
                          xlog2x_term(omega, s.u_minus + omega);
    const double lam = std::min(rep.lambda_cap, 1.0);
    const double cond_x = binary_entropy(0.5 * (1.0 + lam));
    const double qd1 = s_i - s_ij + cond_z;
    const double qd2 = s_i - s_ij + cond_x;
    if (qd1 <= qd2) {
      qd = qd1;
      rep.discord_branch = DiscordBranch::QD1;
    } else {
      qd = qd2;
      rep.discord_branch = DiscordBranch::QD2;
    }
  }
  const double mi = std::max(0.0, rep.mutual_information);
  const double clamped = std::clamp(qd, 0.0, mi);
  rep.clamp_correction = std::abs(clamped - qd) + std::abs(mi - rep.mutual_information);
  rep.mutual_information = mi;
  rep.quantum_discord = clamped;
  rep.classical_correlation = mi - clamped;
  return rep;
}

}  // namespace xydm
