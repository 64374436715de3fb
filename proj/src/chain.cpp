#include "xydm/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xydm/errors.hpp"

namespace xydm {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this βΔ the ratio tanh(βΔ/2)/Δ is replaced by its series.
constexpr double kSeriesThreshold = 1e-6;

void check_separation(int r) {
  if (r < 1 || r > kMaxSeparation) {
    throw DomainError("separation r must lie in [1, " + std::to_string(kMaxSeparation) + "]");
  }
}

// Mode-sum or quadrature over φ ∈ [0, π] of a vector of integrands built from
// ModeTerms. `fill` maps (φ, terms) to the output vector. Returns the value in
// the normalisation "(1/N) Σ_p" (finite) or "(1/2π) ∫₀^π dφ" (limit).
template <typename Fill>
Eigen::VectorXd brillouin_average(const ChainParams& p, Eigen::Index dim, Fill fill,
                                  const QuadratureOptions& q) {
  validate(p);
  if (p.beta() == 0.0) return Eigen::VectorXd::Zero(dim);

  if (const auto* ring = std::get_if<FiniteRing>(&p.lattice)) {
    const int n = ring->sites;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd term(dim);
    for (int k = 0; k <= n / 2; ++k) {
      const double phi = 2.0 * kPi * k / n;
      fill(phi, mode_terms(p, phi), term);
      const double weight = (k == 0 || k == n / 2) ? 0.5 : 1.0;
      acc += weight * term;
    }
    return acc / static_cast<double>(n);
  }

  std::vector<double> pts{0.0};
  for (double z : bracket_zeros(p)) pts.push_back(z);
  pts.push_back(kPi);
  auto integrand = [&p, &fill](double phi, Eigen::Ref<Eigen::VectorXd> out) {
    fill(phi, mode_terms(p, phi), out);
  };
  // The 1/2π prefactor scales the error too; tighten the raw target to match.
  QuadratureOptions scaled = q;
  scaled.abs_tolerance = q.abs_tolerance * 2.0 * kPi;
  return integrate(integrand, dim, pts, scaled).value / (2.0 * kPi);
}

}  // namespace

double ChainParams::beta() const {
  if (temperature == 0.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(temperature)) return 0.0;
  return 1.0 / temperature;
}

int ChainParams::sites() const {
  if (const auto* ring = std::get_if<FiniteRing>(&lattice)) return ring->sites;
  return 0;
}

ChainParams ChainParams::from_beta(double J, double gamma, double D, double beta,
                                   Lattice lattice) {
  if (!(beta >= 0.0)) throw DomainError("beta must be non-negative");
  ChainParams p{J, gamma, D, 0.0, lattice};
  if (beta == 0.0) {
    p.temperature = kInfiniteTemperature;
  } else if (std::isinf(beta)) {
    p.temperature = 0.0;
  } else {
    p.temperature = 1.0 / beta;
  }
  return p;
}

void validate(const ChainParams& p) {
  if (!std::isfinite(p.J) || !std::isfinite(p.gamma) || !std::isfinite(p.D)) {
    throw ValidationError("chain couplings must be finite");
  }
  if (p.J < 0.0) throw ValidationError("J must be non-negative");
  if (!(p.temperature >= 0.0)) throw ValidationError("temperature must be non-negative");
  if (const auto* ring = std::get_if<FiniteRing>(&p.lattice)) {
    if (ring->sites < 4 || ring->sites % 2 != 0) {
      throw ValidationError("finite ring needs an even number of sites >= 4");
    }
  }
}

bool anisotropy_out_of_range(const ChainParams& p) { return p.gamma < 0.0 || p.gamma > 1.0; }

std::string describe(const ChainParams& p) {
  std::ostringstream os;
  os.precision(12);
  os << "J=" << p.J << " gamma=" << p.gamma << " D=" << p.D << " T=" << p.temperature;
  if (p.is_finite()) {
    os << " N=" << p.sites();
  } else {
    os << " N=inf";
  }
  return os.str();
}

double dispersion(const ChainParams& p, double phi) {
  const double bracket = p.J * (std::cos(phi) - 2.0 * p.D * std::sin(phi)) - 1.0;
  return std::hypot(bracket, p.J * p.gamma * std::sin(phi));
}

ModeTerms mode_terms(const ChainParams& p, double phi) {
  const double s = std::sin(phi);
  const double bracket = p.J * (std::cos(phi) - 2.0 * p.D * s) - 1.0;
  const double pairing = p.J * p.gamma * s;
  const double delta = std::hypot(bracket, pairing);
  const double beta = p.beta();
  if (beta == 0.0) return {0.0, 0.0};
  if (delta == 0.0) return {0.0, 0.0};
  if (std::isinf(beta)) return {bracket / delta, pairing / delta};
  const double x = beta * delta;
  if (x < kSeriesThreshold) {
    // tanh(x/2)/Δ = (β/2)(1 − x²/12 + …)
    const double t = 0.5 * beta * (1.0 - x * x / 12.0);
    return {bracket * t, pairing * t};
  }
  const double th = std::tanh(0.5 * x);
  return {bracket / delta * th, pairing / delta * th};
}

std::vector<double> bracket_zeros(const ChainParams& p) {
  // J(cos φ − 2D sin φ) = J√(1+4D²) cos(φ + α), α = atan2(2D, 1).
  std::vector<double> zeros;
  const double amplitude = p.J * std::sqrt(1.0 + 4.0 * p.D * p.D);
  if (amplitude == 0.0) return zeros;
  const double c = 1.0 / amplitude;
  if (c > 1.0) return zeros;
  const double alpha = std::atan2(2.0 * p.D, 1.0);
  const double base = std::acos(c);
  for (double root : {base - alpha, -base - alpha}) {
    for (int k = -2; k <= 2; ++k) {
      const double phi = root + 2.0 * kPi * k;
      if (phi > 0.0 && phi < kPi) zeros.push_back(phi);
    }
  }
  std::sort(zeros.begin(), zeros.end());
  zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
  return zeros;
}

double magnetization(const ChainParams& p, const QuadratureOptions& q) {
  auto fill = [](double, const ModeTerms& t, Eigen::Ref<Eigen::VectorXd> out) { out[0] = -t.bracket_term; };
  return brillouin_average(p, 1, fill, q)[0];
}

double GTable::operator()(int R) const {
  if (R < -half_width_ || R > half_width_) throw DomainError("G table index out of range");
  return values_[static_cast<std::size_t>(R + half_width_)];
}

GTable g_table(const ChainParams& p, int half_width, const QuadratureOptions& q) {
  if (half_width < 0 || half_width > kMaxSeparation) {
    throw DomainError("|R| exceeds the supported cap of " + std::to_string(kMaxSeparation));
  }
  const int dim = 2 * half_width + 1;
  auto fill = [half_width](double phi, const ModeTerms& t, Eigen::Ref<Eigen::VectorXd> out) {
    for (int R = -half_width; R <= half_width; ++R) {
      out[R + half_width] =
          -2.0 * std::cos(R * phi) * t.bracket_term + 2.0 * std::sin(R * phi) * t.pairing_term;
    }
  };
  const Eigen::VectorXd v = brillouin_average(p, dim, fill, q);
  return GTable(half_width, std::vector<double>(v.data(), v.data() + v.size()));
}

double g_function(const ChainParams& p, int R, const QuadratureOptions& q) {
  if (R < -kMaxSeparation || R > kMaxSeparation) {
    throw DomainError("|R| exceeds the supported cap of " + std::to_string(kMaxSeparation));
  }
  auto fill = [R](double phi, const ModeTerms& t, Eigen::Ref<Eigen::VectorXd> out) {
    out[0] = -2.0 * std::cos(R * phi) * t.bracket_term + 2.0 * std::sin(R * phi) * t.pairing_term;
  };
  return brillouin_average(p, 1, fill, q)[0];
}

namespace {

double toeplitz_quarter_det(const GTable& g, int r, int shift) {
  Eigen::MatrixXd m(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) m(a, b) = g(a - b + shift);
  }
  return 0.25 * m.partialPivLu().determinant();
}

}  // namespace

double xx_from_table(const GTable& g, int r) {
  check_separation(r);
  return toeplitz_quarter_det(g, r, -1);
}

double yy_from_table(const GTable& g, int r) {
  check_separation(r);
  return toeplitz_quarter_det(g, r, +1);
}

double xx_correlator(const ChainParams& p, int r, const QuadratureOptions& q) {
  check_separation(r);
  return xx_from_table(g_table(p, r, q), r);
}

double yy_correlator(const ChainParams& p, int r, const QuadratureOptions& q) {
  check_separation(r);
  return yy_from_table(g_table(p, r, q), r);
}

double zz_correlator(const ChainParams& p, int r, const QuadratureOptions& q) {
  check_separation(r);
  const GTable g = g_table(p, r, q);
  const double sz = 0.5 * g(0);
  return sz * sz - 0.25 * g(r) * g(-r);
}

CorrelationSet correlations(const ChainParams& p, int r, const QuadratureOptions& q) {
  check_separation(r);
  const GTable g = g_table(p, r, q);
  CorrelationSet c;
  c.r = r;
  c.sz = 0.5 * g(0);
  c.xx = xx_from_table(g, r);
  c.yy = yy_from_table(g, r);
  c.zz = c.sz * c.sz - 0.25 * g(r) * g(-r);
  return c;
}

XState xstate_from_correlations(const CorrelationSet& c) {
  XState s;
  s.u_plus = 0.25 + c.sz + c.zz;
  s.u_minus = 0.25 - c.sz + c.zz;
  s.w_plus = 0.25 - c.zz;
  s.w_minus = 0.25 - c.zz;
  s.x = c.xx + c.yy;
  s.y = c.xx - c.yy;
  s.sz_i = c.sz;
  s.sz_j = c.sz;
  return s;
}

XState pair_density_matrix(const ChainParams& p, int r, const QuadratureOptions& q) {
  const XState s = xstate_from_correlations(correlations(p, r, q));
  validate(s, 1e-9);
  return s;
}

}  // namespace xydm
