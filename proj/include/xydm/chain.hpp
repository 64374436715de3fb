#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "xydm/quadrature.hpp"
#include "xydm/xstate.hpp"

namespace xydm {

/// Periodic ring of N spins (N even, N ≥ 4).
struct FiniteRing {
  int sites = 0;
};

/// N → ∞: Brillouin-zone sums become integrals over φ ∈ [0, π].
struct ThermodynamicLimit {};

using Lattice = std::variant<ThermodynamicLimit, FiniteRing>;

/// Anisotropic XY ring with a z-axis DM term in a unit transverse field:
///
///   H = Σ_j { J[(1+γ) S^x_j S^x_{j+1} + (1−γ) S^y_j S^y_{j+1}
///              + D (S^x_j S^y_{j+1} − S^y_j S^x_{j+1})] − S^z_j }
///
/// Units: k_B = 1 and the field coefficient is 1. temperature == 0 selects the
/// ground state; temperature == +inf is the β = 0 (infinite temperature) state.
struct ChainParams {
  double J = 0.0;
  double gamma = 0.0;
  double D = 0.0;
  double temperature = 0.0;
  Lattice lattice = ThermodynamicLimit{};

  double beta() const;
  bool is_ground_state() const { return temperature == 0.0; }
  bool is_finite() const { return std::holds_alternative<FiniteRing>(lattice); }
  /// 0 in the thermodynamic limit.
  int sites() const;

  ChainParams with_lattice(Lattice l) const {
    ChainParams c = *this;
    c.lattice = l;
    return c;
  }
  static ChainParams from_beta(double J, double gamma, double D, double beta,
                               Lattice lattice = ThermodynamicLimit{});
};

inline constexpr double kInfiniteTemperature = std::numeric_limits<double>::infinity();

/// Largest |R| accepted by g_function (and therefore the largest separation).
inline constexpr int kMaxSeparation = 64;

void validate(const ChainParams& p);

/// γ outside [0, 1] is accepted but worth a warning.
bool anisotropy_out_of_range(const ChainParams& p);

std::string describe(const ChainParams& p);

struct CorrelationSet {
  double sz = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  int r = 1;
};

/// Δ(φ) = √([J(cos φ − 2D sin φ) − 1]² + J²γ² sin²φ)
double dispersion(const ChainParams& p, double phi);

/// Per-mode integrand pieces at angle φ, with thermal factor t = tanh(βΔ/2)/Δ
/// (t = 1/Δ at T = 0):
///   bracket_term = [J(cos φ − 2D sin φ) − 1]·t
///   pairing_term = Jγ sin φ · t
/// Both are bounded by 1 in magnitude at T = 0 and vanish where Δ = 0.
struct ModeTerms {
  double bracket_term;
  double pairing_term;
};

ModeTerms mode_terms(const ChainParams& p, double phi);

/// Zeros of the dispersion bracket in (0, π), sorted. These are where the T = 0
/// integrand changes fastest, so they seed the quadrature partition.
std::vector<double> bracket_zeros(const ChainParams& p);

/// ⟨S^z⟩. Finite rings use the mode sum over φ_p = 2πp/N with endpoint
/// weights ½ at p = 0 and p = N/2; the thermodynamic limit uses adaptive
/// quadrature with (1/2π)∫₀^π in place of (1/N)Σ.
double magnetization(const ChainParams& p, const QuadratureOptions& q = {});

/// G_R for a single R.
double g_function(const ChainParams& p, int R, const QuadratureOptions& q = {});

/// G_R for R ∈ [−half_width, half_width], computed in one pass.
class GTable {
 public:
  GTable(int half_width, std::vector<double> values)
      : half_width_(half_width), values_(std::move(values)) {}
  double operator()(int R) const;
  int half_width() const { return half_width_; }

 private:
  int half_width_;
  std::vector<double> values_;
};

GTable g_table(const ChainParams& p, int half_width, const QuadratureOptions& q = {});

/// (1/4)·det[G_{a−b−1}] over an r×r Toeplitz matrix.
double xx_correlator(const ChainParams& p, int r, const QuadratureOptions& q = {});
/// (1/4)·det[G_{a−b+1}] over an r×r Toeplitz matrix.
double yy_correlator(const ChainParams& p, int r, const QuadratureOptions& q = {});
/// ⟨S^z⟩² − G_r G_{−r}/4
double zz_correlator(const ChainParams& p, int r, const QuadratureOptions& q = {});

/// The correlator formulas applied to an already computed table.
double xx_from_table(const GTable& g, int r);
double yy_from_table(const GTable& g, int r);

/// All one- and two-point correlators for separation r from a single G table.
CorrelationSet correlations(const ChainParams& p, int r, const QuadratureOptions& q = {});

/// Translation-invariant X state built from correlators (w_plus == w_minus).
XState xstate_from_correlations(const CorrelationSet& c);

/// Validated pair density matrix at separation r (invariants checked at 1e-9).
XState pair_density_matrix(const ChainParams& p, int r, const QuadratureOptions& q = {});

}  // namespace xydm
