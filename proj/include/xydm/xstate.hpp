#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

namespace xydm {

/// Entropies are measured in bits throughout the library (log base 2).
inline constexpr double kStateTolerance = 1e-12;

/// Two-qubit density matrix with X-shaped support in the basis
/// |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ (first label = site i, second = site j):
///
///     | u_plus   0        0        y       |
///     | 0        w_plus   x        0       |
///     | 0        x        w_minus  0       |
///     | y        0        0        u_minus |
///
/// Off-diagonals are real. The single-site magnetizations are carried
/// alongside so that states without translation invariance round-trip.
struct XState {
  double u_plus = 0.0;
  double u_minus = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  double x = 0.0;
  double y = 0.0;
  double sz_i = 0.0;
  double sz_j = 0.0;

  static XState maximally_mixed();
  /// (|↑↑⟩ + |↓↓⟩)/√2
  static XState bell_phi_plus();
  /// (|↑↓⟩ + |↓↑⟩)/√2
  static XState bell_psi_plus();
  /// ½(|↑↑⟩⟨↑↑| + |↓↓⟩⟨↓↓|)
  static XState classical_mixture();
  /// p·Φ⁺ + (1−p)·I/4
  static XState werner(double p);
  /// Builds a state from the six matrix elements, deriving sz_i and sz_j.
  static XState from_elements(double u_plus, double u_minus, double w_plus, double w_minus,
                              double x, double y);
};

/// Throws ValidationError naming the first violated invariant.
void validate(const XState& s, double tol = kStateTolerance);
bool is_valid(const XState& s, double tol = kStateTolerance);

/// Spectrum ordered as (w̄ − r_in, w̄ + r_in, ū − r_out, ū + r_out), where the first
/// pair comes from the inner {w±, x} block and the second from the outer {u±, y}
/// block. Under translation invariance this is λ₁..λ₄ of the correlator form.
std::array<double, 4> eigenvalues(const XState& s);

/// −Σ p log₂ p with 0·log 0 = 0.
double entropy(std::span<const double> spectrum);

/// h(p) = −p log₂ p − (1−p) log₂(1−p)
double binary_entropy(double p);

struct ReducedEntropies {
  double site_i;
  double site_j;
};

ReducedEntropies reduced_entropies(const XState& s);

Eigen::Matrix4d to_matrix(const XState& s);

double purity(const XState& s);

}  // namespace xydm
