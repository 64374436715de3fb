#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "xydm/xstate.hpp"

namespace xydm {

/// Which measurement family attained the minimum conditional entropy.
/// QD1: σ^z eigenbasis. QD2: transverse basis. BruteForce: the closed form
/// did not apply (w_plus ≠ w_minus) and the numerical minimizer was used.
enum class DiscordBranch { QD1, QD2, BruteForce };

std::string_view to_string(DiscordBranch b);

struct MeasureReport {
  double mutual_information = 0.0;
  double quantum_discord = 0.0;
  double classical_correlation = 0.0;
  double concurrence = 0.0;
  DiscordBranch discord_branch = DiscordBranch::QD1;
  /// √((u₊ − u₋)² + 4(|x| + |y|)²)
  double lambda_cap = 0.0;
  /// How far QD had to be moved to land in [0, I]; non-zero only from round-off.
  double clamp_correction = 0.0;
};

/// S(ρ_i) + S(ρ_j) − S(ρ_ij), in bits.
double mutual_information(const XState& s);

/// Quantum discord as min{QD₁, QD₂} for translation-invariant X states, with
/// CC = I − QD and the concurrence filled in. States with |w₊ − w₋| > 1e-9 are
/// routed to the brute-force minimizer and flagged as DiscordBranch::BruteForce.
MeasureReport discord_closed_form(const XState& s);

enum class MeasuredSite { I, J };

/// Projective measurement on one qubit along
///   |1⟩ = cos θ|↑⟩ + e^{iφ} sin θ|↓⟩,  |2⟩ = sin θ|↑⟩ − e^{iφ} cos θ|↓⟩,
/// returning Σ_κ p_κ S(ρ^κ) of the other qubit's conditional states.
double conditional_entropy(const XState& s, double theta, double phi,
                           MeasuredSite site = MeasuredSite::J);
double conditional_entropy(const Eigen::Matrix4cd& rho, double theta, double phi,
                           MeasuredSite site = MeasuredSite::J);

struct BruteForceGrid {
  int n_theta = 64;
  int n_phi = 64;
};

struct BruteForceDiscord {
  double quantum_discord = 0.0;
  double classical_correlation = 0.0;
  double min_conditional_entropy = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Grid scan over θ ∈ [0, π/2], φ ∈ [0, 2π) followed by a Nelder-Mead polish
/// of the best grid cells. Computes every entropy from the dense matrix, so it
/// shares no closed-form algebra with discord_closed_form.
BruteForceDiscord discord_bruteforce(const XState& s, BruteForceGrid grid = {},
                                     MeasuredSite site = MeasuredSite::J);
BruteForceDiscord discord_bruteforce(const Eigen::Matrix4cd& rho, BruteForceGrid grid = {},
                                     MeasuredSite site = MeasuredSite::J);

/// 2·max{0, |x| − √(u₊u₋), |y| − √(w₊w₋)}
double concurrence(const XState& s);

/// Wootters concurrence of an arbitrary two-qubit density matrix. Throws
/// DomainError unless ρ is Hermitian, unit trace and PSD within 1e-9.
double general_concurrence_oracle(const Eigen::Matrix4cd& rho);

Eigen::Matrix4cd to_complex_matrix(const XState& s);

/// Von Neumann entropy (bits) of a dense Hermitian matrix.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

/// Reduced state of the qubit that is kept, tracing out the other.
Eigen::Matrix2cd partial_trace(const Eigen::Matrix4cd& rho, MeasuredSite keep);

}  // namespace xydm
