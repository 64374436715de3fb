#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "xydm/chain.hpp"
#include "xydm/measures.hpp"
#include "xydm/xstate.hpp"

/// Exact diagonalization of small periodic rings. Basis states are bit strings
/// with site 0 in the least significant bit; bit = 1 means spin down.
namespace xydm::ed {

inline constexpr int kMinSites = 4;
inline constexpr int kMaxSites = 14;

using SparseHamiltonian = Eigen::SparseMatrix<std::complex<double>>;

struct BuildOptions {
  /// Rotates site 0's x/y operators by this angle about z on the closing bond
  /// (N−1, 0) only. Zero gives the plain periodic ring.
  double boundary_twist = 0.0;
};

/// Checks FiniteRing, N even, kMinSites ≤ N ≤ kMaxSites.
int checked_sites(const ChainParams& p);

/// Assembled from Kronecker products of single-site spin operators.
SparseHamiltonian build_hamiltonian(const ChainParams& p, const BuildOptions& opt = {});

/// out = H·in computed directly on bit strings, no matrix stored.
void apply_hamiltonian(const ChainParams& p, const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
                       const BuildOptions& opt = {});

/// Same matrix as build_hamiltonian, filled column by column from apply_hamiltonian's rules.
SparseHamiltonian build_hamiltonian_bitwise(const ChainParams& p, const BuildOptions& opt = {});

/// H commutes with Π σ^z, so it splits into even/odd numbers of down spins.
struct ParitySector {
  int parity = 0;
  std::vector<std::uint32_t> basis;
  Eigen::MatrixXcd matrix;
};

struct SpinHamiltonian {
  int sites = 0;
  /// True when every matrix element is real (D = 0 and no twist).
  bool real = true;
  std::array<ParitySector, 2> sectors;
};

SpinHamiltonian build_sectors(const ChainParams& p, const BuildOptions& opt = {});

/// Full sorted spectrum, both sectors merged.
std::vector<double> spectrum(const SpinHamiltonian& h);

struct SectorState {
  int parity = 0;
  std::vector<std::uint32_t> basis;
  /// Columns are eigenvectors in the sector basis.
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd energies;
  Eigen::VectorXd weights;
};

/// ρ = Σ_k w_k |ψ_k⟩⟨ψ_k| over the stored eigenvectors, or I/2^N when
/// maximally_mixed is set.
struct DenseState {
  int sites = 0;
  bool maximally_mixed = false;
  double ground_energy = 0.0;
  int ground_degeneracy = 1;
  std::vector<SectorState> parts;

  double total_weight() const;
  /// Tr(ρH)
  double mean_energy() const;
};

/// T = 0: uniform mixture over the ground space (levels within
/// 1e-9·max(1, |E₀|)). T > 0: Gibbs state. β = 0: I/2^N.
DenseState thermal_or_ground_state(const SpinHamiltonian& h, double temperature);

/// build_sectors + thermal_or_ground_state at p.temperature.
DenseState solve(const ChainParams& p, const BuildOptions& opt = {});

struct PairDensity {
  /// Index 2·b_i + b_j with b = 1 for spin down.
  Eigen::Matrix4cd rho;
  /// Largest |ρ| outside the X pattern.
  double leakage = 0.0;
  /// Local z-rotation of ρ that makes the anti-diagonal real.
  XState xstate;
};

/// Throws StructuralError if leakage exceeds 1e-6.
PairDensity reduced_pair(const DenseState& state, int i, int j);

CorrelationSet correlations_from_pair(const PairDensity& pair, int r);

/// sz, xx, yy, zz, MI, QD, CC, C in that order.
struct Observables {
  static constexpr std::array<std::string_view, 8> names{"sz", "xx", "yy", "zz",
                                                         "MI", "QD", "CC", "C"};
  std::array<double, 8> values{};

  static Observables from(const CorrelationSet& c, const MeasureReport& m);
};

/// The isotropic partner H(J·√(1+D²), γ, 0) of H(J, γ, D).
ChainParams gauge_partner(const ChainParams& p);

struct GaugeReport {
  bool spectra_match = false;
  bool measures_match = false;
  double spectra_deviation = 0.0;
  double measures_deviation = 0.0;
  double max_deviation = 0.0;
  /// Same spectral comparison with pB given the boundary twist N·atan(D_A)
  /// (best of both signs), which is where the spiral rotation leaves the ring.
  double twisted_spectra_deviation = 0.0;
};

inline constexpr double kGaugeSpectraTolerance = 1e-9;
inline constexpr double kGaugeMeasuresTolerance = 1e-8;

/// pA, pB are taken at temperature zero on FiniteRing(sites).
GaugeReport verify_gauge_equivalence(const ChainParams& pA, const ChainParams& pB, int sites);

struct SizeComparison {
  int sites = 0;
  Observables exact;
  /// Finite-N mode-sum formulas; NaN where they do not give a valid state.
  Observables finite_formula;
  /// |exact − thermodynamic limit|
  Observables delta;
};

struct ComparisonReport {
  ChainParams params;
  int r = 1;
  Observables thermodynamic;
  std::vector<SizeComparison> sizes;
  /// Per observable: delta strictly decreases with N (or stays ≤ 1e-10).
  std::array<bool, 8> shrinking{};

  double max_delta_at_largest() const;
  bool all_shrinking() const;
};

ComparisonReport compare_with_analytic(const ChainParams& p, int r, const std::vector<int>& sizes);

}  // namespace xydm::ed
