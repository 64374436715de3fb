#include "xydm/ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "xydm/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace xydm::ed {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// ⟨b̄|S^x|b⟩ and ⟨b̄|S^y|b⟩ for a single spin flip, bit 0 = up.
constexpr double kSx = 0.5;
cd sy_flip(unsigned bit) { return bit == 0 ? cd{0.0, 0.5} : cd{0.0, -0.5}; }

struct BondFactors {
  cd x;
  cd y;
};

BondFactors site_factors(unsigned bit, double rotation) {
  const cd y = sy_flip(bit);
  if (rotation == 0.0) return {kSx, y};
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  return {c * kSx - s * y, s * kSx + c * y};
}

// Matrix element ⟨t|h_{jk}|s⟩ where t flips both bits j and k of s.
cd bond_amplitude(const ChainParams& p, unsigned bj, unsigned bk, double rotation_k) {
  const BondFactors fj = site_factors(bj, 0.0);
  const BondFactors fk = site_factors(bk, rotation_k);
  return p.J * ((1.0 + p.gamma) * fj.x * fk.x + (1.0 - p.gamma) * fj.y * fk.y +
                p.D * (fj.x * fk.y - fj.y * fk.x));
}

double diagonal_energy(std::uint32_t s, int n) {
  // −Σ S^z with S^z = +½ for bit 0.
  const int down = std::popcount(s);
  return -(0.5 * (n - down) - 0.5 * down);
}

template <class Visit>
void for_each_bond(const ChainParams& p, int n, double twist, std::uint32_t s, Visit&& visit) {
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    const unsigned bj = (s >> j) & 1u;
    const unsigned bk = (s >> k) & 1u;
    const double rot = (k == 0) ? twist : 0.0;
    const cd amp = bond_amplitude(p, bj, bk, rot);
    if (amp != cd{0.0, 0.0}) visit(s ^ (1u << j) ^ (1u << k), amp);
  }
}

SparseHamiltonian site_operator(const Eigen::Matrix2cd& o, int site, int n) {
  SparseHamiltonian left(1 << (n - 1 - site), 1 << (n - 1 - site));
  left.setIdentity();
  SparseHamiltonian right(1 << site, 1 << site);
  right.setIdentity();
  SparseHamiltonian mid = o.sparseView();
  SparseHamiltonian tmp = Eigen::kroneckerProduct(left, mid);
  return Eigen::kroneckerProduct(tmp, right);
}

// Lowest `count` eigenpairs (count ≤ n) or all of them when count == n.
void hermitian_eigen(const Eigen::MatrixXcd& m, bool real, int count, Eigen::VectorXd& values,
                     Eigen::MatrixXcd& vectors) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  values.resize(n);
  lapack_int found = 0;
  lapack_int info = 0;
  const bool partial = count < n;
  if (real) {
    Eigen::MatrixXd a = m.real();
    Eigen::MatrixXd z(n, partial ? count : n);
    if (partial) {
      std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
      info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, count,
                            LAPACKE_dlamch('S'), &found, values.data(), z.data(), n,
                            support.data());
    } else {
      info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, values.data());
      z = a;
      found = n;
    }
    vectors = z.leftCols(found).cast<cd>();
  } else {
    Eigen::MatrixXcd a = m;
    Eigen::MatrixXcd z(n, partial ? count : n);
    if (partial) {
      std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
      info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, count,
                            LAPACKE_dlamch('S'), &found, values.data(), z.data(), n,
                            support.data());
    } else {
      info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, values.data());
      z = a;
      found = n;
    }
    vectors = z.leftCols(found);
  }
  if (info != 0) {
    throw NumericalError("LAPACK eigensolver failed with info=" + std::to_string(info),
                         static_cast<double>(info));
  }
  values.conservativeResize(found);
}

std::vector<double> sector_eigenvalues(const ParitySector& s, bool real) {
  const lapack_int n = static_cast<lapack_int>(s.matrix.rows());
  Eigen::VectorXd w(n);
  lapack_int info = 0;
  if (real) {
    Eigen::MatrixXd a = s.matrix.real();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  } else {
    Eigen::MatrixXcd a = s.matrix;
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  }
  if (info != 0) {
    throw NumericalError("LAPACK eigensolver failed with info=" + std::to_string(info),
                         static_cast<double>(info));
  }
  return {w.data(), w.data() + n};
}

constexpr int kLowestLevels = 8;

}  // namespace

int checked_sites(const ChainParams& p) {
  validate(p);
  if (!p.is_finite()) throw DomainError("exact diagonalization needs a FiniteRing lattice");
  const int n = p.sites();
  if (n % 2 != 0 || n < kMinSites || n > kMaxSites) {
    throw DomainError("exact diagonalization needs an even ring size in [4, 14], got " +
                      std::to_string(n));
  }
  return n;
}

SparseHamiltonian build_hamiltonian(const ChainParams& p, const BuildOptions& opt) {
  const int n = checked_sites(p);
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, -0.5 * kI, 0.5 * kI, 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;

  const int dim = 1 << n;
  SparseHamiltonian h(dim, dim);
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    Eigen::Matrix2cd kx = sx;
    Eigen::Matrix2cd ky = sy;
    if (k == 0 && opt.boundary_twist != 0.0) {
      const double c = std::cos(opt.boundary_twist);
      const double s = std::sin(opt.boundary_twist);
      kx = c * sx - s * sy;
      ky = s * sx + c * sy;
    }
    const SparseHamiltonian xj = site_operator(sx, j, n);
    const SparseHamiltonian yj = site_operator(sy, j, n);
    const SparseHamiltonian xk = site_operator(kx, k, n);
    const SparseHamiltonian yk = site_operator(ky, k, n);
    h += p.J * ((1.0 + p.gamma) * SparseHamiltonian(xj * xk) +
                (1.0 - p.gamma) * SparseHamiltonian(yj * yk) +
                p.D * (SparseHamiltonian(xj * yk) - SparseHamiltonian(yj * xk)));
    h -= site_operator(sz, j, n);
  }
  h.prune(cd{0.0, 0.0});
  return h;
}

void apply_hamiltonian(const ChainParams& p, const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
                       const BuildOptions& opt) {
  const int n = checked_sites(p);
  const std::uint32_t dim = 1u << n;
  if (in.size() != static_cast<Eigen::Index>(dim)) throw DomainError("vector size is not 2^N");
  out.setZero(dim);
  for (std::uint32_t s = 0; s < dim; ++s) {
    const cd a = in[s];
    if (a == cd{0.0, 0.0}) continue;
    out[s] += diagonal_energy(s, n) * a;
    for_each_bond(p, n, opt.boundary_twist, s, [&](std::uint32_t t, cd amp) { out[t] += amp * a; });
  }
}

SparseHamiltonian build_hamiltonian_bitwise(const ChainParams& p, const BuildOptions& opt) {
  const int n = checked_sites(p);
  const std::uint32_t dim = 1u << n;
  std::vector<Eigen::Triplet<cd>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * (n + 1));
  for (std::uint32_t s = 0; s < dim; ++s) {
    entries.emplace_back(s, s, diagonal_energy(s, n));
    for_each_bond(p, n, opt.boundary_twist, s,
                  [&](std::uint32_t t, cd amp) { entries.emplace_back(t, s, amp); });
  }
  SparseHamiltonian h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  h.prune(cd{0.0, 0.0});
  return h;
}

SpinHamiltonian build_sectors(const ChainParams& p, const BuildOptions& opt) {
  const int n = checked_sites(p);
  const std::uint32_t dim = 1u << n;
  SpinHamiltonian h;
  h.sites = n;
  h.real = p.D == 0.0 && opt.boundary_twist == 0.0;

  std::vector<int> index(dim);
  for (int parity = 0; parity < 2; ++parity) {
    auto& sec = h.sectors[parity];
    sec.parity = parity;
    for (std::uint32_t s = 0; s < dim; ++s) {
      if (std::popcount(s) % 2 == parity) {
        index[s] = static_cast<int>(sec.basis.size());
        sec.basis.push_back(s);
      }
    }
  }
  for (auto& sec : h.sectors) {
    const Eigen::Index m = static_cast<Eigen::Index>(sec.basis.size());
    sec.matrix = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index col = 0; col < m; ++col) {
      const std::uint32_t s = sec.basis[col];
      sec.matrix(col, col) += diagonal_energy(s, n);
      for_each_bond(p, n, opt.boundary_twist, s,
                    [&](std::uint32_t t, cd amp) { sec.matrix(index[t], col) += amp; });
    }
  }
  return h;
}

std::vector<double> spectrum(const SpinHamiltonian& h) {
  std::vector<double> all;
  for (const auto& sec : h.sectors) {
    const auto part = sector_eigenvalues(sec, h.real);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

double DenseState::total_weight() const {
  if (maximally_mixed) return 1.0;
  double w = 0.0;
  for (const auto& part : parts) w += part.weights.sum();
  return w;
}

double DenseState::mean_energy() const {
  double e = 0.0;
  for (const auto& part : parts) e += part.weights.dot(part.energies);
  return e;
}

namespace {

DenseState diagonalize(const SpinHamiltonian& h, double temperature, bool force_full) {
  DenseState state;
  state.sites = h.sites;
  if (std::isinf(temperature)) {
    state.maximally_mixed = true;
    return state;
  }
  if (temperature < 0.0 || std::isnan(temperature)) {
    throw DomainError("temperature must be ≥ 0");
  }

  const bool ground = temperature == 0.0;
  for (const auto& sec : h.sectors) {
    const int m = static_cast<int>(sec.basis.size());
    SectorState part;
    part.parity = sec.parity;
    part.basis = sec.basis;
    const int count = ground && !force_full ? std::min(kLowestLevels, m) : m;
    hermitian_eigen(sec.matrix, h.real, count, part.energies,
                    part.vectors);
    state.parts.push_back(std::move(part));
  }

  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& part : state.parts) e0 = std::min(e0, part.energies.minCoeff());
  state.ground_energy = e0;

  if (ground) {
    const double tol = 1e-9 * std::max(1.0, std::abs(e0));
    bool truncated = false;
    int degeneracy = 0;
    for (auto& part : state.parts) {
      const Eigen::Index m = part.energies.size();
      part.weights = Eigen::VectorXd::Zero(m);
      Eigen::Index in_ground = 0;
      for (Eigen::Index k = 0; k < m; ++k) {
        if (part.energies[k] - e0 <= tol) {
          part.weights[k] = 1.0;
          ++in_ground;
        }
      }
      degeneracy += static_cast<int>(in_ground);
      if (in_ground == m && m < static_cast<Eigen::Index>(part.basis.size())) truncated = true;
    }
    if (truncated) {
      // The ground space may extend past the computed levels; redo with the full spectrum.
      return diagonalize(h, temperature, true);
    }
    state.ground_degeneracy = degeneracy;
    for (auto& part : state.parts) part.weights /= static_cast<double>(degeneracy);
  } else {
    const double beta = 1.0 / temperature;
    double z = 0.0;
    for (auto& part : state.parts) {
      part.weights = (-beta * (part.energies.array() - e0)).exp().matrix();
      z += part.weights.sum();
    }
    for (auto& part : state.parts) part.weights /= z;
    int degeneracy = 0;
    const double tol = 1e-9 * std::max(1.0, std::abs(e0));
    for (const auto& part : state.parts) {
      degeneracy += static_cast<int>((part.energies.array() - e0 <= tol).count());
    }
    state.ground_degeneracy = degeneracy;
  }

  // Drop states with negligible weight; they cannot move any pair element past 1e-16.
  for (auto& part : state.parts) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < part.weights.size(); ++k) {
      if (part.weights[k] > 1e-18) keep.push_back(k);
    }
    Eigen::MatrixXcd v(part.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd e(static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd w(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const auto col = static_cast<Eigen::Index>(c);
      v.col(col) = part.vectors.col(keep[c]);
      e[col] = part.energies[keep[c]];
      w[col] = part.weights[keep[c]];
    }
    part.vectors = std::move(v);
    part.energies = std::move(e);
    part.weights = std::move(w);
  }
  return state;
}

}  // namespace

DenseState thermal_or_ground_state(const SpinHamiltonian& h, double temperature) {
  return diagonalize(h, temperature, false);
}

DenseState solve(const ChainParams& p, const BuildOptions& opt) {
  return thermal_or_ground_state(build_sectors(p, opt), p.temperature);
}

PairDensity reduced_pair(const DenseState& state, int i, int j) {
  const int n = state.sites;
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw DomainError("reduced_pair needs two distinct sites on the ring");
  }
  PairDensity out;
  out.rho = Eigen::Matrix4cd::Zero();
  if (state.maximally_mixed) {
    out.rho.diagonal().setConstant(0.25);
  } else {
    const std::uint32_t dim = 1u << n;
    const std::uint32_t bi = 1u << i;
    const std::uint32_t bj = 1u << j;
    Eigen::VectorXcd psi(dim);
    for (const auto& part : state.parts) {
      for (Eigen::Index k = 0; k < part.vectors.cols(); ++k) {
        psi.setZero();
        for (std::size_t a = 0; a < part.basis.size(); ++a) {
          psi[part.basis[a]] = part.vectors(static_cast<Eigen::Index>(a), k);
        }
        const double w = part.weights[k];
        for (std::uint32_t s = 0; s < dim; ++s) {
          if (s & (bi | bj)) continue;
          cd amp[4];
          for (unsigned q = 0; q < 4; ++q) {
            const std::uint32_t t = s | ((q >> 1) ? bi : 0u) | ((q & 1u) ? bj : 0u);
            amp[q] = psi[t];
          }
          for (int r = 0; r < 4; ++r) {
            if (amp[r] == cd{0.0, 0.0}) continue;
            for (int c = 0; c < 4; ++c) out.rho(r, c) += w * amp[r] * std::conj(amp[c]);
          }
        }
      }
    }
    out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  }

  constexpr int off_x[4][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (const auto& e : off_x) out.leakage = std::max(out.leakage, std::abs(out.rho(e[0], e[1])));
  if (out.leakage > 1e-6) {
    std::ostringstream os;
    os << "reduced pair density matrix leaves the X pattern by " << out.leakage;
    throw StructuralError(os.str());
  }
  const cd inner = out.rho(1, 2);
  const cd outer = out.rho(0, 3);
  out.xstate = XState::from_elements(out.rho(0, 0).real(), out.rho(3, 3).real(),
                                     out.rho(1, 1).real(), out.rho(2, 2).real(),
                                     std::copysign(std::abs(inner), inner.real()),
                                     std::copysign(std::abs(outer), outer.real()));
  return out;
}

CorrelationSet correlations_from_pair(const PairDensity& pair, int r) {
  const auto& m = pair.rho;
  CorrelationSet c;
  c.r = r;
  c.sz = 0.5 * (m(0, 0).real() + m(1, 1).real() - m(2, 2).real() - m(3, 3).real());
  c.xx = 0.5 * (m(1, 2).real() + m(0, 3).real());
  c.yy = 0.5 * (m(1, 2).real() - m(0, 3).real());
  c.zz = 0.25 * (m(0, 0).real() - m(1, 1).real() - m(2, 2).real() + m(3, 3).real());
  return c;
}

Observables Observables::from(const CorrelationSet& c, const MeasureReport& m) {
  return Observables{{c.sz, c.xx, c.yy, c.zz, m.mutual_information, m.quantum_discord,
                      m.classical_correlation, m.concurrence}};
}

ChainParams gauge_partner(const ChainParams& p) {
  ChainParams q = p;
  q.J = p.J * std::sqrt(1.0 + p.D * p.D);
  q.D = 0.0;
  return q;
}

namespace {

double spectra_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double dev = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dev = std::max(dev, std::abs(a[k] - b[k]));
  return dev;
}

MeasureReport nearest_neighbour_measures(const DenseState& s) {
  return discord_closed_form(reduced_pair(s, 0, 1).xstate);
}

}  // namespace

GaugeReport verify_gauge_equivalence(const ChainParams& pA, const ChainParams& pB, int sites) {
  ChainParams a = pA.with_lattice(FiniteRing{sites});
  ChainParams b = pB.with_lattice(FiniteRing{sites});
  a.temperature = 0.0;
  b.temperature = 0.0;

  GaugeReport rep;
  const SpinHamiltonian ha = build_sectors(a);
  const SpinHamiltonian hb = build_sectors(b);
  const auto sa = spectrum(ha);
  rep.spectra_deviation = spectra_deviation(sa, spectrum(hb));

  const MeasureReport ma = nearest_neighbour_measures(thermal_or_ground_state(ha, 0.0));
  const MeasureReport mb = nearest_neighbour_measures(thermal_or_ground_state(hb, 0.0));
  rep.measures_deviation = std::max({std::abs(ma.quantum_discord - mb.quantum_discord),
                                     std::abs(ma.classical_correlation - mb.classical_correlation),
                                     std::abs(ma.concurrence - mb.concurrence)});

  rep.twisted_spectra_deviation = std::numeric_limits<double>::infinity();
  const double twist = sites * std::atan(pA.D);
  for (double sign : {1.0, -1.0}) {
    const auto st = spectrum(build_sectors(b, BuildOptions{sign * twist}));
    rep.twisted_spectra_deviation = std::min(rep.twisted_spectra_deviation, spectra_deviation(sa, st));
  }

  rep.spectra_match = rep.spectra_deviation <= kGaugeSpectraTolerance;
  rep.measures_match = rep.measures_deviation <= kGaugeMeasuresTolerance;
  rep.max_deviation = std::max(rep.spectra_deviation, rep.measures_deviation);
  return rep;
}

double ComparisonReport::max_delta_at_largest() const {
  if (sizes.empty()) return 0.0;
  double m = 0.0;
  for (double d : sizes.back().delta.values) m = std::max(m, d);
  return m;
}

bool ComparisonReport::all_shrinking() const {
  return std::all_of(shrinking.begin(), shrinking.end(), [](bool b) { return b; });
}

ComparisonReport compare_with_analytic(const ChainParams& p, int r, const std::vector<int>& sizes) {
  ComparisonReport rep;
  rep.params = p;
  rep.r = r;
  const ChainParams tl = p.with_lattice(ThermodynamicLimit{});
  const CorrelationSet tl_corr = correlations(tl, r);
  rep.thermodynamic = Observables::from(tl_corr, discord_closed_form(xstate_from_correlations(tl_corr)));

  std::vector<int> ordered = sizes;
  std::sort(ordered.begin(), ordered.end());
  for (int n : ordered) {
    SizeComparison row;
    row.sites = n;
    const ChainParams fp = p.with_lattice(FiniteRing{n});
    const PairDensity pair = reduced_pair(solve(fp), 0, r % n);
    row.exact = Observables::from(correlations_from_pair(pair, r), discord_closed_form(pair.xstate));
    try {
      const CorrelationSet fc = correlations(fp, r);
      row.finite_formula = Observables::from(fc, discord_closed_form(xstate_from_correlations(fc)));
    } catch (const std::exception&) {
      row.finite_formula.values.fill(std::numeric_limits<double>::quiet_NaN());
    }
    for (std::size_t q = 0; q < row.delta.values.size(); ++q) {
      row.delta.values[q] = std::abs(row.exact.values[q] - rep.thermodynamic.values[q]);
    }
    rep.sizes.push_back(row);
  }
  for (std::size_t q = 0; q < rep.shrinking.size(); ++q) {
    bool ok = true;
    for (std::size_t k = 1; k < rep.sizes.size(); ++k) {
      const double prev = rep.sizes[k - 1].delta.values[q];
      const double cur = rep.sizes[k].delta.values[q];
      if (!(cur < prev || (cur <= 1e-10 && prev <= 1e-10))) ok = false;
    }
    rep.shrinking[q] = ok;
  }
  return rep;
}

}  // namespace xydm::ed
