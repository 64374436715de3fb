#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xydm/chain.hpp"
#include "xydm/errors.hpp"
#include "xydm/random_states.hpp"

using namespace xydm;

namespace {

ChainParams chain(double J, double gamma, double D, double T = 0.0) {
  ChainParams p;
  p.J = J;
  p.gamma = gamma;
  p.D = D;
  p.temperature = T;
  return p;
}

void check_set(const CorrelationSet& c, double sz, double xx, double yy, double zz, double tol) {
  CHECK(std::abs(c.sz - sz) < tol);
  CHECK(std::abs(c.xx - xx) < tol);
  CHECK(std::abs(c.yy - yy) < tol);
  CHECK(std::abs(c.zz - zz) < tol);
}

}  // namespace

TEST_CASE("critical transverse Ising chain reproduces its closed forms") {
  // J=1, γ=1: ⟨S^z⟩ = 1/π, ⟨S^xS^x⟩ = −1/(2π), ⟨S^yS^y⟩ = 1/(6π), ⟨S^zS^z⟩ = 4/(3π²).
  constexpr double pi = std::numbers::pi;
  check_set(correlations(chain(1, 1, 0), 1), 1 / pi, -1 / (2 * pi), 1 / (6 * pi), 4 / (3 * pi * pi), 1e-10);
}

TEST_CASE("thermodynamic-limit correlators match an independent quadrature") {
  // Reference values from adaptive quadrature of the same mode integrals in a separate implementation.
  check_set(correlations(chain(0.8, 0.5, 0.5), 1), 0.4900945888772619, -0.03398714211050789,
            0.0302857357388786, 0.24431000846468662, 1e-9);
  check_set(correlations(chain(0.5, 1, 0), 1), 0.46710772883384716, -0.06466447615283544,
            0.05629646275469604, 0.232751155429475, 1e-9);
  check_set(correlations(chain(1.5, 0.8, 0), 1), 0.18803612516052773, -0.21512102969886043,
            0.003790410754396096, 0.03861917262325494, 1e-9);
  check_set(correlations(chain(1, 1, 0, 0.5), 1), 0.27948545933504371, -0.13974272966752183,
            0.023592790596323375, 0.091299805813338242, 1e-9);
  check_set(correlations(chain(0.8, 0.5, 0.5, 0.5), 1), 0.40892232299422571, -0.057821896363121614,
            -0.0019440415409945763, 0.16676783356895789, 1e-9);
  check_set(correlations(chain(1.5, 0.8, 0.2), 2), 0.2710135833964869, 0.17487836902108217,
            0.0022800506028488121, 0.072242082148838024, 1e-9);
  check_set(correlations(chain(0.6, 0.3, 0.1), 3), 0.4956337824664227, -0.0034035513412380039,
            0.0019764339318649954, 0.24567988179294387, 1e-9);
  check_set(correlations(chain(1.2, 0.7, 0.3, 0.25), 2), 0.37315177619230311, 0.092412971854490003,
            0.0033125099425120458, 0.13869745543907108, 1e-9);
}

TEST_CASE("field-only chain is fully polarized") {
  for (int r = 1; r <= 3; ++r) check_set(correlations(chain(0, 0.4, 0.3), r), 0.5, 0.0, 0.0, 0.25, 1e-14);
}

TEST_CASE("infinite temperature kills every correlator") {
  const ChainParams p = ChainParams::from_beta(1.2, 0.6, 0.4, 0.0);
  CHECK(std::isinf(p.temperature));
  for (int r = 1; r <= 3; ++r) check_set(correlations(p, r), 0.0, 0.0, 0.0, 0.0, 1e-15);
}

TEST_CASE("magnetization is half of G_0") {
  const ChainParams p = chain(0.9, 0.4, 0.3, 0.2);
  CHECK(magnetization(p) == doctest::Approx(0.5 * g_function(p, 0)).epsilon(1e-12));
  const GTable g = g_table(p, 3);
  for (int R = -3; R <= 3; ++R) CHECK(g(R) == doctest::Approx(g_function(p, R)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("large rings converge to the thermodynamic limit") {
  for (const ChainParams& p : {chain(0.7, 0.6, 0.3), chain(1.4, 0.2, 0.8, 0.5)}) {
    const GTable tl = g_table(p, 3);
    const GTable ring = g_table(p.with_lattice(FiniteRing{4096}), 3);
    for (int R = -3; R <= 3; ++R) CHECK(std::abs(tl(R) - ring(R)) < 1e-6);
  }
}

TEST_CASE("ground-state mode terms are bounded by one") {
  DeterministicRng rng(5);
  for (int k = 0; k < 200; ++k) {
    ChainParams p = random_chain_params(rng);
    p.temperature = 0.0;
    const double phi = rng.uniform(0.0, std::numbers::pi);
    const ModeTerms t = mode_terms(p, phi);
    CHECK(std::hypot(t.bracket_term, t.pairing_term) <= 1.0 + 1e-12);
    CHECK(dispersion(p, phi) >= 0.0);
  }
}

TEST_CASE("bracket zeros are roots of the dispersion bracket") {
  const ChainParams p = chain(1.3, 0.5, 0.4);
  const auto zeros = bracket_zeros(p);
  REQUIRE_FALSE(zeros.empty());
  for (double z : zeros) {
    CHECK(z > 0.0);
    CHECK(z < std::numbers::pi);
    CHECK(std::abs(p.J * (std::cos(z) - 2 * p.D * std::sin(z)) - 1.0) < 1e-12);
  }
  CHECK(bracket_zeros(chain(0.5, 0.5, 0.0)).empty());
}

TEST_CASE("pair density matrix is a translation-invariant X state") {
  const XState s = pair_density_matrix(chain(0.9, 0.7, 0.2), 2);
  CHECK(s.w_plus == s.w_minus);
  CHECK(s.sz_i == doctest::Approx(s.sz_j));
  CHECK(is_valid(s));
}

TEST_CASE("invalid parameters are rejected before any work") {
  CHECK_THROWS_AS(correlations(chain(-1, 0.5, 0), 1), ValidationError);
  CHECK_THROWS_AS(correlations(chain(1, 0.5, 0, -0.1), 1), ValidationError);
  CHECK_THROWS_AS(correlations(chain(1, 0.5, 0).with_lattice(FiniteRing{7}), 1), ValidationError);
  CHECK_THROWS_AS(correlations(chain(1, 0.5, 0), 0), DomainError);
  CHECK_THROWS_AS(correlations(chain(1, 0.5, 0), kMaxSeparation + 1), DomainError);
  CHECK(anisotropy_out_of_range(chain(1, 1.5, 0)));
  CHECK_FALSE(anisotropy_out_of_range(chain(1, 0.5, 0)));
}
