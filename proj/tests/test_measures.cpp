#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "xydm/chain.hpp"
#include "xydm/errors.hpp"
#include "xydm/measures.hpp"
#include "xydm/random_states.hpp"

using namespace xydm;

namespace {

// Discord of the Werner state p|Φ⁺⟩⟨Φ⁺| + (1−p)I/4, a standard closed form.
double werner_discord(double p) {
  return (1 - p) / 4 * std::log2(1 - p) - (1 + p) / 2 * std::log2(1 + p) +
         (1 + 3 * p) / 4 * std::log2(1 + 3 * p);
}

}  // namespace

TEST_CASE("Bell state carries one bit of discord, classical correlation and entanglement") {
  const MeasureReport m = discord_closed_form(XState::bell_phi_plus());
  CHECK(m.mutual_information == doctest::Approx(2.0));
  CHECK(m.quantum_discord == doctest::Approx(1.0));
  CHECK(m.classical_correlation == doctest::Approx(1.0));
  CHECK(m.concurrence == doctest::Approx(1.0));
}

TEST_CASE("classical mixture has no discord") {
  const MeasureReport m = discord_closed_form(XState::classical_mixture());
  CHECK(m.mutual_information == doctest::Approx(1.0));
  CHECK(std::abs(m.quantum_discord) < 1e-15);
  CHECK(m.classical_correlation == doctest::Approx(1.0));
  CHECK(m.concurrence == 0.0);
}

TEST_CASE("maximally mixed state is uncorrelated") {
  const MeasureReport m = discord_closed_form(XState::maximally_mixed());
  CHECK(std::abs(m.mutual_information) < 1e-15);
  CHECK(std::abs(m.quantum_discord) < 1e-15);
  CHECK(std::abs(m.classical_correlation) < 1e-15);
  CHECK(m.concurrence == 0.0);
}

TEST_CASE("Werner states follow their known discord curve") {
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const MeasureReport m = discord_closed_form(XState::werner(p));
    CHECK(m.quantum_discord == doctest::Approx(werner_discord(p)).epsilon(1e-12));
    CHECK(m.concurrence == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-12));
  }
}

TEST_CASE("closed form agrees with brute-force minimisation on translation-invariant states") {
  DeterministicRng rng(21);
  for (int k = 0; k < 40; ++k) {
    const XState s = random_xstate(rng, true);
    const double closed = discord_closed_form(s).quantum_discord;
    const double bf = discord_bruteforce(s).quantum_discord;
    CHECK(std::abs(closed - bf) < 1e-8);
  }
}

TEST_CASE("measuring either site gives the same discord when the marginals agree") {
  DeterministicRng rng(22);
  for (int k = 0; k < 10; ++k) {
    const XState s = random_xstate(rng, true);
    const double on_j = discord_bruteforce(s, {}, MeasuredSite::J).quantum_discord;
    const double on_i = discord_bruteforce(s, {}, MeasuredSite::I).quantum_discord;
    CHECK(std::abs(on_i - on_j) < 1e-8);
  }
}

TEST_CASE("closed form equals the better of the z and transverse measurements") {
  for (double J : {0.3, 0.6, 1.4}) {
    ChainParams p;
    p.J = J;
    p.gamma = 0.5;
    const XState s = pair_density_matrix(p, 1);
    const MeasureReport m = discord_closed_form(s);
    const double s_i = reduced_entropies(s).site_i;
    const double s_ij = entropy(eigenvalues(s));
    double best = conditional_entropy(s, 0.0, 0.0);
    for (double phi : {0.0, 0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi}) {
      best = std::min(best, conditional_entropy(s, 0.25 * std::numbers::pi, phi));
    }
    CHECK(s_i - s_ij + best == doctest::Approx(m.quantum_discord).epsilon(1e-12));
  }
}

TEST_CASE("unequal inner diagonal routes to brute force") {
  const XState s = XState::from_elements(0.3, 0.2, 0.35, 0.15, 0.1, 0.05);
  const MeasureReport m = discord_closed_form(s);
  CHECK(m.discord_branch == DiscordBranch::BruteForce);
  CHECK(m.quantum_discord >= 0.0);
}

TEST_CASE("discord is bounded by mutual information and insensitive to coherence signs") {
  DeterministicRng rng(23);
  for (int k = 0; k < 100; ++k) {
    const XState s = random_xstate(rng, true);
    const MeasureReport m = discord_closed_form(s);
    CHECK(m.quantum_discord >= 0.0);
    CHECK(m.quantum_discord <= m.mutual_information);
    CHECK(m.classical_correlation == doctest::Approx(m.mutual_information - m.quantum_discord));
    XState flipped = s;
    flipped.x = -s.x;
    flipped.y = -s.y;
    CHECK(discord_closed_form(flipped).quantum_discord == doctest::Approx(m.quantum_discord).epsilon(1e-13));
  }
}

TEST_CASE("Wootters oracle agrees with the X-state concurrence") {
  DeterministicRng rng(24);
  for (int k = 0; k < 200; ++k) {
    const XState s = random_xstate(rng);
    CHECK(std::abs(concurrence(s) - general_concurrence_oracle(to_complex_matrix(s))) < 1e-9);
  }
  CHECK(std::abs(general_concurrence_oracle(to_complex_matrix(XState::bell_psi_plus())) - 1.0) < 1e-12);
}

TEST_CASE("Wootters oracle handles a state outside the X family") {
  // (|↑↑⟩ + |↑↓⟩ + |↓↑⟩)/√3 has concurrence 2|ad − bc| = 2/3.
  Eigen::Vector4cd psi(1.0, 1.0, 1.0, 0.0);
  psi /= std::sqrt(3.0);
  const Eigen::Matrix4cd rho = psi * psi.adjoint();
  CHECK(general_concurrence_oracle(rho) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("Wootters oracle rejects matrices that are not states") {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Identity() * 0.25;
  rho(0, 1) = 0.1;
  CHECK_THROWS_AS(general_concurrence_oracle(rho), DomainError);
  Eigen::Matrix4cd scaled = Eigen::Matrix4cd::Identity() * 0.3;
  CHECK_THROWS_AS(general_concurrence_oracle(scaled), DomainError);
  Eigen::Matrix4cd negative = Eigen::Matrix4cd::Zero();
  negative.diagonal() << 0.6, 0.6, -0.1, -0.1;
  CHECK_THROWS_AS(general_concurrence_oracle(negative), DomainError);
}
