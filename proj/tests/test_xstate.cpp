#include <doctest.h>

#include <algorithm>

#include "xydm/errors.hpp"
#include "xydm/random_states.hpp"
#include "xydm/xstate.hpp"

using namespace xydm;

TEST_CASE("maximally mixed state has four equal eigenvalues and two bits of entropy") {
  const XState s = XState::maximally_mixed();
  for (double v : eigenvalues(s)) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(entropy(eigenvalues(s)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(purity(s) == doctest::Approx(0.25));
  CHECK(s.sz_i == 0.0);
  CHECK(s.sz_j == 0.0);
}

TEST_CASE("Bell state is pure with maximally mixed marginals") {
  const XState s = XState::bell_phi_plus();
  const auto ev = eigenvalues(s);
  CHECK(ev[3] == doctest::Approx(1.0));
  CHECK(entropy(ev) == doctest::Approx(0.0).epsilon(1e-15));
  const auto red = reduced_entropies(s);
  CHECK(red.site_i == doctest::Approx(1.0));
  CHECK(red.site_j == doctest::Approx(1.0));
  CHECK(purity(s) == doctest::Approx(1.0));
}

TEST_CASE("site magnetizations follow from the diagonal") {
  const XState s = XState::from_elements(0.4, 0.1, 0.3, 0.2, 0.0, 0.0);
  CHECK(s.sz_i == doctest::Approx(0.2));
  CHECK(s.sz_j == doctest::Approx(0.1));
}

TEST_CASE("validation names the broken invariant") {
  CHECK_THROWS_AS(validate(XState::from_elements(0.5, 0.5, 0.5, 0.5, 0.0, 0.0)), ValidationError);
  CHECK_THROWS_WITH_AS(validate(XState::from_elements(0.25, 0.25, 0.25, 0.25, 0.3, 0.0)),
                       doctest::Contains("inner block"), ValidationError);
  CHECK_THROWS_WITH_AS(validate(XState::from_elements(0.25, 0.25, 0.25, 0.25, 0.0, 0.3)),
                       doctest::Contains("outer block"), ValidationError);
  XState bad = XState::maximally_mixed();
  bad.sz_i = 0.1;
  CHECK_FALSE(is_valid(bad));
  CHECK(is_valid(XState::werner(0.6)));
}

TEST_CASE("binary entropy endpoints and midpoint") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.2) == doctest::Approx(binary_entropy(0.8)));
}

TEST_CASE("closed-form eigenvalues match a dense eigensolver") {
  DeterministicRng rng(11);
  for (int k = 0; k < 200; ++k) {
    const XState s = random_xstate(rng);
    auto ev = eigenvalues(s);
    std::sort(ev.begin(), ev.end());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(to_matrix(s));
    for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(std::max(0.0, es.eigenvalues()[i])).epsilon(1e-12).scale(1.0));
    CHECK(to_matrix(s).trace() == doctest::Approx(1.0));
  }
}

TEST_CASE("entropy rejects distributions that do not sum to one") {
  const double bad[] = {0.5, 0.4};
  CHECK_THROWS(entropy(bad));
}
