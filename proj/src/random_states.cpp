#include "xydm/random_states.hpp"

#include <cmath>

namespace xydm {

XState random_xstate(DeterministicRng& rng, bool translation_invariant) {
  // Exponential draws normalised to the simplex give a flat Dirichlet.
  auto draw = [&rng] { return -std::log(1.0 - rng.uniform()); };
  double up = draw();
  double um = draw();
  double wp = draw();
  double wm = translation_invariant ? wp : draw();
  const double total = up + um + wp + wm;
  up /= total;
  um /= total;
  wp /= total;
  wm = translation_invariant ? wp : 1.0 - up - um - wp;
  // Stay slightly inside the PSD boundary so validation at 1e-12 never trips.
  const double x = rng.uniform(-1.0, 1.0) * std::sqrt(wp * wm) * (1.0 - 1e-9);
  const double y = rng.uniform(-1.0, 1.0) * std::sqrt(up * um) * (1.0 - 1e-9);
  return XState::from_elements(up, um, wp, wm, x, y);
}

ChainParams random_chain_params(DeterministicRng& rng) {
  ChainParams p;
  p.J = rng.uniform(0.0, 2.0);
  p.gamma = rng.uniform(0.0, 1.0);
  p.D = rng.uniform(0.0, 1.0);
  p.temperature = rng.uniform() < 0.5 ? 0.0 : 0.5;
  return p;
}

}  // namespace xydm
