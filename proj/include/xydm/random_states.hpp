#pragma once

#include <cstdint>
#include <random>

#include "xydm/chain.hpp"
#include "xydm/xstate.hpp"

namespace xydm {

/// mt19937_64 with uniforms built from the top 53 bits, so draws are identical
/// across standard libraries (std::uniform_real_distribution is not).
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Valid X state with independent diagonal weights; with translation_invariant
/// the inner block has w_plus == w_minus.
XState random_xstate(DeterministicRng& rng, bool translation_invariant = false);

/// J ∈ [0, 2], γ ∈ [0, 1], D ∈ [0, 1], T ∈ {0, 0.5} in the thermodynamic limit.
ChainParams random_chain_params(DeterministicRng& rng);

}  // namespace xydm
