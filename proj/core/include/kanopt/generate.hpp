#pragma once

#include <cstdint>
#include <string>

#include "kanopt/workspace.hpp"

namespace kanopt {

// Size caps for generated instances. Hard-capped at 6 models / 6 data
// points; BoundsTooLarge beyond that.
struct GenBounds {
  std::uint32_t max_models = 4;
  std::uint32_t max_data = 4;
  std::uint32_t max_objects = 4;  // categories in cat/loss instances
};

enum class InstanceKind { set, cat, loss };

// Deterministic function of (kind, bounds, seed); the emitted text
// re-parses to a valid workspace.
Workspace generate_instance(InstanceKind kind, const GenBounds& bounds,
                            std::uint64_t seed);
std::string generate_instance_text(InstanceKind kind, const GenBounds& bounds,
                                   std::uint64_t seed);

// Deterministic RNG used by the generators (and the acceptance sweeps):
// SplitMix64, fully pinned by the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::uint32_t below(std::uint32_t n);  // uniform in [0, n)
  bool coin(std::uint32_t permille);     // true with probability permille/1000

 private:
  std::uint64_t state_;
};

}  // namespace kanopt
