#include "smcsweep/engine/seeding.hpp"

namespace smcsweep::engine {

static_assert(splitmix64_mix(kSplitMixIncrement) == 0xe220a8397b1dcdafULL, "SplitMix64 reference output for seed 0");

}  // namespace smcsweep::engine
