#pragma once

#include <cstdint>

#include "loopexp/report.hpp"
#include "loopexp/spaces.hpp"

namespace loopexp {

/// Reproduction blocks used by the CLI `reproduce` subcommand and by the
/// acceptance suite. Every check is exact rational arithmetic.
namespace reproduce {

RunReport two_loop(int truncate = 5);
RunReport theta_count();
RunReport appendix_b(uint64_t seed, int samples_per_genus = 200);
RunReport appendix_a(uint64_t seed);
RunReport crude_bound_block();
RunReport xset_block();

}  // namespace reproduce
}  // namespace loopexp
