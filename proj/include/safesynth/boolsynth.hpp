#ifndef SAFESYNTH_BOOLSYNTH_HPP_
#define SAFESYNTH_BOOLSYNTH_HPP_

#include <cstdint>
#include <vector>

#include "safesynth/bdd.hpp"

namespace safesynth {

// One function per output variable, in output order, over the input
// variables only.
using OutputFunctions = std::vector<dd::NodeRef>;

// Sequential extraction from a relation xi over inputs and outputs:
// whenever some output satisfies xi for a given input, the synthesized
// outputs do; with no satisfying output they are all false. Outputs are
// split off last-first by cofactoring, preferring false where both
// cofactors allow, and back-substituted so the results mention inputs
// only. Deterministic.
OutputFunctions synthesize_outputs(dd::Manager& mgr, dd::NodeRef xi,
                                   const std::vector<uint32_t>& input_vars,
                                   const std::vector<uint32_t>& output_vars);

}  // namespace safesynth

#endif  // SAFESYNTH_BOOLSYNTH_HPP_
