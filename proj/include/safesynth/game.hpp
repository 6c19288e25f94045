#ifndef SAFESYNTH_GAME_HPP_
#define SAFESYNTH_GAME_HPP_

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "safesynth/bdd.hpp"
#include "safesynth/dfa.hpp"

namespace safesynth {

enum class FirstMover { Environment, Controller };

struct WinningRegion {
    dd::NodeRef region;  // over the state bits; fixpoint unless stopped early
    size_t iterations = 0;
    bool realizable = false;
    FirstMover first_mover = FirstMover::Environment;
    // w_0, w_1, ... when recording was requested
    std::vector<dd::NodeRef> iterates;
};

// States from which the controller can force the next state into w:
// environment first is forall X exists Y, controller first swaps the
// two. w must only mention state bits.
dd::NodeRef preimage(dd::NodeRef w, const SymbolicDFA& sdfa, FirstMover first_mover);

struct WinningRegionOptions {
    bool early_termination = true;
    bool record_iterates = false;
    std::ostream* verbose = nullptr;
};

// Greatest fixpoint of w := w & pre(w) from the non-accepting states,
// with canonical-node equality as the convergence test. Realizable iff
// the initial assignment stays in the region; with early termination
// the loop stops as soon as it drops out (including before the first
// iteration, when the initial state is itself accepting).
WinningRegion winning_region(const SymbolicDFA& sdfa, FirstMover first_mover,
                             const WinningRegionOptions& opts = {});

}  // namespace safesynth

#endif  // SAFESYNTH_GAME_HPP_
