#ifndef SAFESYNTH_TRANSDUCER_HPP_
#define SAFESYNTH_TRANSDUCER_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "safesynth/boolsynth.hpp"
#include "safesynth/dfa.hpp"
#include "safesynth/game.hpp"
#include "safesynth/limits.hpp"

namespace safesynth {

// Winning-strategy machine over 2^X inputs and 2^Y outputs, stored as
// the reachable part of the winning region: one row per state with a
// dense (output, successor) entry per input assignment. Immutable after
// construction; plays keep their own cursor.
struct Transducer {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    uint32_t initial = 0;

    struct Arc {
        uint32_t next;
        uint32_t out_bits;
    };
    std::vector<std::vector<Arc>> rows;  // rows[state][input_bits]

    size_t num_states() const { return rows.size(); }
    uint32_t num_input_bits() const { return static_cast<uint32_t>(inputs.size()); }
};

// One round: output for the input, then the successor state. Throws on
// a state outside the machine.
std::pair<uint32_t, uint32_t> run_step(const Transducer& t, uint32_t state, uint32_t input);

// Materializes the strategy defined by the winning region and the
// synthesized output functions, restricted to the states reachable from
// the initial assignment. Requires a realizable region; every
// successor must land back in the region.
Transducer build_transducer(const SymbolicDFA& sdfa, const WinningRegion& region,
                            const OutputFunctions& gamma, const RunLimits& limits = {});

struct ValidationOptions {
    int random_plays = 1000;
    int adversarial_plays = 100;
    int horizon = 50;
    uint64_t seed = 0;
};

struct ValidationReport {
    int plays = 0;
    int adversarial_plays = 0;
    int horizon = 0;
    uint64_t seed = 0;
    int violations = 0;
    std::string first_violation;

    bool ok() const { return violations == 0; }
};

// Plays the machine against seeded random inputs and against a
// one-step-lookahead adversary that replays the bad-prefix DFA and
// picks the input minimizing the number of surviving outputs. Any play
// whose prefix the DFA accepts is a violation.
ValidationReport validate_strategy(const Transducer& t, const ExplicitDFA& bad_prefix_dfa,
                                   const ValidationOptions& opts = {});

// Same check starting from the safety formula the machine was built
// for; constructs the bad-prefix automaton internally.
ValidationReport validate_strategy(const Transducer& t, const FormulaRef& phi,
                                   const Partition& part, const ValidationOptions& opts = {});

std::string transducer_to_json(const Transducer& t);
std::string transducer_to_dot(const Transducer& t);

// format is "json" or "dot"; anything else throws.
std::string export_transducer(const Transducer& t, const std::string& format);

Transducer transducer_from_json(const std::string& text);

}  // namespace safesynth

#endif  // SAFESYNTH_TRANSDUCER_HPP_
