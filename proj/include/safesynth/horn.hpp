#ifndef SAFESYNTH_HORN_HPP_
#define SAFESYNTH_HORN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safesynth/dfa.hpp"
#include "safesynth/limits.hpp"
#include "safesynth/transducer.hpp"

namespace safesynth {

// Definite-or-goal clause in the flipped-polarity encoding: body
// implies head, where a missing head stands for falsum.
struct HornClause {
    std::vector<uint32_t> body;
    std::optional<uint32_t> head;
};

// Flipped-polarity Horn encoding of the safety game on a DSA. A
// variable set true by propagation marks a losing position. Variables
// come in three classes laid out contiguously: per-state, per
// (state, input), per (state, input, output).
struct HornInstance {
    uint32_t num_states = 0;
    uint32_t num_input_bits = 0;
    uint32_t num_output_bits = 0;
    uint32_t initial_state = 0;
    std::vector<HornClause> clauses;
    size_t clause_count = 0;
    size_t literal_count = 0;

    uint32_t inputs_per_state() const { return 1u << num_input_bits; }
    uint32_t outputs_per_input() const { return 1u << num_output_bits; }

    uint32_t var_state(uint32_t s) const { return s; }
    uint32_t var_state_input(uint32_t s, uint32_t x) const {
        return num_states + s * inputs_per_state() + x;
    }
    uint32_t var_state_input_output(uint32_t s, uint32_t x, uint32_t y) const {
        return num_states + num_states * inputs_per_state() +
               (s * inputs_per_state() + x) * outputs_per_input() + y;
    }
    size_t num_vars() const {
        return num_states + size_t{num_states} * inputs_per_state() +
               size_t{num_states} * inputs_per_state() * outputs_per_input();
    }

    bool is_state_var(uint32_t v) const { return v < num_states; }
    bool is_state_input_var(uint32_t v) const {
        return v >= num_states && v < num_states + size_t{num_states} * inputs_per_state();
    }
};

// Propagation closure; true entries are the forced (losing) variables.
struct LeastModel {
    std::vector<bool> value;
    size_t propagation_steps = 0;

    bool contains(uint32_t v) const { return value[v]; }
};

struct HornSolution {
    bool satisfiable = false;
    LeastModel model;
};

// Builds the clause system from a nonempty DSA: per (state, input) the
// chain rule into the state variable, the all-outputs conjunction rule,
// and per (state, input, output) either the successor rule or a unit
// for an undefined transition; plus the goal clause on the initial
// state. Throws on an empty automaton or past the variable cap.
HornInstance build_horn(const SafetyAutomaton& dsa, const Partition& part,
                        const RunLimits& limits = {});

// Unit propagation with per-clause pending-body counters; linear in the
// literal count. Unsatisfiable iff the goal clause fires, i.e. the
// initial state is forced losing.
HornSolution solve_horn(const HornInstance& h);

// Winning strategy from the least model: a state is winning when its
// variable is not forced; for each input the output is the first one in
// enumeration order whose variable is not forced. Requires a
// satisfiable solution.
Transducer horn_strategy(const HornSolution& solution, const SafetyAutomaton& dsa,
                         const Partition& part, const RunLimits& limits = {});

// DIMACS-style dump of the clause system for external checking.
std::string to_dimacs(const HornInstance& h);

}  // namespace safesynth

#endif  // SAFESYNTH_HORN_HPP_
