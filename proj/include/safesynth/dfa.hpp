#ifndef SAFESYNTH_DFA_HPP_
#define SAFESYNTH_DFA_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "safesynth/bdd.hpp"
#include "safesynth/limits.hpp"
#include "safesynth/ltl.hpp"

namespace safesynth {

// Shared by the explicit automata below: one diagram manager per
// synthesis run, with state bits first (indices 0..atom_var_base-1),
// then inputs, then outputs in partition order.
std::shared_ptr<dd::Manager> make_game_manager(const Partition& part, size_t state_cap);

// Letters over the partition atoms are bitmasks: bit i is atom i in
// partition order (inputs first, then outputs).
std::vector<int8_t> letter_assignment(const dd::Manager& mgr, uint32_t atom_var_base,
                                      size_t num_atoms, uint32_t letter);

// Total deterministic automaton over 2^P letters; per-state edges carry
// disjoint diagram guards over the atom variables that together cover
// the whole letter space.
struct ExplicitDFA {
    std::shared_ptr<dd::Manager> mgr;
    Partition part;
    uint32_t atom_var_base = 0;

    struct Edge {
        dd::NodeRef guard;
        uint32_t dst;
    };
    std::vector<std::vector<Edge>> edges;
    std::vector<bool> accepting;
    uint32_t initial = 0;

    size_t num_states() const { return edges.size(); }
    uint32_t step(uint32_t state, uint32_t letter) const;
    bool accepts_word(const std::vector<uint32_t>& word) const;
};

// Dual of a bad-prefix DFA: accepting states removed, transitions into
// them undefined. An automaton with no initial state is empty and every
// play is losing.
struct SafetyAutomaton {
    std::shared_ptr<dd::Manager> mgr;
    Partition part;
    uint32_t atom_var_base = 0;

    struct Edge {
        dd::NodeRef guard;
        uint32_t dst;
    };
    std::vector<std::vector<Edge>> edges;
    std::optional<uint32_t> initial;

    size_t num_states() const { return edges.size(); }
    bool empty() const { return !initial.has_value(); }
    std::optional<uint32_t> step(uint32_t state, uint32_t letter) const;
};

// Bit-encoded DFA (X, Y, Z, Z0, eta, f). State encodings beyond the
// explicit state count are accepting under f, so the game treats them
// as bad.
struct SymbolicDFA {
    std::shared_ptr<dd::Manager> mgr;
    Partition part;
    std::vector<uint32_t> zvars, xvars, yvars;
    std::vector<dd::NodeRef> eta;  // one function per state bit
    dd::NodeRef accept;            // f over the state bits
    std::vector<bool> z0;          // all-false: initial state has index 0
    uint32_t num_explicit_states = 0;

    std::vector<int8_t> game_assignment(const std::vector<bool>& z, uint32_t input,
                                        uint32_t output) const;
};

// One-letter progression: remainder obligation after reading the
// letter, plus whether the word read so far is already a good prefix.
// When accepted_now holds the remainder is true.
struct ProgressStep {
    FormulaRef remainder;
    bool accepted_now;
};

ProgressStep progress_letter(const FormulaRef& psi, const Letter& a);

// Progression as a plain formula transform. Requires a co-safety NNF
// formula. Note: when the result is true the letter alone need not be a
// good prefix yet (a pending Next true obligation also collapses to
// true); progress_letter keeps the two apart and the DFA construction
// uses that.
FormulaRef progress(const FormulaRef& psi, const Letter& a);

// Canonical syntactic simplification: constant absorption, flattening,
// deduplication and sorting of And/Or children. Used to merge
// progression states.
FormulaRef canonical_simplify(const FormulaRef& f);

// Builds the DFA accepting exactly the fol-good prefixes of !phi, i.e.
// the bad prefixes of phi, by breadth-first progression from
// negate_nnf(phi). Letters are explored by splitting only on atoms read
// at the current position, so edges come out as cubes. Throws
// FragmentError if phi is not Safety, ResourceError past the state cap.
ExplicitDFA build_bad_prefix_dfa(const FormulaRef& phi, const Partition& part,
                                 const RunLimits& limits = {});

// Moore partition refinement on the guard signatures. Language is
// preserved, the result is minimal among reachable total DFAs, and the
// initial state ends up at index 0.
ExplicitDFA minimize_dfa(const ExplicitDFA& d, const RunLimits& limits = {});

SafetyAutomaton dualize_to_dsa(const ExplicitDFA& d);

// Binary state encoding with initial index 0 mapping to the all-false
// assignment. Requires d.initial == 0.
SymbolicDFA encode_symbolic(const ExplicitDFA& d, const Partition& part);

// Debug/CLI text form: states N / initial 0 / accepting ... / one line
// per edge cube.
std::string dfa_to_text(const ExplicitDFA& d);

}  // namespace safesynth

#endif  // SAFESYNTH_DFA_HPP_
