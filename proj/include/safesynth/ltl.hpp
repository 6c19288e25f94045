#ifndef SAFESYNTH_LTL_HPP_
#define SAFESYNTH_LTL_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace safesynth {

enum class Op : uint8_t {
    True,
    False,
    Atom,
    NegAtom,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Finally,
    Globally,
};

// Immutable LTL syntax tree node. Nodes are shared freely; identity is
// structural, not by pointer.
struct Formula {
    Op op;
    std::string name;  // atom name, only for Atom/NegAtom
    std::shared_ptr<const Formula> lhs;
    std::shared_ptr<const Formula> rhs;
    size_t hash = 0;
};

using FormulaRef = std::shared_ptr<const Formula>;

FormulaRef mk_true();
FormulaRef mk_false();
FormulaRef mk_atom(const std::string& name);
FormulaRef mk_neg_atom(const std::string& name);
FormulaRef mk_not(FormulaRef f);
FormulaRef mk_and(FormulaRef l, FormulaRef r);
FormulaRef mk_or(FormulaRef l, FormulaRef r);
FormulaRef mk_implies(FormulaRef l, FormulaRef r);
FormulaRef mk_next(FormulaRef f);
FormulaRef mk_until(FormulaRef l, FormulaRef r);
FormulaRef mk_release(FormulaRef l, FormulaRef r);
FormulaRef mk_finally(FormulaRef f);
FormulaRef mk_globally(FormulaRef f);

bool is_unary(Op op);
bool is_binary(Op op);

bool structurally_equal(const FormulaRef& a, const FormulaRef& b);
// Total order used for canonical child sorting.
bool structurally_less(const FormulaRef& a, const FormulaRef& b);

struct FormulaHash {
    size_t operator()(const FormulaRef& f) const { return f->hash; }
};
struct FormulaEq {
    bool operator()(const FormulaRef& a, const FormulaRef& b) const {
        return structurally_equal(a, b);
    }
};

// Atom names occurring anywhere in the formula.
std::set<std::string> atoms_of(const FormulaRef& f);

// Renders in the input grammar; parenthesizes binary operands of binary
// and unary operators, never atoms or unary chains.
std::string to_string(const FormulaRef& f);

// Parses the textual grammar (see README). Precedence, strongest first:
// ! X G F, then U R (right-associative), then &, |, ->.
// Throws ParseError with position info.
FormulaRef parse_ltl(const std::string& text);

// F true / G bottom etc. rewritten into their Until/Release forms.
FormulaRef expand_abbreviations(const FormulaRef& f);

bool is_nnf(const FormulaRef& f);

// Negation normal form: Implies eliminated, negation pushed onto atoms.
// Equivalent over infinite traces.
FormulaRef to_nnf(const FormulaRef& f);

enum class FragmentClass { Safety, CoSafety, Both, Neither };

// Syntactic fragment test on an NNF formula; F counts as Until, G as
// Release. Throws std::invalid_argument if the input is not NNF.
FragmentClass classify(const FormulaRef& f);

inline bool in_safety_fragment(FragmentClass c) {
    return c == FragmentClass::Safety || c == FragmentClass::Both;
}
inline bool in_cosafety_fragment(FragmentClass c) {
    return c == FragmentClass::CoSafety || c == FragmentClass::Both;
}

// Dual of an NNF formula, in NNF: swaps And/Or, Until/Release,
// Finally/Globally, true/false, p/!p. Involutive.
FormulaRef negate_nnf(const FormulaRef& f);

// A letter is the set of atoms true at an instant.
using Letter = std::set<std::string>;
// Finite nonempty trace.
using Trace = std::vector<Letter>;

// stem . loop^omega; loop must be nonempty.
struct LassoTrace {
    std::vector<Letter> stem;
    std::vector<Letter> loop;
};

// Infinite-trace satisfaction at position 0 of stem.loop^omega. Accepts
// arbitrary formulas (Not/Implies included).
bool eval_lasso(const FormulaRef& f, const LassoTrace& t);

// Good-prefix test for a co-safety NNF formula, computed as the
// first-order reading over positions 0..last: Next fails at the last
// position, Until binds its witness within the trace. Throws
// std::invalid_argument unless classify(psi) is CoSafety or Both.
bool eval_finite_good_prefix(const FormulaRef& psi, const Trace& rho);

// Bounded-unfolding transform: each Until (and Finally) is unfolded
// l-1 times and the remainder replaced by its right operand; Release
// and Globally are kept. Requires NNF and l >= 1.
FormulaRef expand_until(const FormulaRef& f, unsigned l);

// Input/output split of the game alphabet. Order is declaration order
// and fixes the variable order everywhere downstream.
struct Partition {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    size_t size() const { return inputs.size() + outputs.size(); }
    // inputs first, then outputs
    std::vector<std::string> atoms() const;
    bool contains(const std::string& name) const;
};

// Parses the two-line ".inputs ..." / ".outputs ..." format (either
// order). Checks disjointness. Throws ParseError.
Partition parse_partition(const std::string& text);

// Every atom of f must be declared in part. Throws std::invalid_argument.
void check_partition_covers(const Partition& part, const FormulaRef& f);

}  // namespace safesynth

#endif  // SAFESYNTH_LTL_HPP_
