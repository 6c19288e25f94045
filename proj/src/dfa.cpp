#include "safesynth/dfa.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "safesynth/errors.hpp"

namespace safesynth {

namespace {

size_t ceil_log2(size_t n) {
    size_t k = 0;
    while ((size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace

std::shared_ptr<dd::Manager> make_game_manager(const Partition& part, size_t state_cap) {
    if (part.size() > 30)
        throw ResourceError("more than 30 game atoms; explicit letter handling would overflow");
    size_t zbudget = std::max<size_t>(1, ceil_log2(std::max<size_t>(2, state_cap)));
    std::vector<std::string> names;
    for (size_t j = 0; j < zbudget; ++j) names.push_back("z" + std::to_string(j));
    for (const auto& a : part.atoms()) names.push_back(a);
    return std::make_shared<dd::Manager>(std::move(names));
}

std::vector<int8_t> letter_assignment(const dd::Manager& mgr, uint32_t atom_var_base,
                                      size_t num_atoms, uint32_t letter) {
    std::vector<int8_t> vals(mgr.num_vars(), -1);
    for (size_t i = 0; i < num_atoms; ++i)
        vals[atom_var_base + i] = (letter >> i) & 1u;
    return vals;
}

uint32_t ExplicitDFA::step(uint32_t state, uint32_t letter) const {
    auto vals = letter_assignment(*mgr, atom_var_base, part.size(), letter);
    for (const auto& e : edges[state])
        if (mgr->eval(e.guard, vals)) return e.dst;
    throw std::logic_error("ExplicitDFA::step: transition function is not total");
}

bool ExplicitDFA::accepts_word(const std::vector<uint32_t>& word) const {
    uint32_t s = initial;
    for (uint32_t a : word) s = step(s, a);
    return accepting[s];
}

std::optional<uint32_t> SafetyAutomaton::step(uint32_t state, uint32_t letter) const {
    auto vals = letter_assignment(*mgr, atom_var_base, part.size(), letter);
    for (const auto& e : edges[state])
        if (mgr->eval(e.guard, vals)) return e.dst;
    return std::nullopt;
}

std::vector<int8_t> SymbolicDFA::game_assignment(const std::vector<bool>& z, uint32_t input,
                                                 uint32_t output) const {
    std::vector<int8_t> vals(mgr->num_vars(), -1);
    for (size_t j = 0; j < zvars.size(); ++j) vals[zvars[j]] = z[j];
    for (size_t i = 0; i < xvars.size(); ++i) vals[xvars[i]] = (input >> i) & 1u;
    for (size_t i = 0; i < yvars.size(); ++i) vals[yvars[i]] = (output >> i) & 1u;
    return vals;
}

// ---------------------------------------------------------------------------
// canonical simplification

namespace {

bool is_true(const FormulaRef& f) { return f->op == Op::True; }
bool is_false(const FormulaRef& f) { return f->op == Op::False; }

// order-preserving constant folding
FormulaRef sand(const FormulaRef& l, const FormulaRef& r) {
    if (is_false(l) || is_false(r)) return mk_false();
    if (is_true(l)) return r;
    if (is_true(r)) return l;
    return mk_and(l, r);
}

FormulaRef sor(const FormulaRef& l, const FormulaRef& r) {
    if (is_true(l) || is_true(r)) return mk_true();
    if (is_false(l)) return r;
    if (is_false(r)) return l;
    return mk_or(l, r);
}

void flatten(const FormulaRef& f, Op op, std::vector<FormulaRef>& out) {
    if (f->op == op) {
        flatten(f->lhs, op, out);
        flatten(f->rhs, op, out);
    } else {
        out.push_back(f);
    }
}

FormulaRef rebuild_chain(Op op, const std::vector<FormulaRef>& children) {
    FormulaRef acc = children.back();
    for (size_t i = children.size() - 1; i-- > 0;)
        acc = op == Op::And ? mk_and(children[i], acc) : mk_or(children[i], acc);
    return acc;
}

}  // namespace

FormulaRef canonical_simplify(const FormulaRef& f) {
    switch (f->op) {
        case Op::True:
        case Op::False:
        case Op::Atom:
        case Op::NegAtom:
            return f;
        case Op::And:
        case Op::Or: {
            const bool conj = f->op == Op::And;
            std::vector<FormulaRef> raw, children;
            flatten(canonical_simplify(f->lhs), f->op, raw);
            flatten(canonical_simplify(f->rhs), f->op, raw);
            for (const auto& c : raw) {
                if (conj ? is_false(c) : is_true(c)) return conj ? mk_false() : mk_true();
                if (conj ? is_true(c) : is_false(c)) continue;
                children.push_back(c);
            }
            if (children.empty()) return conj ? mk_true() : mk_false();
            std::sort(children.begin(), children.end(), structurally_less);
            children.erase(std::unique(children.begin(), children.end(),
                                       [](const FormulaRef& a, const FormulaRef& b) {
                                           return structurally_equal(a, b);
                                       }),
                           children.end());
            return rebuild_chain(f->op, children);
        }
        case Op::Next:
            // X true is not folded: it still requires a successor position
            return mk_next(canonical_simplify(f->lhs));
        case Op::Until: {
            FormulaRef l = canonical_simplify(f->lhs), r = canonical_simplify(f->rhs);
            if (is_true(r) || is_false(r)) return r;
            if (is_false(l)) return r;
            if (is_true(l)) return mk_finally(r);
            return mk_until(l, r);
        }
        case Op::Finally: {
            FormulaRef c = canonical_simplify(f->lhs);
            if (is_true(c) || is_false(c)) return c;
            return mk_finally(c);
        }
        case Op::Release: {
            FormulaRef l = canonical_simplify(f->lhs), r = canonical_simplify(f->rhs);
            if (is_true(r) || is_false(r)) return r;
            if (is_true(l)) return r;
            if (is_false(l)) return mk_globally(r);
            return mk_release(l, r);
        }
        case Op::Globally: {
            FormulaRef c = canonical_simplify(f->lhs);
            if (is_true(c) || is_false(c)) return c;
            return mk_globally(c);
        }
        case Op::Not:
            return mk_not(canonical_simplify(f->lhs));
        case Op::Implies:
            return mk_implies(canonical_simplify(f->lhs), canonical_simplify(f->rhs));
    }
    throw std::logic_error("canonical_simplify: bad op");
}

// ---------------------------------------------------------------------------
// progression

namespace {

// Rewrites the current position into a boolean combination of literals
// and opaque Next obligations: U and F are unfolded one step.
FormulaRef nowform(const FormulaRef& f) {
    switch (f->op) {
        case Op::True:
        case Op::False:
        case Op::Atom:
        case Op::NegAtom:
        case Op::Next:
            return f;
        case Op::And:
            return sand(nowform(f->lhs), nowform(f->rhs));
        case Op::Or:
            return sor(nowform(f->lhs), nowform(f->rhs));
        case Op::Until:
            return sor(nowform(f->rhs), sand(nowform(f->lhs), mk_next(f)));
        case Op::Finally:
            return sor(nowform(f->lhs), mk_next(f));
        default:
            throw std::invalid_argument("progression requires a co-safety NNF formula, got " +
                                        to_string(f));
    }
}

// First atom read at the current position, if any.
const std::string* current_atom(const FormulaRef& f) {
    switch (f->op) {
        case Op::Atom:
        case Op::NegAtom:
            return &f->name;
        case Op::And:
        case Op::Or: {
            const std::string* a = current_atom(f->lhs);
            return a ? a : current_atom(f->rhs);
        }
        default:
            return nullptr;
    }
}

// Substitutes a current-position atom by a constant; Next subtrees are
// untouched. Returns the same node when nothing changed.
FormulaRef assign_atom(const FormulaRef& f, const std::string& name, bool val) {
    switch (f->op) {
        case Op::Atom:
            if (f->name == name) return val ? mk_true() : mk_false();
            return f;
        case Op::NegAtom:
            if (f->name == name) return val ? mk_false() : mk_true();
            return f;
        case Op::And:
        case Op::Or: {
            FormulaRef l = assign_atom(f->lhs, name, val);
            FormulaRef r = assign_atom(f->rhs, name, val);
            if (l == f->lhs && r == f->rhs) return f;
            return f->op == Op::And ? sand(l, r) : sor(l, r);
        }
        default:
            return f;
    }
}

// Drops the Next wrappers of a fully assigned nowform leaf.
FormulaRef strip_next(const FormulaRef& f) {
    switch (f->op) {
        case Op::True:
        case Op::False:
            return f;
        case Op::Next:
            return f->lhs;
        case Op::And:
            return sand(strip_next(f->lhs), strip_next(f->rhs));
        case Op::Or:
            return sor(strip_next(f->lhs), strip_next(f->rhs));
        default:
            throw std::logic_error("strip_next: unassigned atom in leaf");
    }
}

ProgressStep leaf_to_step(const FormulaRef& leaf) {
    if (is_true(leaf)) return {mk_true(), true};
    return {canonical_simplify(strip_next(leaf)), false};
}

}  // namespace

ProgressStep progress_letter(const FormulaRef& psi, const Letter& a) {
    if (!in_cosafety_fragment(classify(psi)))
        throw std::invalid_argument("progress: not a co-safety formula: " + to_string(psi));
    FormulaRef nf = nowform(psi);
    while (const std::string* name = current_atom(nf))
        nf = assign_atom(nf, *name, a.count(*name) != 0);
    return leaf_to_step(nf);
}

FormulaRef progress(const FormulaRef& psi, const Letter& a) {
    ProgressStep s = progress_letter(psi, a);
    return s.accepted_now ? mk_true() : s.remainder;
}

// ---------------------------------------------------------------------------
// construction

namespace {

struct StateKey {
    FormulaRef f;
    bool accepting;
};

struct StateKeyHash {
    size_t operator()(const StateKey& k) const { return k.f->hash * 2 + (k.accepting ? 1 : 0); }
};
struct StateKeyEq {
    bool operator()(const StateKey& a, const StateKey& b) const {
        return a.accepting == b.accepting && structurally_equal(a.f, b.f);
    }
};

class DfaBuilder {
public:
    DfaBuilder(const Partition& part, const RunLimits& limits)
        : part_(part), atoms_(part.atoms()), limits_(limits),
          mgr_(make_game_manager(part, limits.state_cap)) {
        atom_var_base_ = static_cast<uint32_t>(mgr_->num_vars() - part.size());
    }

    ExplicitDFA run(const FormulaRef& psi0) {
        FormulaRef init = canonical_simplify(psi0);
        intern({init, structurally_equal(init, mk_true())});
        for (size_t s = 0; s < formulas_.size(); ++s) {
            limits_.check_deadline("automaton construction");
            explore(s);
        }
        ExplicitDFA d;
        d.mgr = mgr_;
        d.part = part_;
        d.atom_var_base = atom_var_base_;
        d.edges = std::move(edges_);
        d.accepting = std::move(accepting_);
        d.initial = 0;
        return d;
    }

private:
    uint32_t intern(const StateKey& key) {
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        if (formulas_.size() >= limits_.state_cap)
            throw ResourceError("state cap of " + std::to_string(limits_.state_cap) +
                                " states exceeded during automaton construction");
        uint32_t id = static_cast<uint32_t>(formulas_.size());
        ids_.emplace(key, id);
        formulas_.push_back(key.f);
        accepting_.push_back(key.accepting);
        edges_.emplace_back();
        return id;
    }

    uint32_t var_of(const std::string& name) {
        auto it = std::find(atoms_.begin(), atoms_.end(), name);
        return atom_var_base_ + static_cast<uint32_t>(it - atoms_.begin());
    }

    void explore(size_t s) {
        // Accepting states are absorbing: a good prefix stays good.
        FormulaRef nf = accepting_[s] ? mk_true() : nowform(formulas_[s]);
        std::map<uint32_t, dd::NodeRef> guard_by_dst;
        std::vector<std::pair<uint32_t, bool>> cube;
        split(s, nf, cube, guard_by_dst);
        for (auto& [dst, guard] : guard_by_dst)
            edges_[s].push_back({guard, dst});
    }

    void split(size_t s, const FormulaRef& nf, std::vector<std::pair<uint32_t, bool>>& cube,
               std::map<uint32_t, dd::NodeRef>& guard_by_dst) {
        if (const std::string* name = current_atom(nf)) {
            uint32_t v = var_of(*name);
            for (bool val : {false, true}) {
                cube.emplace_back(v, val);
                split(s, assign_atom(nf, *name, val), cube, guard_by_dst);
                cube.pop_back();
            }
            return;
        }
        ProgressStep step = leaf_to_step(nf);
        uint32_t dst = intern({step.remainder, step.accepted_now});
        dd::NodeRef g = mgr_->mk_cube(cube);
        auto [it, fresh] = guard_by_dst.emplace(dst, g);
        if (!fresh) it->second = mgr_->apply_or(it->second, g);
    }

    Partition part_;
    std::vector<std::string> atoms_;
    RunLimits limits_;
    std::shared_ptr<dd::Manager> mgr_;
    uint32_t atom_var_base_ = 0;
    std::unordered_map<StateKey, uint32_t, StateKeyHash, StateKeyEq> ids_;
    std::vector<FormulaRef> formulas_;
    std::vector<bool> accepting_;
    std::vector<std::vector<ExplicitDFA::Edge>> edges_;
};

}  // namespace

ExplicitDFA build_bad_prefix_dfa(const FormulaRef& phi, const Partition& part,
                                 const RunLimits& limits) {
    FormulaRef phi_nnf = to_nnf(phi);
    if (!in_safety_fragment(classify(phi_nnf))) {
        // name the first offending eventuality
        std::function<FormulaRef(const FormulaRef&)> find = [&](const FormulaRef& g) -> FormulaRef {
            if (!g) return nullptr;
            if (g->op == Op::Until || g->op == Op::Finally) return g;
            FormulaRef l = find(g->lhs);
            return l ? l : find(g->rhs);
        };
        FormulaRef bad = find(phi_nnf);
        throw FragmentError("not a Safety LTL formula: contains " +
                            (bad ? to_string(bad) : to_string(phi_nnf)));
    }
    check_partition_covers(part, phi_nnf);
    return DfaBuilder(part, limits).run(negate_nnf(phi_nnf));
}

// ---------------------------------------------------------------------------
// minimization

ExplicitDFA minimize_dfa(const ExplicitDFA& d, const RunLimits& limits) {
    const size_t n = d.num_states();
    if (n == 0) throw std::invalid_argument("minimize_dfa: no states");

    // reachable restriction first
    std::vector<uint32_t> reach;
    std::vector<int32_t> remap(n, -1);
    std::deque<uint32_t> queue{d.initial};
    remap[d.initial] = 0;
    reach.push_back(d.initial);
    while (!queue.empty()) {
        uint32_t s = queue.front();
        queue.pop_front();
        for (const auto& e : d.edges[s]) {
            if (remap[e.dst] < 0) {
                remap[e.dst] = static_cast<int32_t>(reach.size());
                reach.push_back(e.dst);
                queue.push_back(e.dst);
            }
        }
    }
    const size_t m = reach.size();

    std::vector<uint32_t> block(m);
    for (size_t i = 0; i < m; ++i) block[i] = d.accepting[reach[i]] ? 1 : 0;
    size_t nblocks = 2;

    // signature refinement until stable
    using Sig = std::vector<uint64_t>;
    std::vector<Sig> sigs(m);
    while (true) {
        limits.check_deadline("minimization");
        for (size_t i = 0; i < m; ++i) {
            std::map<uint32_t, dd::NodeRef> guard_by_block;
            for (const auto& e : d.edges[reach[i]]) {
                uint32_t b = block[remap[e.dst]];
                auto [it, fresh] = guard_by_block.emplace(b, e.guard);
                if (!fresh) it->second = d.mgr->apply_or(it->second, e.guard);
            }
            Sig sig{block[i]};
            for (const auto& [b, g] : guard_by_block)
                sig.push_back((static_cast<uint64_t>(b) << 32) | g.idx);
            sigs[i] = std::move(sig);
        }
        std::map<Sig, uint32_t> ids;
        std::vector<uint32_t> next(m);
        for (size_t i = 0; i < m; ++i)
            next[i] = ids.emplace(sigs[i], static_cast<uint32_t>(ids.size())).first->second;
        if (ids.size() == nblocks && next == block) break;
        bool same = ids.size() == nblocks;
        if (same) {
            // identical partition under renaming also counts as stable
            std::map<uint32_t, uint32_t> rename;
            for (size_t i = 0; i < m && same; ++i) {
                auto it = rename.emplace(block[i], next[i]).first;
                if (it->second != next[i]) same = false;
            }
        }
        block = std::move(next);
        if (same) break;
        nblocks = ids.size();
    }

    // renumber blocks: initial first, then by smallest member
    nblocks = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<uint32_t> newid(nblocks, UINT32_MAX);
    uint32_t counter = 0;
    newid[block[0]] = counter++;
    for (size_t i = 0; i < m; ++i)
        if (newid[block[i]] == UINT32_MAX) newid[block[i]] = counter++;

    ExplicitDFA out;
    out.mgr = d.mgr;
    out.part = d.part;
    out.atom_var_base = d.atom_var_base;
    out.initial = 0;
    out.edges.resize(nblocks);
    out.accepting.assign(nblocks, false);
    std::vector<bool> done(nblocks, false);
    for (size_t i = 0; i < m; ++i) {
        uint32_t b = newid[block[i]];
        out.accepting[b] = d.accepting[reach[i]];
        if (done[b]) continue;
        done[b] = true;
        std::map<uint32_t, dd::NodeRef> guard_by_block;
        for (const auto& e : d.edges[reach[i]]) {
            uint32_t tb = newid[block[remap[e.dst]]];
            auto [it, fresh] = guard_by_block.emplace(tb, e.guard);
            if (!fresh) it->second = d.mgr->apply_or(it->second, e.guard);
        }
        for (const auto& [tb, g] : guard_by_block)
            out.edges[b].push_back({g, tb});
    }
    return out;
}

// ---------------------------------------------------------------------------
// dualization and encoding

SafetyAutomaton dualize_to_dsa(const ExplicitDFA& d) {
    SafetyAutomaton a;
    a.mgr = d.mgr;
    a.part = d.part;
    a.atom_var_base = d.atom_var_base;
    if (d.accepting[d.initial]) return a;  // empty: every play is losing

    std::vector<int32_t> remap(d.num_states(), -1);
    uint32_t count = 0;
    for (size_t s = 0; s < d.num_states(); ++s)
        if (!d.accepting[s]) remap[s] = static_cast<int32_t>(count++);
    a.edges.resize(count);
    for (size_t s = 0; s < d.num_states(); ++s) {
        if (d.accepting[s]) continue;
        for (const auto& e : d.edges[s])
            if (!d.accepting[e.dst])
                a.edges[remap[s]].push_back({e.guard, static_cast<uint32_t>(remap[e.dst])});
    }
    a.initial = static_cast<uint32_t>(remap[d.initial]);
    return a;
}

SymbolicDFA encode_symbolic(const ExplicitDFA& d, const Partition& part) {
    if (d.initial != 0)
        throw std::invalid_argument("encode_symbolic: initial state must have index 0");
    const size_t n = d.num_states();
    const size_t k = std::max<size_t>(1, ceil_log2(n));
    if (k + part.size() > d.mgr->num_vars())
        throw std::logic_error("encode_symbolic: state bits exceed the manager's budget");

    SymbolicDFA s;
    s.mgr = d.mgr;
    s.part = part;
    s.num_explicit_states = static_cast<uint32_t>(n);
    for (size_t j = 0; j < k; ++j) s.zvars.push_back(static_cast<uint32_t>(j));
    for (size_t i = 0; i < part.inputs.size(); ++i)
        s.xvars.push_back(d.atom_var_base + static_cast<uint32_t>(i));
    for (size_t i = 0; i < part.outputs.size(); ++i)
        s.yvars.push_back(d.atom_var_base + static_cast<uint32_t>(part.inputs.size() + i));
    s.z0.assign(k, false);

    auto& mgr = *d.mgr;
    auto state_cube = [&](size_t idx) {
        std::vector<std::pair<uint32_t, bool>> lits;
        for (size_t j = 0; j < k; ++j) lits.emplace_back(s.zvars[j], ((idx >> j) & 1) != 0);
        return mgr.mk_cube(lits);
    };
    // Balanced reduction keeps the intermediate disjunctions near the
    // size of the result instead of enumerating partial state sets.
    auto or_tree = [&](std::vector<dd::NodeRef> terms) {
        if (terms.empty()) return mgr.zero();
        while (terms.size() > 1) {
            std::vector<dd::NodeRef> next;
            for (size_t i = 0; i + 1 < terms.size(); i += 2)
                next.push_back(mgr.apply_or(terms[i], terms[i + 1]));
            if (terms.size() % 2) next.push_back(terms.back());
            terms = std::move(next);
        }
        return terms[0];
    };

    std::vector<std::vector<dd::NodeRef>> bit_terms(k);
    std::vector<dd::NodeRef> accept_terms;
    for (size_t st = 0; st < n; ++st) {
        dd::NodeRef cube = state_cube(st);
        if (d.accepting[st]) accept_terms.push_back(cube);
        // letters reaching a dst with bit j set, grouped per state first
        std::vector<dd::NodeRef> bit_guard(k, mgr.zero());
        for (const auto& e : d.edges[st])
            for (size_t j = 0; j < k; ++j)
                if ((e.dst >> j) & 1) bit_guard[j] = mgr.apply_or(bit_guard[j], e.guard);
        for (size_t j = 0; j < k; ++j)
            if (bit_guard[j] != mgr.zero())
                bit_terms[j].push_back(mgr.apply_and(cube, bit_guard[j]));
    }
    s.eta.reserve(k);
    for (size_t j = 0; j < k; ++j) s.eta.push_back(or_tree(std::move(bit_terms[j])));
    s.accept = or_tree(std::move(accept_terms));

    // ghost encodings (index >= n) count as accepting
    if (n < (size_t{1} << k)) {
        dd::NodeRef geq = mgr.one();  // z[j..0] >= n[j..0], built LSB up
        for (size_t j = 0; j < k; ++j) {
            dd::NodeRef zj = mgr.mk_var(s.zvars[j]);
            geq = (n >> j) & 1 ? mgr.apply_and(zj, geq) : mgr.apply_or(zj, geq);
        }
        s.accept = mgr.apply_or(s.accept, geq);
    }
    return s;
}

// ---------------------------------------------------------------------------
// serialization

std::string dfa_to_text(const ExplicitDFA& d) {
    std::ostringstream os;
    os << "states " << d.num_states() << "\n";
    os << "initial " << d.initial << "\n";
    os << "accepting";
    for (size_t s = 0; s < d.num_states(); ++s)
        if (d.accepting[s]) os << " " << s;
    os << "\n";
    for (size_t s = 0; s < d.num_states(); ++s) {
        for (const auto& e : d.edges[s]) {
            for (const auto& cube : d.mgr->cube_cover(e.guard)) {
                os << s << " ";
                if (cube.empty()) {
                    os << "true";
                } else {
                    for (size_t i = 0; i < cube.size(); ++i) {
                        if (i) os << " & ";
                        os << (cube[i].second ? "" : "!") << d.mgr->var_name(cube[i].first);
                    }
                }
                os << " " << e.dst << "\n";
            }
        }
    }
    return os.str();
}

}  // namespace safesynth
