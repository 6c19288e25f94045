#include "safesynth/bdd.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace safesynth::dd {

namespace {
constexpr uint32_t kTermVar = 0xffffffffu;
}

Manager::Manager(std::vector<std::string> var_names) : var_names_(std::move(var_names)) {
    nodes_.push_back({kTermVar, 0, 0});  // 0 = false
    nodes_.push_back({kTermVar, 1, 1});  // 1 = true
}

void Manager::check_owner(NodeRef r, const char* what) const {
    if (r.owner != this)
        throw std::invalid_argument(std::string(what) + ": operand belongs to another manager");
    if (r.idx >= nodes_.size())
        throw std::invalid_argument(std::string(what) + ": dangling node reference");
}

uint32_t Manager::mk_node(uint32_t var, uint32_t lo, uint32_t hi) {
    if (lo == hi) return lo;
    Key k{var, lo, hi};
    auto it = unique_.find(k);
    if (it != unique_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(nodes_.size());
    nodes_.push_back({var, lo, hi});
    unique_.emplace(k, id);
    return id;
}

NodeRef Manager::mk_var(uint32_t v) {
    if (v >= num_vars()) throw std::invalid_argument("mk_var: variable index out of range");
    return {mk_node(v, 0, 1), this};
}

uint32_t Manager::ite_rec(uint32_t f, uint32_t g, uint32_t h) {
    if (f == 1) return g;
    if (f == 0) return h;
    if (g == h) return g;
    if (g == 1 && h == 0) return f;
    Key k{f, g, h};
    auto it = ite_cache_.find(k);
    if (it != ite_cache_.end()) return it->second;

    uint32_t v = kTermVar;
    for (uint32_t n : {f, g, h})
        if (!is_terminal(n)) v = std::min(v, nodes_[n].var);

    auto cof = [&](uint32_t n, bool hi) {
        if (is_terminal(n) || nodes_[n].var != v) return n;
        return hi ? nodes_[n].hi : nodes_[n].lo;
    };
    uint32_t t = ite_rec(cof(f, true), cof(g, true), cof(h, true));
    uint32_t e = ite_rec(cof(f, false), cof(g, false), cof(h, false));
    uint32_t res = mk_node(v, e, t);
    ite_cache_.emplace(k, res);
    return res;
}

NodeRef Manager::ite(NodeRef f, NodeRef g, NodeRef h) {
    check_owner(f, "ite");
    check_owner(g, "ite");
    check_owner(h, "ite");
    return {ite_rec(f.idx, g.idx, h.idx), this};
}

NodeRef Manager::apply_not(NodeRef g) {
    check_owner(g, "not");
    return {ite_rec(g.idx, 0, 1), this};
}

NodeRef Manager::apply_and(NodeRef g, NodeRef h) {
    check_owner(g, "and");
    check_owner(h, "and");
    return {ite_rec(g.idx, h.idx, 0), this};
}

NodeRef Manager::apply_or(NodeRef g, NodeRef h) {
    check_owner(g, "or");
    check_owner(h, "or");
    return {ite_rec(g.idx, 1, h.idx), this};
}

NodeRef Manager::apply_xor(NodeRef g, NodeRef h) {
    check_owner(g, "xor");
    check_owner(h, "xor");
    return {ite_rec(g.idx, ite_rec(h.idx, 0, 1), h.idx), this};
}

uint32_t Manager::cofactor_rec(uint32_t g, uint32_t v, bool pol,
                               std::unordered_map<uint32_t, uint32_t>& memo) {
    if (is_terminal(g)) return g;
    if (nodes_[g].var > v) return g;  // v cannot appear below its own level
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    uint32_t res;
    if (nodes_[g].var == v) {
        res = pol ? nodes_[g].hi : nodes_[g].lo;
    } else {
        uint32_t lo = cofactor_rec(nodes_[g].lo, v, pol, memo);
        uint32_t hi = cofactor_rec(nodes_[g].hi, v, pol, memo);
        res = mk_node(nodes_[g].var, lo, hi);
    }
    memo.emplace(g, res);
    return res;
}

NodeRef Manager::cofactor(NodeRef g, uint32_t v, bool polarity) {
    check_owner(g, "cofactor");
    if (v >= num_vars()) throw std::invalid_argument("cofactor: variable index out of range");
    std::unordered_map<uint32_t, uint32_t> memo;
    return {cofactor_rec(g.idx, v, polarity, memo), this};
}

uint32_t Manager::quantify_rec(uint32_t g, const std::vector<uint32_t>& sorted_vars,
                               bool existential, std::unordered_map<uint32_t, uint32_t>& memo) {
    if (is_terminal(g)) return g;
    if (nodes_[g].var > sorted_vars.back()) return g;  // below the last quantified level
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    uint32_t lo = quantify_rec(nodes_[g].lo, sorted_vars, existential, memo);
    uint32_t hi = quantify_rec(nodes_[g].hi, sorted_vars, existential, memo);
    uint32_t res;
    if (std::binary_search(sorted_vars.begin(), sorted_vars.end(), nodes_[g].var)) {
        res = existential ? ite_rec(lo, 1, hi) : ite_rec(lo, hi, 0);
    } else {
        res = mk_node(nodes_[g].var, lo, hi);
    }
    memo.emplace(g, res);
    return res;
}

NodeRef Manager::exists_abstract(NodeRef g, const std::vector<uint32_t>& vars) {
    check_owner(g, "exists_abstract");
    if (vars.empty()) return g;
    std::vector<uint32_t> sorted(vars);
    std::sort(sorted.begin(), sorted.end());
    std::unordered_map<uint32_t, uint32_t> memo;
    return {quantify_rec(g.idx, sorted, true, memo), this};
}

NodeRef Manager::forall_abstract(NodeRef g, const std::vector<uint32_t>& vars) {
    check_owner(g, "forall_abstract");
    if (vars.empty()) return g;
    std::vector<uint32_t> sorted(vars);
    std::sort(sorted.begin(), sorted.end());
    std::unordered_map<uint32_t, uint32_t> memo;
    return {quantify_rec(g.idx, sorted, false, memo), this};
}

uint32_t Manager::compose_rec(uint32_t g, const std::unordered_map<uint32_t, NodeRef>& subst,
                              std::unordered_map<uint32_t, uint32_t>& memo) {
    if (is_terminal(g)) return g;
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    uint32_t lo = compose_rec(nodes_[g].lo, subst, memo);
    uint32_t hi = compose_rec(nodes_[g].hi, subst, memo);
    uint32_t v = nodes_[g].var;
    auto sit = subst.find(v);
    uint32_t vf = sit != subst.end() ? sit->second.idx : mk_node(v, 0, 1);
    uint32_t res = ite_rec(vf, hi, lo);
    memo.emplace(g, res);
    return res;
}

NodeRef Manager::compose(NodeRef g, const std::unordered_map<uint32_t, NodeRef>& subst) {
    check_owner(g, "compose");
    for (const auto& [v, fn] : subst) {
        if (v >= num_vars()) throw std::invalid_argument("compose: variable index out of range");
        check_owner(fn, "compose");
    }
    std::unordered_map<uint32_t, uint32_t> memo;
    return {compose_rec(g.idx, subst, memo), this};
}

bool Manager::eval(NodeRef g, const std::vector<int8_t>& values) const {
    check_owner(g, "eval");
    uint32_t n = g.idx;
    while (!is_terminal(n)) {
        uint32_t v = nodes_[n].var;
        int8_t val = v < values.size() ? values[v] : int8_t{-1};
        if (val != 0 && val != 1)
            throw std::invalid_argument("eval: no value for variable " + var_name(v));
        n = val ? nodes_[n].hi : nodes_[n].lo;
    }
    return n == 1;
}

std::vector<uint32_t> Manager::support(NodeRef g) const {
    check_owner(g, "support");
    std::set<uint32_t> vars;
    std::set<uint32_t> seen;
    std::vector<uint32_t> stack{g.idx};
    while (!stack.empty()) {
        uint32_t n = stack.back();
        stack.pop_back();
        if (is_terminal(n) || !seen.insert(n).second) continue;
        vars.insert(nodes_[n].var);
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    return {vars.begin(), vars.end()};
}

NodeRef Manager::mk_cube(const std::vector<std::pair<uint32_t, bool>>& literals) {
    NodeRef acc = one();
    for (const auto& [v, pol] : literals) {
        NodeRef var = mk_var(v);
        acc = apply_and(acc, pol ? var : apply_not(var));
    }
    return acc;
}

size_t Manager::node_count(NodeRef g) const {
    check_owner(g, "node_count");
    std::set<uint32_t> seen;
    std::vector<uint32_t> stack{g.idx};
    while (!stack.empty()) {
        uint32_t n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second || is_terminal(n)) continue;
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    return seen.size();
}

double Manager::minterm_count(NodeRef g, uint32_t nvars) const {
    check_owner(g, "minterm_count");
    // Satisfying fraction per node, independent of level.
    std::unordered_map<uint32_t, double> memo;
    std::function<double(uint32_t)> frac = [&](uint32_t n) -> double {
        if (n == 0) return 0.0;
        if (n == 1) return 1.0;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        double f = 0.5 * frac(nodes_[n].lo) + 0.5 * frac(nodes_[n].hi);
        memo.emplace(n, f);
        return f;
    };
    double total = 1.0;
    for (uint32_t i = 0; i < nvars; ++i) total *= 2.0;
    return frac(g.idx) * total;
}

std::vector<std::vector<std::pair<uint32_t, bool>>> Manager::cube_cover(NodeRef g) const {
    check_owner(g, "cube_cover");
    std::vector<std::vector<std::pair<uint32_t, bool>>> cubes;
    std::vector<std::pair<uint32_t, bool>> path;
    std::function<void(uint32_t)> walk = [&](uint32_t n) {
        if (n == 0) return;
        if (n == 1) {
            cubes.push_back(path);
            return;
        }
        path.emplace_back(nodes_[n].var, false);
        walk(nodes_[n].lo);
        path.back().second = true;
        walk(nodes_[n].hi);
        path.pop_back();
    };
    walk(g.idx);
    return cubes;
}

void Manager::dump_dot(NodeRef g, std::ostream& os) const {
    check_owner(g, "dump_dot");
    os << "digraph bdd {\n";
    os << "  t0 [label=\"0\", shape=box];\n";
    os << "  t1 [label=\"1\", shape=box];\n";
    std::set<uint32_t> seen;
    std::vector<uint32_t> stack{g.idx};
    auto id = [](uint32_t n) {
        return n == 0 ? std::string("t0") : n == 1 ? std::string("t1") : "n" + std::to_string(n);
    };
    while (!stack.empty()) {
        uint32_t n = stack.back();
        stack.pop_back();
        if (is_terminal(n) || !seen.insert(n).second) continue;
        os << "  " << id(n) << " [label=\"" << var_name(nodes_[n].var) << "\"];\n";
        os << "  " << id(n) << " -> " << id(nodes_[n].lo) << " [style=dashed];\n";
        os << "  " << id(n) << " -> " << id(nodes_[n].hi) << ";\n";
        stack.push_back(nodes_[n].lo);
        stack.push_back(nodes_[n].hi);
    }
    os << "}\n";
}

bool Manager::check_reduced() const {
    std::set<std::tuple<uint32_t, uint32_t, uint32_t>> triples;
    for (uint32_t n = 2; n < nodes_.size(); ++n) {
        if (nodes_[n].lo == nodes_[n].hi) return false;
        if (!triples.emplace(nodes_[n].var, nodes_[n].lo, nodes_[n].hi).second) return false;
    }
    return true;
}

}  // namespace safesynth::dd
