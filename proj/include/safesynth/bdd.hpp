#ifndef SAFESYNTH_BDD_HPP_
#define SAFESYNTH_BDD_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace safesynth::dd {

class Manager;

// Handle to a canonical node inside one Manager. Two refs from the same
// Manager denote the same boolean function iff they compare equal.
struct NodeRef {
    uint32_t idx = 0;
    const Manager* owner = nullptr;

    bool operator==(const NodeRef& o) const { return idx == o.idx && owner == o.owner; }
    bool operator!=(const NodeRef& o) const { return !(*this == o); }
};

// Reduced ordered BDD manager with a fixed variable order (creation
// order), a unique table and an ITE cache. Single-owner: all node
// creation from one logical thread; refs must not cross managers.
class Manager {
public:
    explicit Manager(std::vector<std::string> var_names);

    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    uint32_t num_vars() const { return static_cast<uint32_t>(var_names_.size()); }
    const std::string& var_name(uint32_t v) const { return var_names_[v]; }

    NodeRef one() const { return {1, this}; }
    NodeRef zero() const { return {0, this}; }

    NodeRef mk_var(uint32_t v);

    NodeRef apply_not(NodeRef g);
    NodeRef apply_and(NodeRef g, NodeRef h);
    NodeRef apply_or(NodeRef g, NodeRef h);
    NodeRef apply_xor(NodeRef g, NodeRef h);
    NodeRef ite(NodeRef f, NodeRef g, NodeRef h);

    // g with v fixed to the given polarity (Shannon cofactor).
    NodeRef cofactor(NodeRef g, uint32_t v, bool polarity);

    NodeRef exists_abstract(NodeRef g, const std::vector<uint32_t>& vars);
    NodeRef forall_abstract(NodeRef g, const std::vector<uint32_t>& vars);

    // Simultaneous substitution of variables by functions. Variables not
    // listed are left in place.
    NodeRef compose(NodeRef g, const std::unordered_map<uint32_t, NodeRef>& subst);

    // Full evaluation; values[v] must be 0 or 1 for every variable in
    // the support of g (-1 elsewhere is fine). Throws
    // std::invalid_argument on a missing support value.
    bool eval(NodeRef g, const std::vector<int8_t>& values) const;

    std::vector<uint32_t> support(NodeRef g) const;

    // Conjunction of literals: (var, polarity) pairs.
    NodeRef mk_cube(const std::vector<std::pair<uint32_t, bool>>& literals);

    size_t node_count(NodeRef g) const;
    // Number of satisfying assignments of g over nvars variables.
    double minterm_count(NodeRef g, uint32_t nvars) const;

    // Disjoint cube cover of g: one cube per path to the one-terminal;
    // variables absent from a path are left out of its cube.
    std::vector<std::vector<std::pair<uint32_t, bool>>> cube_cover(NodeRef g) const;

    void dump_dot(NodeRef g, std::ostream& os) const;

    size_t total_nodes() const { return nodes_.size(); }

    // Structural well-formedness scan used by tests: no node with equal
    // children, no duplicate (var, lo, hi) triple.
    bool check_reduced() const;

private:
    struct Node {
        uint32_t var;
        uint32_t lo, hi;
    };

    struct Key {
        uint32_t a, b, c;
        bool operator==(const Key& o) const { return a == o.a && b == o.b && c == o.c; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            uint64_t h = (uint64_t)k.a * 0x9e3779b97f4a7c15ULL;
            h ^= (uint64_t)k.b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= (uint64_t)k.c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return static_cast<size_t>(h);
        }
    };

    uint32_t mk_node(uint32_t var, uint32_t lo, uint32_t hi);
    uint32_t ite_rec(uint32_t f, uint32_t g, uint32_t h);
    uint32_t cofactor_rec(uint32_t g, uint32_t v, bool pol,
                          std::unordered_map<uint32_t, uint32_t>& memo);
    uint32_t quantify_rec(uint32_t g, const std::vector<uint32_t>& sorted_vars, bool existential,
                          std::unordered_map<uint32_t, uint32_t>& memo);
    uint32_t compose_rec(uint32_t g, const std::unordered_map<uint32_t, NodeRef>& subst,
                         std::unordered_map<uint32_t, uint32_t>& memo);
    void check_owner(NodeRef r, const char* what) const;

    bool is_terminal(uint32_t n) const { return n <= 1; }

    std::vector<std::string> var_names_;
    std::vector<Node> nodes_;
    std::unordered_map<Key, uint32_t, KeyHash> unique_;
    std::unordered_map<Key, uint32_t, KeyHash> ite_cache_;
};

}  // namespace safesynth::dd

#endif  // SAFESYNTH_BDD_HPP_
