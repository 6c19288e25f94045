#include "safesynth/horn.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "safesynth/errors.hpp"

namespace safesynth {

HornInstance build_horn(const SafetyAutomaton& dsa, const Partition& part,
                        const RunLimits& limits) {
    if (dsa.empty())
        throw std::invalid_argument("build_horn: empty safety automaton (trivially unrealizable)");
    const uint32_t nx = static_cast<uint32_t>(part.inputs.size());
    const uint32_t ny = static_cast<uint32_t>(part.outputs.size());
    if (nx + ny > limits.horn_var_cap)
        throw ResourceError("Horn enumeration over " + std::to_string(nx + ny) +
                            " variables exceeds the cap of " +
                            std::to_string(limits.horn_var_cap));

    HornInstance h;
    h.num_states = static_cast<uint32_t>(dsa.num_states());
    h.num_input_bits = nx;
    h.num_output_bits = ny;
    h.initial_state = *dsa.initial;

    const uint32_t xs = h.inputs_per_state();
    const uint32_t ys = h.outputs_per_input();
    for (uint32_t s = 0; s < h.num_states; ++s) {
        limits.check_deadline("Horn construction");
        for (uint32_t x = 0; x < xs; ++x) {
            // chain rule into the state variable
            h.clauses.push_back({{h.var_state_input(s, x)}, h.var_state(s)});
            // all outputs bad forces the (state, input) variable
            HornClause all;
            for (uint32_t y = 0; y < ys; ++y)
                all.body.push_back(h.var_state_input_output(s, x, y));
            all.head = h.var_state_input(s, x);
            h.clauses.push_back(std::move(all));
            for (uint32_t y = 0; y < ys; ++y) {
                uint32_t letter = x | (y << nx);
                std::optional<uint32_t> dst = dsa.step(s, letter);
                if (dst) {
                    h.clauses.push_back(
                        {{h.var_state(*dst)}, h.var_state_input_output(s, x, y)});
                } else {
                    h.clauses.push_back({{}, h.var_state_input_output(s, x, y)});
                }
            }
        }
    }
    // the initial state must not be forced losing
    h.clauses.push_back({{h.var_state(h.initial_state)}, std::nullopt});

    h.clause_count = h.clauses.size();
    for (const auto& c : h.clauses)
        h.literal_count += c.body.size() + (c.head ? 1 : 0);
    return h;
}

HornSolution solve_horn(const HornInstance& h) {
    const size_t nvars = h.num_vars();
    std::vector<size_t> pending(h.clauses.size());
    std::vector<std::vector<uint32_t>> watchers(nvars);
    for (size_t c = 0; c < h.clauses.size(); ++c) {
        pending[c] = h.clauses[c].body.size();
        for (uint32_t v : h.clauses[c].body)
            watchers[v].push_back(static_cast<uint32_t>(c));
    }

    HornSolution sol;
    sol.model.value.assign(nvars, false);
    size_t steps = 0;
    std::deque<uint32_t> queue;
    bool goal_fired = false;

    auto fire = [&](size_t c) {
        ++steps;
        const auto& head = h.clauses[c].head;
        if (!head) {
            goal_fired = true;
        } else if (!sol.model.value[*head]) {
            sol.model.value[*head] = true;
            queue.push_back(*head);
        }
    };

    for (size_t c = 0; c < h.clauses.size(); ++c)
        if (pending[c] == 0) fire(c);
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop_front();
        for (uint32_t c : watchers[v]) {
            ++steps;
            if (--pending[c] == 0) fire(c);
        }
    }

    sol.model.propagation_steps = steps;
    sol.satisfiable = !goal_fired;
    return sol;
}

Transducer horn_strategy(const HornSolution& solution, const SafetyAutomaton& dsa,
                         const Partition& part, const RunLimits& limits) {
    if (!solution.satisfiable)
        throw std::invalid_argument("horn_strategy: instance is unsatisfiable");
    if (dsa.empty()) throw std::invalid_argument("horn_strategy: empty automaton");

    HornInstance layout;  // only the variable numbering is needed here
    layout.num_states = static_cast<uint32_t>(dsa.num_states());
    layout.num_input_bits = static_cast<uint32_t>(part.inputs.size());
    layout.num_output_bits = static_cast<uint32_t>(part.outputs.size());
    const uint32_t nx = layout.num_input_bits;
    const auto& model = solution.model;

    Transducer t;
    t.inputs = part.inputs;
    t.outputs = part.outputs;
    t.initial = 0;

    std::map<uint32_t, uint32_t> id_of;  // dsa state -> transducer state
    std::vector<uint32_t> order;
    auto intern = [&](uint32_t s) {
        auto it = id_of.find(s);
        if (it != id_of.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(order.size());
        id_of.emplace(s, id);
        order.push_back(s);
        return id;
    };
    intern(*dsa.initial);

    const uint32_t xs = layout.inputs_per_state();
    const uint32_t ys = layout.outputs_per_input();
    for (size_t q = 0; q < order.size(); ++q) {
        if ((q + 1) * size_t{xs} > limits.transducer_row_cap)
            throw ResourceError("transducer row cap exceeded");
        uint32_t s = order[q];
        t.rows.emplace_back(xs, Transducer::Arc{0, 0});
        for (uint32_t x = 0; x < xs; ++x) {
            uint32_t choice = ys;
            for (uint32_t y = 0; y < ys; ++y) {
                if (!model.contains(layout.var_state_input_output(s, x, y))) {
                    choice = y;
                    break;
                }
            }
            if (choice == ys)
                throw std::logic_error("horn_strategy: winning state has no surviving output");
            std::optional<uint32_t> dst = dsa.step(s, x | (choice << nx));
            if (!dst || model.contains(layout.var_state(*dst)))
                throw std::logic_error("horn_strategy: chosen output leaves the winning set");
            t.rows[q][x] = {intern(*dst), choice};
        }
    }
    return t;
}

std::string to_dimacs(const HornInstance& h) {
    std::ostringstream os;
    os << "p cnf " << h.num_vars() << " " << h.clauses.size() << "\n";
    for (const auto& c : h.clauses) {
        for (uint32_t v : c.body) os << "-" << (v + 1) << " ";
        if (c.head) os << (*c.head + 1) << " ";
        os << "0\n";
    }
    return os.str();
}

}  // namespace safesynth
