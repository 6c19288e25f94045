#include "safesynth/transducer.hpp"

#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "safesynth/errors.hpp"

namespace safesynth {

std::pair<uint32_t, uint32_t> run_step(const Transducer& t, uint32_t state, uint32_t input) {
    if (state >= t.num_states())
        throw std::invalid_argument("run_step: state outside the winning machine");
    if (input >= t.rows[state].size())
        throw std::invalid_argument("run_step: input assignment out of range");
    const Transducer::Arc& arc = t.rows[state][input];
    return {arc.out_bits, arc.next};
}

Transducer build_transducer(const SymbolicDFA& sdfa, const WinningRegion& region,
                            const OutputFunctions& gamma, const RunLimits& limits) {
    if (!region.realizable)
        throw std::invalid_argument("build_transducer: region is not realizable");
    if (gamma.size() != sdfa.yvars.size())
        throw std::invalid_argument("build_transducer: one output function per output expected");

    auto& mgr = *sdfa.mgr;
    const uint32_t nx = static_cast<uint32_t>(sdfa.xvars.size());
    const uint32_t ny = static_cast<uint32_t>(sdfa.yvars.size());
    const uint32_t inputs = 1u << nx;

    Transducer t;
    t.inputs = sdfa.part.inputs;
    t.outputs = sdfa.part.outputs;
    t.initial = 0;

    std::map<std::vector<bool>, uint32_t> id_of;
    std::vector<std::vector<bool>> states;
    auto intern = [&](const std::vector<bool>& z) {
        auto it = id_of.find(z);
        if (it != id_of.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(states.size());
        id_of.emplace(z, id);
        states.push_back(z);
        return id;
    };
    intern(sdfa.z0);

    for (size_t q = 0; q < states.size(); ++q) {
        if ((q + 1) * size_t{inputs} > limits.transducer_row_cap)
            throw ResourceError("transducer row cap exceeded");
        limits.check_deadline("strategy construction");
        const std::vector<bool> z = states[q];
        t.rows.emplace_back(inputs, Transducer::Arc{0, 0});
        for (uint32_t x = 0; x < inputs; ++x) {
            auto vals = sdfa.game_assignment(z, x, 0);
            uint32_t ybits = 0;
            for (uint32_t j = 0; j < ny; ++j)
                if (mgr.eval(gamma[j], vals)) ybits |= 1u << j;
            for (uint32_t j = 0; j < ny; ++j) vals[sdfa.yvars[j]] = (ybits >> j) & 1u;
            std::vector<bool> zn(sdfa.zvars.size());
            for (size_t j = 0; j < sdfa.zvars.size(); ++j) zn[j] = mgr.eval(sdfa.eta[j], vals);
            std::vector<int8_t> region_vals(mgr.num_vars(), -1);
            for (size_t j = 0; j < sdfa.zvars.size(); ++j) region_vals[sdfa.zvars[j]] = zn[j];
            if (!mgr.eval(region.region, region_vals))
                throw std::logic_error("build_transducer: successor left the winning region");
            t.rows[q][x] = {intern(zn), ybits};
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// validation

namespace {

uint32_t play_letter(uint32_t xbits, uint32_t ybits, uint32_t nx) { return xbits | (ybits << nx); }

// Number of outputs from which the DFA state does not fall into an
// accepting (bad) state on this input.
uint32_t surviving_outputs(const ExplicitDFA& dfa, uint32_t dfa_state, uint32_t xbits,
                           uint32_t nx, uint32_t ny) {
    uint32_t count = 0;
    for (uint32_t y = 0; y < (1u << ny); ++y)
        if (!dfa.accepting[dfa.step(dfa_state, play_letter(xbits, y, nx))]) ++count;
    return count;
}

}  // namespace

ValidationReport validate_strategy(const Transducer& t, const ExplicitDFA& bad_prefix_dfa,
                                   const ValidationOptions& opts) {
    const uint32_t nx = static_cast<uint32_t>(t.inputs.size());
    const uint32_t ny = static_cast<uint32_t>(t.outputs.size());
    const uint32_t inputs = 1u << nx;

    ValidationReport report;
    report.plays = opts.random_plays;
    report.adversarial_plays = opts.adversarial_plays;
    report.horizon = opts.horizon;
    report.seed = opts.seed;

    std::mt19937_64 rng(opts.seed);
    auto note_violation = [&](const std::string& what, int play, int step) {
        ++report.violations;
        if (report.first_violation.empty()) {
            std::ostringstream os;
            os << what << " (play " << play << ", step " << step << ")";
            report.first_violation = os.str();
        }
    };

    for (int play = 0; play < opts.random_plays + opts.adversarial_plays; ++play) {
        const bool adversarial = play >= opts.random_plays;
        uint32_t q = t.initial;
        uint32_t dfa_state = bad_prefix_dfa.initial;
        for (int step = 0; step < opts.horizon; ++step) {
            uint32_t xbits;
            if (!adversarial) {
                xbits = inputs > 1 ? static_cast<uint32_t>(rng() % inputs) : 0;
            } else {
                xbits = 0;
                uint32_t best = UINT32_MAX;
                for (uint32_t x = 0; x < inputs; ++x) {
                    uint32_t s = surviving_outputs(bad_prefix_dfa, dfa_state, x, nx, ny);
                    if (s < best) {
                        best = s;
                        xbits = x;
                    }
                }
            }
            if (q >= t.num_states()) {
                note_violation("transducer state left the winning set", play, step);
                break;
            }
            auto [ybits, qn] = run_step(t, q, xbits);
            dfa_state = bad_prefix_dfa.step(dfa_state, play_letter(xbits, ybits, nx));
            if (bad_prefix_dfa.accepting[dfa_state]) {
                note_violation("play prefix accepted by the bad-prefix automaton", play, step);
                break;
            }
            q = qn;
        }
    }
    return report;
}

ValidationReport validate_strategy(const Transducer& t, const FormulaRef& phi,
                                   const Partition& part, const ValidationOptions& opts) {
    return validate_strategy(t, minimize_dfa(build_bad_prefix_dfa(phi, part)), opts);
}

// ---------------------------------------------------------------------------
// export / import

namespace {

// Groups a state's rows by (output, successor) and covers each group's
// input set by cubes, so don't-care inputs drop out of the labels.
struct GroupedEdges {
    struct Group {
        uint32_t out_bits;
        uint32_t next;
        std::vector<std::vector<std::pair<uint32_t, bool>>> cubes;
    };
    std::vector<Group> groups;
};

GroupedEdges group_state(const Transducer& t, uint32_t q, dd::Manager& input_mgr) {
    const uint32_t nx = t.num_input_bits();
    std::map<std::pair<uint32_t, uint32_t>, dd::NodeRef> sets;
    for (uint32_t x = 0; x < (1u << nx); ++x) {
        const auto& arc = t.rows[q][x];
        std::vector<std::pair<uint32_t, bool>> lits;
        for (uint32_t i = 0; i < nx; ++i) lits.emplace_back(i, (x >> i) & 1u);
        dd::NodeRef cube = input_mgr.mk_cube(lits);
        auto key = std::make_pair(arc.out_bits, arc.next);
        auto it = sets.find(key);
        if (it == sets.end())
            sets.emplace(key, cube);
        else
            it->second = input_mgr.apply_or(it->second, cube);
    }
    GroupedEdges out;
    for (const auto& [key, set] : sets)
        out.groups.push_back({key.first, key.second, input_mgr.cube_cover(set)});
    return out;
}

}  // namespace

std::string transducer_to_json(const Transducer& t) {
    nlohmann::json j;
    j["inputs"] = t.inputs;
    j["outputs"] = t.outputs;
    j["initial"] = t.initial;
    std::vector<uint32_t> ids(t.num_states());
    for (uint32_t q = 0; q < t.num_states(); ++q) ids[q] = q;
    j["states"] = ids;

    dd::Manager input_mgr(t.inputs);
    nlohmann::json transitions = nlohmann::json::array();
    for (uint32_t q = 0; q < t.num_states(); ++q) {
        GroupedEdges grouped = group_state(t, q, input_mgr);
        for (const auto& g : grouped.groups) {
            for (const auto& cube : g.cubes) {
                nlohmann::json tr;
                tr["from"] = q;
                nlohmann::json in = nlohmann::json::object();
                for (const auto& [var, pol] : cube) in[t.inputs[var]] = pol;
                tr["input"] = in;
                nlohmann::json out = nlohmann::json::object();
                for (size_t i = 0; i < t.outputs.size(); ++i)
                    out[t.outputs[i]] = ((g.out_bits >> i) & 1u) != 0;
                tr["output"] = out;
                tr["to"] = g.next;
                transitions.push_back(tr);
            }
        }
    }
    j["transitions"] = transitions;
    return j.dump(2);
}

std::string transducer_to_dot(const Transducer& t) {
    std::ostringstream os;
    os << "digraph strategy {\n";
    os << "  init [shape=point];\n";
    for (uint32_t q = 0; q < t.num_states(); ++q)
        os << "  s" << q << " [label=\"" << q << "\", shape=circle];\n";
    os << "  init -> s" << t.initial << ";\n";

    dd::Manager input_mgr(t.inputs);
    for (uint32_t q = 0; q < t.num_states(); ++q) {
        GroupedEdges grouped = group_state(t, q, input_mgr);
        for (const auto& g : grouped.groups) {
            for (const auto& cube : g.cubes) {
                std::ostringstream label;
                if (cube.empty()) {
                    label << "true";
                } else {
                    for (size_t i = 0; i < cube.size(); ++i) {
                        if (i) label << " & ";
                        label << (cube[i].second ? "" : "!") << t.inputs[cube[i].first];
                    }
                }
                label << " / ";
                if (t.outputs.empty()) {
                    label << "-";
                } else {
                    for (size_t i = 0; i < t.outputs.size(); ++i) {
                        if (i) label << " & ";
                        label << (((g.out_bits >> i) & 1u) ? "" : "!") << t.outputs[i];
                    }
                }
                os << "  s" << q << " -> s" << g.next << " [label=\"" << label.str() << "\"];\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

std::string export_transducer(const Transducer& t, const std::string& format) {
    if (format == "json") return transducer_to_json(t);
    if (format == "dot") return transducer_to_dot(t);
    throw std::invalid_argument("export_transducer: unknown format '" + format + "'");
}

Transducer transducer_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Transducer t;
    t.inputs = j.at("inputs").get<std::vector<std::string>>();
    t.outputs = j.at("outputs").get<std::vector<std::string>>();
    t.initial = j.at("initial").get<uint32_t>();
    const auto states = j.at("states").get<std::vector<uint32_t>>();
    const uint32_t nx = static_cast<uint32_t>(t.inputs.size());
    t.rows.assign(states.size(), std::vector<Transducer::Arc>(1u << nx, {UINT32_MAX, 0}));

    auto input_index = [&](const std::string& name) {
        for (uint32_t i = 0; i < nx; ++i)
            if (t.inputs[i] == name) return i;
        throw std::invalid_argument("transducer_from_json: unknown input '" + name + "'");
    };

    for (const auto& tr : j.at("transitions")) {
        uint32_t from = tr.at("from").get<uint32_t>();
        uint32_t to = tr.at("to").get<uint32_t>();
        uint32_t out_bits = 0;
        for (size_t i = 0; i < t.outputs.size(); ++i)
            if (tr.at("output").at(t.outputs[i]).get<bool>()) out_bits |= 1u << i;
        uint32_t care = 0, bits = 0;
        for (const auto& [name, val] : tr.at("input").items()) {
            uint32_t i = input_index(name);
            care |= 1u << i;
            if (val.get<bool>()) bits |= 1u << i;
        }
        // expand the cube over the omitted inputs
        for (uint32_t x = 0; x < (1u << nx); ++x)
            if ((x & care) == bits) t.rows[from][x] = {to, out_bits};
    }
    for (uint32_t q = 0; q < t.num_states(); ++q)
        for (uint32_t x = 0; x < (1u << nx); ++x)
            if (t.rows[q][x].next == UINT32_MAX)
                throw std::invalid_argument("transducer_from_json: incomplete transition table");
    return t;
}

}  // namespace safesynth
