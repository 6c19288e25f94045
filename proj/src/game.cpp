#include "safesynth/game.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace safesynth {

namespace {

std::vector<int8_t> initial_assignment(const SymbolicDFA& sdfa) {
    std::vector<int8_t> vals(sdfa.mgr->num_vars(), -1);
    for (size_t j = 0; j < sdfa.zvars.size(); ++j)
        vals[sdfa.zvars[j]] = sdfa.z0[j] ? 1 : 0;
    return vals;
}

}  // namespace

dd::NodeRef preimage(dd::NodeRef w, const SymbolicDFA& sdfa, FirstMover first_mover) {
    auto& mgr = *sdfa.mgr;
    for (uint32_t v : mgr.support(w)) {
        if (std::find(sdfa.zvars.begin(), sdfa.zvars.end(), v) == sdfa.zvars.end())
            throw std::invalid_argument("preimage: region mentions non-state variable " +
                                        mgr.var_name(v));
    }
    std::unordered_map<uint32_t, dd::NodeRef> subst;
    for (size_t j = 0; j < sdfa.zvars.size(); ++j) subst.emplace(sdfa.zvars[j], sdfa.eta[j]);
    dd::NodeRef shifted = mgr.compose(w, subst);
    if (first_mover == FirstMover::Environment)
        return mgr.forall_abstract(mgr.exists_abstract(shifted, sdfa.yvars), sdfa.xvars);
    return mgr.exists_abstract(mgr.forall_abstract(shifted, sdfa.xvars), sdfa.yvars);
}

WinningRegion winning_region(const SymbolicDFA& sdfa, FirstMover first_mover,
                             const WinningRegionOptions& opts) {
    auto& mgr = *sdfa.mgr;
    const auto z0 = initial_assignment(sdfa);

    WinningRegion result;
    result.first_mover = first_mover;

    dd::NodeRef w = mgr.apply_not(sdfa.accept);
    if (opts.record_iterates) result.iterates.push_back(w);
    if (opts.verbose)
        *opts.verbose << "w_0: " << mgr.node_count(w) << " nodes, "
                      << mgr.minterm_count(w, static_cast<uint32_t>(sdfa.zvars.size()))
                      << " states\n";
    size_t i = 0;
    if (opts.early_termination && !mgr.eval(w, z0)) {
        result.region = w;
        result.iterations = 0;
        result.realizable = false;
        return result;
    }
    while (true) {
        dd::NodeRef next = mgr.apply_and(w, preimage(w, sdfa, first_mover));
        ++i;
        if (opts.record_iterates) result.iterates.push_back(next);
        if (opts.verbose)
            *opts.verbose << "w_" << i << ": " << mgr.node_count(next) << " nodes, "
                          << mgr.minterm_count(next, static_cast<uint32_t>(sdfa.zvars.size()))
                          << " states\n";
        if (opts.early_termination && !mgr.eval(next, z0)) {
            result.region = next;
            result.iterations = i;
            result.realizable = false;
            return result;
        }
        if (next == w) break;
        w = next;
    }
    result.region = w;
    result.iterations = i;
    result.realizable = mgr.eval(w, z0);
    return result;
}

}  // namespace safesynth
