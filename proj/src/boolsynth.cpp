#include "safesynth/boolsynth.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace safesynth {

OutputFunctions synthesize_outputs(dd::Manager& mgr, dd::NodeRef xi,
                                   const std::vector<uint32_t>& input_vars,
                                   const std::vector<uint32_t>& output_vars) {
    for (uint32_t v : mgr.support(xi)) {
        bool known = std::find(input_vars.begin(), input_vars.end(), v) != input_vars.end() ||
                     std::find(output_vars.begin(), output_vars.end(), v) != output_vars.end();
        if (!known)
            throw std::invalid_argument("synthesize_outputs: constraint mentions unknown variable " +
                                        mgr.var_name(v));
    }

    const size_t n = output_vars.size();
    // Split off the last output first; raw[j] may still mention earlier
    // outputs until the back-substitution pass below.
    std::vector<dd::NodeRef> raw(n, mgr.zero());
    dd::NodeRef remaining = xi;
    for (size_t j = n; j-- > 0;) {
        dd::NodeRef pos = mgr.cofactor(remaining, output_vars[j], true);
        dd::NodeRef neg = mgr.cofactor(remaining, output_vars[j], false);
        // true only where required: prefer false whenever both work
        raw[j] = mgr.apply_and(pos, mgr.apply_not(neg));
        remaining = mgr.ite(raw[j], pos, neg);
    }

    OutputFunctions gamma(n, mgr.zero());
    std::unordered_map<uint32_t, dd::NodeRef> subst;
    for (size_t j = 0; j < n; ++j) {
        gamma[j] = subst.empty() ? raw[j] : mgr.compose(raw[j], subst);
        subst.emplace(output_vars[j], gamma[j]);
    }
    return gamma;
}

}  // namespace safesynth
