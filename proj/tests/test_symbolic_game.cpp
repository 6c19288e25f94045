#include <doctest.h>

#include <sstream>

#include "safesynth/game.hpp"
#include "safesynth/horn.hpp"
#include "test_support.hpp"

using namespace safesynth;
namespace ts = testsupport;

namespace {

Partition xy_partition() { return {{"x"}, {"y"}}; }

SymbolicDFA sdfa_for(const char* text, const Partition& part) {
    return encode_symbolic(minimize_dfa(build_bad_prefix_dfa(to_nnf(parse_ltl(text)), part)),
                           part);
}

}  // namespace

TEST_CASE("preimage: constants and the G y region") {
    SymbolicDFA s = sdfa_for("G y", xy_partition());
    auto& mgr = *s.mgr;
    CHECK(preimage(mgr.one(), s, FirstMover::Environment) == mgr.one());
    CHECK(preimage(mgr.zero(), s, FirstMover::Environment) == mgr.zero());

    dd::NodeRef not_z0 = mgr.apply_not(mgr.mk_var(s.zvars[0]));
    CHECK(preimage(not_z0, s, FirstMover::Environment) == not_z0);
    CHECK(preimage(not_z0, s, FirstMover::Controller) == not_z0);

    // regions over non-state variables are rejected
    CHECK_THROWS_AS(preimage(mgr.mk_var(s.xvars[0]), s, FirstMover::Environment),
                    std::invalid_argument);
}

TEST_CASE("winning_region: G y is realizable at the first fixpoint check") {
    SymbolicDFA s = sdfa_for("G y", xy_partition());
    WinningRegion w = winning_region(s, FirstMover::Environment);
    CHECK(w.realizable);
    CHECK(w.iterations == 1);
    CHECK(w.region == s.mgr->apply_not(s.mgr->mk_var(s.zvars[0])));
}

TEST_CASE("winning_region: G x drops the initial state at iteration one") {
    SymbolicDFA s = sdfa_for("G x", xy_partition());
    WinningRegion w = winning_region(s, FirstMover::Environment);
    CHECK_FALSE(w.realizable);
    CHECK(w.iterations == 1);
    // without early termination the verdict is the same
    WinningRegionOptions opts;
    opts.early_termination = false;
    WinningRegion w2 = winning_region(s, FirstMover::Environment, opts);
    CHECK_FALSE(w2.realizable);
}

TEST_CASE("winning_region: false is unrealizable before any iteration") {
    SymbolicDFA s = sdfa_for("false", xy_partition());
    WinningRegion w = winning_region(s, FirstMover::Environment);
    CHECK_FALSE(w.realizable);
    CHECK(w.iterations == 0);
}

TEST_CASE("winning_region: controller-first differs when the controller must guess") {
    // G (y <-> x) in release form: the controller can copy x only after
    // seeing it, so environment-first is realizable, controller-first is not
    const char* text = "G ((x & y) | (!x & !y))";
    SymbolicDFA s = sdfa_for(text, xy_partition());
    CHECK(winning_region(s, FirstMover::Environment).realizable);
    CHECK_FALSE(winning_region(s, FirstMover::Controller).realizable);
}

TEST_CASE("winning_region: two-step contradiction empties the region") {
    SymbolicDFA s = sdfa_for("G (y & X !y)", xy_partition());
    WinningRegionOptions opts;
    opts.early_termination = false;
    opts.record_iterates = true;
    WinningRegion w = winning_region(s, FirstMover::Environment, opts);
    CHECK_FALSE(w.realizable);
    CHECK(w.region == s.mgr->zero());
}

TEST_CASE("fixpoint properties on the formula family") {
    for (const auto& phi : ts::safety_formulas({"x", "y"})) {
        SymbolicDFA s =
            encode_symbolic(minimize_dfa(build_bad_prefix_dfa(phi, xy_partition())),
                            xy_partition());
        WinningRegionOptions opts;
        opts.early_termination = false;
        opts.record_iterates = true;
        WinningRegion w = winning_region(s, FirstMover::Environment, opts);
        auto& mgr = *s.mgr;

        // monotone descent: each iterate implies the previous one
        for (size_t i = 1; i < w.iterates.size(); ++i) {
            CAPTURE(to_string(phi));
            REQUIRE(mgr.apply_and(w.iterates[i], w.iterates[i - 1]) == w.iterates[i]);
        }
        // iteration bound: satisfying assignments of the start region + 1
        double start = mgr.minterm_count(w.iterates.front(),
                                         static_cast<uint32_t>(s.zvars.size()));
        CHECK(w.iterations <= static_cast<size_t>(start) + 1);
        CHECK(w.iterations <= (size_t{1} << s.zvars.size()));

        // early termination changes nothing about the verdict
        WinningRegion we = winning_region(s, FirstMover::Environment);
        CHECK(we.realizable == w.realizable);

        // the fixpoint is a fixpoint
        if (!w.iterates.empty()) {
            dd::NodeRef fix = w.iterates.back();
            CHECK(mgr.apply_and(fix, preimage(fix, s, FirstMover::Environment)) == fix);
        }
    }
}

TEST_CASE("region safety: every region state has a surviving output for every input") {
    for (const auto& phi : ts::safety_formulas({"x", "y"})) {
        SymbolicDFA s =
            encode_symbolic(minimize_dfa(build_bad_prefix_dfa(phi, xy_partition())),
                            xy_partition());
        WinningRegionOptions opts;
        opts.early_termination = false;
        WinningRegion w = winning_region(s, FirstMover::Environment, opts);
        auto& mgr = *s.mgr;
        const uint32_t k = static_cast<uint32_t>(s.zvars.size());
        for (uint32_t enc = 0; enc < (1u << k); ++enc) {
            std::vector<bool> z(k);
            for (uint32_t j = 0; j < k; ++j) z[j] = (enc >> j) & 1u;
            std::vector<int8_t> zvals(mgr.num_vars(), -1);
            for (uint32_t j = 0; j < k; ++j) zvals[s.zvars[j]] = z[j];
            if (!mgr.eval(w.region, zvals)) continue;
            for (uint32_t x = 0; x < 2; ++x) {
                bool some_output_survives = false;
                for (uint32_t y = 0; y < 2 && !some_output_survives; ++y) {
                    auto vals = s.game_assignment(z, x, y);
                    std::vector<int8_t> succ(mgr.num_vars(), -1);
                    for (uint32_t j = 0; j < k; ++j)
                        succ[s.zvars[j]] = mgr.eval(s.eta[j], vals);
                    some_output_survives = mgr.eval(w.region, succ);
                }
                CAPTURE(to_string(phi));
                REQUIRE(some_output_survives);
            }
        }
    }
}

TEST_CASE("verdicts agree with the Horn solver across the family") {
    Partition part = xy_partition();
    for (const auto& phi : ts::safety_formulas({"x", "y"})) {
        ExplicitDFA dfa = minimize_dfa(build_bad_prefix_dfa(phi, part));
        WinningRegion w = winning_region(encode_symbolic(dfa, part), FirstMover::Environment);
        SafetyAutomaton dsa = dualize_to_dsa(dfa);
        bool horn_realizable = !dsa.empty() && solve_horn(build_horn(dsa, part)).satisfiable;
        CAPTURE(to_string(phi));
        REQUIRE(w.realizable == horn_realizable);
    }
}

TEST_CASE("three-way verdict agreement on random safety formulas") {
    // symbolic fixpoint vs Horn propagation vs explicit backward induction
    Partition part = xy_partition();
    auto sample = ts::sample_formulas(600, 3, {"x", "y"}, 31);
    size_t used = 0;
    for (const auto& raw : sample) {
        FormulaRef phi = to_nnf(raw);
        if (!in_safety_fragment(classify(phi))) continue;
        ++used;
        ExplicitDFA dfa = minimize_dfa(build_bad_prefix_dfa(phi, part));
        bool symbolic =
            winning_region(encode_symbolic(dfa, part), FirstMover::Environment).realizable;
        SafetyAutomaton dsa = dualize_to_dsa(dfa);
        bool horn = !dsa.empty() && solve_horn(build_horn(dsa, part)).satisfiable;
        bool attractor = !dsa.empty() && !ts::losing_states(dsa, part)[*dsa.initial];
        CAPTURE(to_string(phi));
        REQUIRE(symbolic == horn);
        REQUIRE(symbolic == attractor);
    }
    CHECK(used > 100);
}

TEST_CASE("variable order: state bits before inputs before outputs") {
    Partition part{{"x1", "x2"}, {"y1"}};
    SymbolicDFA s = sdfa_for("G (x1 -> X y1)", part);
    for (uint32_t z : s.zvars)
        for (uint32_t x : s.xvars) CHECK(z < x);
    for (uint32_t x : s.xvars)
        for (uint32_t y : s.yvars) CHECK(x < y);
}

TEST_CASE("verbose mode reports per-iteration region sizes") {
    SymbolicDFA s = sdfa_for("G y", xy_partition());
    std::ostringstream os;
    WinningRegionOptions opts;
    opts.verbose = &os;
    winning_region(s, FirstMover::Environment, opts);
    CHECK(os.str().find("w_0:") != std::string::npos);
    CHECK(os.str().find("nodes") != std::string::npos);
}
