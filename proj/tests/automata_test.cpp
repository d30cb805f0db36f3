#include "doctest.h"

#include <array>
#include <string>
#include <vector>

#include "tsa/automata.hpp"
#include "tsa/contracts.hpp"

#include "test_util.hpp"

using namespace tsa;
using test::contract_of;
using test::error_kind_of;
using test::ms;

namespace {

const char *sparse_lu_src = R"(
class SparseLU {
    @EnableOnly(factorize)
    void analyzePattern(Mat a);

    @EnableOnly(solve)
    void factorize(Mat a);

    @EnableOnly(solve)
    void compute(Mat a);

    @EnableAll
    void solve(Mat b);
}
)";

// Alphabet indices: 0 SparseLU, 1 analyzePattern, 2 compute, 3 factorize, 4 solve.
ContractMap sparse_lu() { return contract_of(sparse_lu_src, "SparseLU"); }

std::vector<MethodId> seq(std::initializer_list<std::uint32_t> indices) {
    std::vector<MethodId> out;
    for (auto i : indices) out.push_back(MethodId{i});
    return out;
}

ExplicitDfa make_dfa(std::vector<std::string> alphabet, std::size_t num_states,
                     const std::vector<std::array<std::size_t, 3>> &edges) {
    ExplicitDfa d;
    d.class_name = alphabet[0];
    d.alphabet = std::move(alphabet);
    auto width = static_cast<std::uint32_t>(d.alphabet.size());
    for (std::size_t i = 0; i < num_states; ++i) {
        MethodSet s(width);
        for (std::uint32_t j = 0; j < width; ++j)
            if ((i >> j) & 1) s.set(j);
        d.states.push_back(s);
    }
    d.delta.assign(num_states * width, -1);
    for (const auto &[from, m, to] : edges)
        d.delta_at(from, static_cast<std::uint32_t>(m)) = static_cast<std::int32_t>(to);
    d.index_states();
    return d;
}

} // namespace

TEST_CASE("apply_triple is defined iff the precondition holds") {
    ContractMap lu = sparse_lu();

    auto after_ctor = apply_triple(lu.entries[0], ms(5, {0}));
    REQUIRE(after_ctor.has_value());
    CHECK(*after_ctor == ms(5, {1, 2}));

    auto after_compute = apply_triple(lu.entries[2], *after_ctor);
    REQUIRE(after_compute.has_value());
    CHECK(*after_compute == ms(5, {4}));

    auto after_solve = apply_triple(lu.entries[4], *after_compute);
    REQUIRE(after_solve.has_value());
    CHECK(*after_solve == ms(5, {1, 2, 3, 4}));

    CHECK(!apply_triple(lu.entries[4], ms(5, {1, 2})).has_value());
    CHECK(!apply_triple(lu.entries[0], ms(5, {1, 2})).has_value());
}

TEST_CASE("combine_effect accumulates enables, disables and residual preconditions") {
    ContractMap lu = sparse_lu();

    // compute then solve: solve re-enables everything and is already enabled,
    // so no new precondition appears.
    BfaTriple s2 = lu.entries[2];
    BfaTriple s3 = combine_effect(s2, lu.entries[4]);
    CHECK(s3 == BfaTriple{ms(5, {1, 2, 3, 4}), ms(5, {}), ms(5, {2})});

    // From the empty effect, combining is just the entry itself.
    CHECK(combine_effect(empty_triple(5), lu.entries[2]) == lu.entries[2]);

    // analyzePattern then factorize: factorize's requirement is covered by the
    // first call, compute's disable wins over the earlier enable.
    BfaTriple t = combine_effect(lu.entries[1], lu.entries[3]);
    CHECK(t == BfaTriple{ms(5, {4}), ms(5, {1, 2, 3}), ms(5, {1})});
}

TEST_CASE("dtransfer refuses calls whose precondition was disabled") {
    ContractMap lu = sparse_lu();

    BfaTriple s2 = lu.entries[2];
    auto s3 = dtransfer(lu, MethodId{4}, s2);
    REQUIRE(s3.has_value());
    CHECK(*s3 == BfaTriple{ms(5, {1, 2, 3, 4}), ms(5, {}), ms(5, {2})});

    // compute disabled analyzePattern, so a follow-up analyzePattern is invalid.
    CHECK(!dtransfer(lu, MethodId{1}, s2).has_value());

    auto folded = dtransfer_seq(lu, seq({2, 4, 3}), empty_triple(5));
    REQUIRE(folded.has_value());
    CHECK(!dtransfer_seq(lu, seq({2, 1}), empty_triple(5)).has_value());
}

TEST_CASE("join_triple keeps common enables and accumulates the rest") {
    ContractMap lu = sparse_lu();
    BfaTriple s2 = lu.entries[2];
    BfaTriple s3 = combine_effect(s2, lu.entries[4]);

    BfaTriple s4 = join_triple(s2, s3);
    CHECK(s4 == BfaTriple{ms(5, {4}), ms(5, {1, 2, 3}), ms(5, {2})});

    CHECK(join_triple(s2, s2) == s2);
    CHECK(join_triple(s2, s3) == join_triple(s3, s2));
}

TEST_CASE("expand_dfa on SparseLU yields the five-state nine-transition machine") {
    ExplicitDfa dfa = expand_dfa(sparse_lu());
    CHECK(dfa.num_states() == 5);

    std::size_t transitions = 0;
    for (auto t : dfa.delta)
        if (t >= 0) ++transitions;
    CHECK(transitions == 9);

    CHECK(dfa.states[0] == ms(5, {0}));
    CHECK(dfa.state_index(ms(5, {1, 2})).has_value());
    CHECK(!dfa.state_index(ms(5, {0, 1})).has_value());

    CHECK(dump_dfa(dfa) == "# alphabet: SparseLU,analyzePattern,compute,factorize,solve\n"
                           "00001\tsolve\t01111\n"
                           "00010\tfactorize\t00001\n"
                           "01100\tanalyzePattern\t00010\n"
                           "01100\tcompute\t00001\n"
                           "01111\tanalyzePattern\t00010\n"
                           "01111\tcompute\t00001\n"
                           "01111\tfactorize\t00001\n"
                           "01111\tsolve\t01111\n"
                           "10000\tSparseLU\t01100\n");
}

TEST_CASE("delta_hat and accepts walk the expanded automaton") {
    ExplicitDfa dfa = expand_dfa(sparse_lu());

    CHECK(accepts(dfa, seq({})));
    CHECK(accepts(dfa, seq({0, 2, 4})));
    CHECK(accepts(dfa, seq({0, 1, 3, 4, 4})));
    CHECK(!accepts(dfa, seq({0, 4})));
    CHECK(!accepts(dfa, seq({2})));
    CHECK(!accepts(dfa, seq({0, 0})));

    auto q = delta_hat(dfa, ms(5, {0}), seq({0, 2}));
    REQUIRE(q.has_value());
    CHECK(*q == ms(5, {4}));
    CHECK(!delta_hat(dfa, ms(5, {0}), seq({0, 4})).has_value());

    CHECK(error_kind_of([&] { delta_hat(dfa, ms(5, {0, 1}), seq({})); }) ==
          ErrorKind::unknown_state);
}

TEST_CASE("expansion respects the state limit") {
    const char *toggles = R"(
class T {
    @EnableOnly(a1, a2) void T();
    @Enable(r1) @Disable(a1) void a1();
    @Enable(a1) @Disable(r1) void r1();
    @Enable(r2) @Disable(a2) void a2();
    @Enable(a2) @Disable(r2) void r2();
}
)";
    ContractMap c = contract_of(toggles, "T");
    ExplicitDfa dfa = expand_dfa(c);
    CHECK(dfa.num_states() == 5); // initial + 2^2 toggle combinations

    CHECK(error_kind_of([&] { expand_dfa(c, 3); }) == ErrorKind::state_explosion);
}

TEST_CASE("minimization is the identity on contract expansions") {
    ExplicitDfa dfa = expand_dfa(sparse_lu());
    MinimizedDfa min = minimize_dfa(dfa);
    CHECK(min.num_states == 5);
    CHECK(min.num_transitions() == 9);
    CHECK(min.initial == 0);
    CHECK(dump_minimized(min) == "# alphabet: SparseLU,analyzePattern,compute,factorize,solve\n"
                                 "s0\tSparseLU\ts1\n"
                                 "s1\tanalyzePattern\ts2\n"
                                 "s1\tcompute\ts3\n"
                                 "s2\tfactorize\ts3\n"
                                 "s3\tsolve\ts4\n"
                                 "s4\tanalyzePattern\ts2\n"
                                 "s4\tcompute\ts3\n"
                                 "s4\tfactorize\ts3\n"
                                 "s4\tsolve\ts4\n");
}

TEST_CASE("minimization merges behaviorally equivalent states") {
    // Hand-built machine with two interchangeable states flipping on 'a'.
    ExplicitDfa dfa = make_dfa({"C", "a"}, 3,
                               {
                                   {{0, 0, 1}}, // C from the start state
                                   {{1, 1, 2}}, // a flips between the two live states
                                   {{2, 1, 1}},
                               });
    MinimizedDfa min = minimize_dfa(dfa);
    CHECK(min.num_states == 2);
    CHECK(min.num_transitions() == 2);
    CHECK(min.state_class[1] == min.state_class[2]);
}

TEST_CASE("language inclusion distinguishes strict and loose contracts") {
    ContractMap strict = contract_of(
        "class A { @EnableOnly(b) void A(); @EnableOnly(b) void a(); @EnableAll void b(); }", "A");
    ContractMap loose = contract_of(
        "class B { @EnableAll void B(); @EnableAll void a(); @EnableAll void b(); }", "B");

    ExplicitDfa da = expand_dfa(strict);
    ExplicitDfa db = expand_dfa(loose);
    CHECK(language_included(da, db));
    CHECK(!language_included(db, da));
    CHECK(language_included(da, da));
}

TEST_CASE("context independency holds for expansions and fails for the iterator machine") {
    CHECK(context_independency_check(expand_dfa(sparse_lu()), 8).ok);

    // remove() invalidates the iterator only once iteration has started, so
    // its effect on hasNext depends on the call history.
    ExplicitDfa iterator = make_dfa({"It", "hasNext", "next", "remove"}, 4,
                                    {
                                        {{0, 0, 1}}, // construct
                                        {{1, 1, 2}}, // hasNext starts iterating
                                        {{1, 3, 1}}, // remove before iterating is harmless
                                        {{2, 1, 2}},
                                        {{2, 2, 2}}, // next keeps iterating
                                        {{2, 3, 3}}, // remove mid-iteration invalidates
                                        {{3, 3, 3}},
                                    });
    ContextCheckResult r = context_independency_check(iterator, 8);
    CHECK(!r.ok);
    REQUIRE(r.counterexample.has_value());
    CHECK(r.counterexample->method_u == "remove");
    CHECK(r.counterexample->method_v == "hasNext");
}
