#include "doctest.h"

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

Annotation ann(AnnotationKind kind, std::vector<std::string> args = {}) {
    return Annotation{kind, std::move(args), SourceLoc{"test.tsl", 1, 1}};
}

} // namespace

TEST_CASE("alphabet is constructor first, then methods sorted by name") {
    ContractMap c = contract_of("class C { void b(); @Enable(b) void a(); void z(); }", "C");
    CHECK(c.alphabet == std::vector<std::string>{"C", "a", "b", "z"});
    CHECK(c.find("a")->index == 1);
    CHECK(!c.find("missing").has_value());
}

TEST_CASE("desugar expands each annotation form over the non-constructor methods") {
    std::vector<std::string> alphabet{"C", "a", "b", "c"};

    auto [e1, d1] = desugar({ann(AnnotationKind::enable, {"a"}), ann(AnnotationKind::disable, {"b"})},
                            alphabet);
    CHECK(e1 == ms(4, {1}));
    CHECK(d1 == ms(4, {2}));

    auto [e2, d2] = desugar({ann(AnnotationKind::enable_only, {"a"})}, alphabet);
    CHECK(e2 == ms(4, {1}));
    CHECK(d2 == ms(4, {2, 3}));

    auto [e3, d3] = desugar({ann(AnnotationKind::disable_only, {"a"})}, alphabet);
    CHECK(e3 == ms(4, {2, 3}));
    CHECK(d3 == ms(4, {1}));

    auto [e4, d4] = desugar({ann(AnnotationKind::enable_all)}, alphabet);
    CHECK(e4 == ms(4, {1, 2, 3}));
    CHECK(d4 == ms(4, {}));

    auto [e5, d5] = desugar({ann(AnnotationKind::disable_all)}, alphabet);
    CHECK(e5 == ms(4, {}));
    CHECK(d5 == ms(4, {1, 2, 3}));
}

TEST_CASE("desugar rejects overlapping enable and disable") {
    std::vector<std::string> alphabet{"C", "a", "b"};
    auto kind = error_kind_of([&] {
        desugar({ann(AnnotationKind::enable, {"a"}), ann(AnnotationKind::disable, {"a"})}, alphabet);
    });
    CHECK(kind == ErrorKind::overlapping_enable_disable);

    kind = error_kind_of([&] {
        desugar({ann(AnnotationKind::enable, {"a"}), ann(AnnotationKind::disable_all)}, alphabet);
    });
    CHECK(kind == ErrorKind::overlapping_enable_disable);
}

TEST_CASE("annotations cannot name the constructor or unknown methods") {
    std::vector<std::string> alphabet{"C", "a"};
    CHECK(error_kind_of([&] { desugar({ann(AnnotationKind::enable, {"C"})}, alphabet); }) ==
          ErrorKind::unknown_method_name);
    CHECK(error_kind_of([&] { desugar({ann(AnnotationKind::enable, {"nope"})}, alphabet); }) ==
          ErrorKind::unknown_method_name);
}

TEST_CASE("SparseLU contract has the expected triples") {
    ContractMap c = contract_of(sparse_lu_src, "SparseLU");
    REQUIRE(c.alphabet ==
            std::vector<std::string>{"SparseLU", "analyzePattern", "compute", "factorize", "solve"});

    CHECK(c.entries[0] == BfaTriple{ms(5, {1, 2}), ms(5, {0, 3, 4}), ms(5, {0})});
    CHECK(c.entries[1] == BfaTriple{ms(5, {3}), ms(5, {1, 2, 4}), ms(5, {1})});
    CHECK(c.entries[2] == BfaTriple{ms(5, {4}), ms(5, {1, 2, 3}), ms(5, {2})});
    CHECK(c.entries[3] == BfaTriple{ms(5, {4}), ms(5, {1, 2, 3}), ms(5, {3})});
    CHECK(c.entries[4] == BfaTriple{ms(5, {1, 2, 3, 4}), ms(5, {}), ms(5, {4})});

    CHECK(check_well_formed(c).empty());
}

TEST_CASE("implicit constructor enables exactly the unguarded methods") {
    // b is named in a's @Enable list, so only a starts enabled.
    ContractMap c = contract_of("class C { @Enable(b) void a(); void b(); }", "C");
    CHECK(c.entries[0].enable == ms(3, {1}));
    CHECK(c.entries[0].disable == ms(3, {0, 2}));
    CHECK(c.entries[0].pre == ms(3, {0}));

    // A self-enable keeps a method alive without guarding it.
    ContractMap chain = contract_of("class C { @Enable(s) void s(); void q(); }", "C");
    CHECK(chain.entries[0].enable == ms(3, {1, 2}));

    // @EnableAll names no methods, so it guards none either.
    ContractMap lu = contract_of(sparse_lu_src, "SparseLU");
    CHECK(lu.entries[0].enable.test(1));
    CHECK(lu.entries[0].enable.test(2));
}

TEST_CASE("explicit constructor annotations replace the guardedness rule") {
    ContractMap c =
        contract_of("class C { @EnableOnly(b) void C(); @Enable(b) void a(); void b(); }", "C");
    CHECK(c.entries[0].enable == ms(3, {2}));
    CHECK(c.entries[0].disable == ms(3, {0, 1}));
    CHECK(c.entries[0].pre == ms(3, {0}));

    // The constructor must decide every method's initial availability.
    auto kind = error_kind_of(
        [&] { contract_of("class C { @Enable(a) void C(); void a(); void b(); }", "C"); });
    CHECK(kind == ErrorKind::well_formedness);
}

TEST_CASE("constructor rules reject malformed classes") {
    CHECK(error_kind_of([&] { contract_of("class C { void C(); void C(); void a(); }", "C"); }) ==
          ErrorKind::spec_invalid);
    CHECK(error_kind_of([&] { contract_of("class C { void a(); void a(); }", "C"); }) ==
          ErrorKind::spec_invalid);
    CHECK(error_kind_of([&] { contract_of("class C { void C(); }", "C"); }) ==
          ErrorKind::spec_invalid);
}

TEST_CASE("check_well_formed reports overlap and constructor coverage violations") {
    ContractMap c;
    c.class_name = "C";
    c.alphabet = {"C", "a", "b"};
    c.entries = {BfaTriple{ms(3, {1}), ms(3, {0, 2}), ms(3, {0})},
                 BfaTriple{ms(3, {2}), ms(3, {2}), ms(3, {1})},
                 BfaTriple{ms(3, {}), ms(3, {}), ms(3, {2})}};
    auto violations = check_well_formed(c);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("a") != std::string::npos);

    c.entries[1] = BfaTriple{ms(3, {2}), ms(3, {}), ms(3, {1})};
    c.entries[0].disable = ms(3, {0});
    violations = check_well_formed(c);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("constructor") != std::string::npos);
}

TEST_CASE("subsumption accepts weakening and reports the first failing method") {
    const char *strict_src = "class A { @EnableOnly(b) void A(); @EnableOnly(b) void a(); "
                             "@EnableAll void b(); }";
    const char *loose_src = "class B { @EnableAll void B(); @EnableAll void a(); "
                            "@EnableAll void b(); }";
    ContractMap strict = contract_of(strict_src, "A");
    ContractMap loose = contract_of(loose_src, "B");

    CHECK(subsumes(strict, strict).subsumes);
    CHECK(subsumes(loose, strict).subsumes);

    SubsumeResult r = subsumes(strict, loose);
    CHECK(!r.subsumes);
    CHECK(r.failing_method == "A"); // constructor entry fails first

    // The set conditions agree with explicit language inclusion.
    CHECK(language_included(expand_dfa(strict), expand_dfa(loose)));
    CHECK(!language_included(expand_dfa(loose), expand_dfa(strict)));
}

TEST_CASE("subsumption requires matching method alphabets") {
    ContractMap a = contract_of("class A { void a(); @Enable(a) void b(); }", "A");
    ContractMap b = contract_of("class B { void a(); @Enable(a) void c(); }", "B");
    ContractMap c = contract_of("class C { void a(); @Enable(a) void b(); void d(); }", "C");

    CHECK(error_kind_of([&] { subsumes(a, b); }) == ErrorKind::alphabet_mismatch);
    CHECK(error_kind_of([&] { subsumes(a, c); }) == ErrorKind::alphabet_mismatch);

    // Differing class names alone are fine: only the method slots must match.
    ContractMap a2 = contract_of("class A2 { void a(); @Enable(a) void b(); }", "A2");
    CHECK(subsumes(a, a2).subsumes);
}

TEST_CASE("count_annotation_terms counts atomic @-terms") {
    Program p = test::parse(sparse_lu_src);
    CHECK(count_annotation_terms(*p.find_class("SparseLU")) == 4);

    Program chain = test::parse("class C { @Enable(s) void s(); void q(); }");
    CHECK(count_annotation_terms(*chain.find_class("C")) == 1);
}
