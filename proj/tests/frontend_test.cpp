#include "doctest.h"

#include <string>

#include "tsa/cfg.hpp"
#include "tsa/lexer.hpp"
#include "tsa/parser.hpp"
#include "tsa/resolve.hpp"

#include "test_util.hpp"

using namespace tsa;
using test::error_kind_of;

namespace {

// Count of nodes with a given kind.
std::size_t count_kind(const Cfg &cfg, CfgNodeKind kind) {
    std::size_t n = 0;
    for (const auto &node : cfg.nodes)
        if (node.kind == kind) ++n;
    return n;
}

} // namespace

TEST_CASE("lexer tracks locations and skips comments") {
    auto tokens = lex("class C { // comment until end of line\n  void m();\n}", "f.tsl");
    REQUIRE(tokens.size() == 10); // class C { void m ( ) ; } eof
    CHECK(tokens[0].kind == TokenKind::kw_class);
    CHECK(tokens[0].loc.line == 1);
    CHECK(tokens[0].loc.col == 1);
    CHECK(tokens[3].kind == TokenKind::kw_void);
    CHECK(tokens[3].loc.line == 2);
    CHECK(tokens[3].loc.col == 3);
    CHECK(tokens.back().kind == TokenKind::eof);

    CHECK(error_kind_of([] { lex("class C { $ }", "f.tsl"); }) == ErrorKind::syntax);
}

TEST_CASE("pretty-printing a parsed program is stable") {
    const char *src = R"(
class Res {
    @EnableOnly(use)
    void Res();
    @Enable(use) @Disable(open)
    void open(Res other);
    void use();
}

class Wrap {
    Res r;
    Res backup;
    void go(Res arg) {
        this.r.use();
        if (?) {
            this.r.open(arg);
        } else {
            loop {
                this.backup.use();
            }
        }
    }
}

void main01() {
    Res a;
    Wrap w;
    w.go(a);
}
)";
    std::string once = pretty(parse_program(src, "f.tsl"));
    std::string twice = pretty(parse_program(once, "f.tsl"));
    CHECK(once == twice);
    CHECK(once.find("@EnableOnly(use)") != std::string::npos);
    CHECK(once.find("loop {") != std::string::npos);
}

TEST_CASE("parser rejects malformed input") {
    CHECK(error_kind_of([] { parse_program("class C { void m() }", "f.tsl"); }) ==
          ErrorKind::syntax); // declaration needs ';' or a body
    CHECK(error_kind_of([] { parse_program("class C { @Bogus void m(); }", "f.tsl"); }) ==
          ErrorKind::syntax);
    CHECK(error_kind_of([] { parse_program("class C { @Enable void m(); }", "f.tsl"); }) ==
          ErrorKind::syntax); // @Enable needs a name list
    CHECK(error_kind_of([] { parse_program("class C { @EnableAll(m) void m(); }", "f.tsl"); }) ==
          ErrorKind::syntax); // @EnableAll takes none
    CHECK(error_kind_of([] { parse_program("class C { void m() { } X x; }", "f.tsl"); }) ==
          ErrorKind::syntax); // fields must precede methods
    CHECK(error_kind_of([] { parse_program("void f() { x.m() }", "f.tsl"); }) ==
          ErrorKind::syntax);
}

TEST_CASE("parse errors carry file, line and column") {
    try {
        parse_program("class C {\n  void m(;\n}", "f.tsl");
        FAIL("expected a syntax error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::syntax);
        CHECK(e.loc().file == "f.tsl");
        CHECK(e.loc().line == 2);
        CHECK(e.loc().col == 10);
    }
}

TEST_CASE("merge_programs combines files and rejects duplicates") {
    Program a = parse_program("class A { void m(); @Enable(m) void k(); }", "a.tsl");
    Program b = parse_program("void f() { A x; x.m(); }", "b.tsl");
    merge_programs(a, std::move(b));
    CHECK(a.classes.size() == 1);
    CHECK(a.functions.size() == 1);

    Program dup = parse_program("class A { void other(); void p(); }", "c.tsl");
    CHECK(error_kind_of([&] { merge_programs(a, std::move(dup)); }) ==
          ErrorKind::name_resolution);
}

TEST_CASE("straight-line bodies become a chain of call nodes") {
    ProgramInfo info = test::resolve(R"(
class R {
    @Enable(use) void use();
}

void f() {
    R r;
    r.use();
    r.use();
}
)");
    const Cfg *cfg = info.find_cfg("::f");
    REQUIRE(cfg != nullptr);
    CHECK(cfg->nodes.size() == 5); // entry, ctor, two calls, exit
    CHECK(count_kind(*cfg, CfgNodeKind::call) == 3);
    CHECK(cfg->rpo.size() == 5);
    CHECK(cfg->rpo.front() == cfg->entry);
    CHECK(cfg->rpo.back() == cfg->exit);

    const CfgNode &ctor = cfg->nodes[cfg->rpo[1]];
    CHECK(ctor.is_ctor);
    CHECK(ctor.callee_class == "R");
    CHECK(ctor.callee_method == "R");
    CHECK(ctor.receiver.str() == "r");

    const CfgNode &use = cfg->nodes[cfg->rpo[2]];
    CHECK(!use.is_ctor);
    CHECK(use.callee_method == "use");
}

TEST_CASE("branches and loops shape the graph") {
    ProgramInfo info = test::resolve(R"(
class R {
    @Enable(use) void use();
}

void f() {
    R r;
    if (?) {
        r.use();
    } else {
        r.use();
    }
    if (?) {
        r.use();
    }
    loop {
        r.use();
    }
}
)");
    const Cfg *cfg = info.find_cfg("::f");
    REQUIRE(cfg != nullptr);
    CHECK(count_kind(*cfg, CfgNodeKind::branch_split) == 2);
    CHECK(count_kind(*cfg, CfgNodeKind::merge) == 2);
    CHECK(count_kind(*cfg, CfgNodeKind::loop_head) == 1);

    for (std::uint32_t i = 0; i < cfg->nodes.size(); ++i) {
        const CfgNode &n = cfg->nodes[i];
        if (n.kind == CfgNodeKind::branch_split) CHECK(n.succs.size() == 2);
        if (n.kind == CfgNodeKind::merge) CHECK(n.preds.size() == 2);
        if (n.kind == CfgNodeKind::loop_head) {
            CHECK(n.preds.size() == 2); // fall-in plus back edge
            // the loop head comes before its body in reverse postorder
            auto pos = [&](std::uint32_t node) {
                for (std::size_t p = 0; p < cfg->rpo.size(); ++p)
                    if (cfg->rpo[p] == node) return p;
                return cfg->rpo.size();
            };
            CHECK(pos(i) < pos(n.succs[0]));
        }
    }
}

TEST_CASE("composed classes get a synthetic constructor over their fields") {
    ProgramInfo info = test::resolve(R"(
class R {
    @Enable(use) void use();
}

class W {
    R first;
    R second;
    void go() {
        this.first.use();
    }
}
)");
    const Cfg *ctor = info.find_cfg("W::W");
    REQUIRE(ctor != nullptr);
    CHECK(ctor->nodes.size() == 4); // entry, two field constructions, exit
    CHECK(ctor->nodes[1].is_ctor);
    CHECK(ctor->nodes[1].receiver.str() == "this.first");
    CHECK(ctor->nodes[2].receiver.str() == "this.second");

    const Cfg *go = info.find_cfg("W::go");
    REQUIRE(go != nullptr);
    CHECK(go->owner_class == "W");
    CHECK(count_kind(*go, CfgNodeKind::call) == 1);
}

TEST_CASE("name and type errors are rejected during lowering") {
    auto bad = [](const char *src) { return error_kind_of([&] { test::resolve(src); }); };

    CHECK(bad("void f() { Missing x; }") == ErrorKind::name_resolution);
    CHECK(bad("class R { void m(); @Enable(m) void k(); } void f() { R r; r.nope(); }") ==
          ErrorKind::unknown_method_name);
    CHECK(bad("class R { void m(); @Enable(m) void k(); } void f() { R r; r.m(r); }") ==
          ErrorKind::type_error);
    CHECK(bad("class R { void m(R other); @Enable(m) void k(); } "
              "class S { void p() { } } "
              "void f() { R r; S s; r.m(s); }") == ErrorKind::type_error);
    CHECK(bad("class R { void m(); @Enable(m) void k(); } void f() { R r; r.R(); }") ==
          ErrorKind::name_resolution);
    CHECK(bad("class R { void m(); @Enable(m) void k(); } void f() { R r; R r; }") ==
          ErrorKind::name_resolution);
    CHECK(bad("class R { void m(); @Enable(m) void k(); } "
              "void f() { R r; if (?) { R r; } }") == ErrorKind::name_resolution);
    CHECK(bad("void f() { x.m(); }") == ErrorKind::name_resolution);
    CHECK(bad("void f() { this.m(); }") == ErrorKind::name_resolution);
    CHECK(bad("class S { void p() { } } void f() { S s; s.q.m(); }") ==
          ErrorKind::name_resolution);
}

TEST_CASE("class shape rules are enforced") {
    auto bad = [](const char *src) { return error_kind_of([&] { test::resolve(src); }); };

    // Annotated classes carry no fields and no bodies.
    CHECK(bad("class R { R f; void m(); @Enable(m) void k(); }") == ErrorKind::spec_invalid);
    CHECK(bad("class R { @EnableAll void m() { } }") == ErrorKind::spec_invalid);
    // Unannotated classes define every method and never their own constructor.
    CHECK(bad("class S { void p(); }") == ErrorKind::spec_invalid);
    CHECK(bad("class S { void S() { } void p() { } }") == ErrorKind::spec_invalid);
    // Duplicate declarations.
    CHECK(bad("class S { void p() { } } class S { void q() { } }") ==
          ErrorKind::name_resolution);
    CHECK(bad("void f() { } void f() { }") == ErrorKind::name_resolution);
}
