#include "doctest.h"

#include <random>

#include "cantor/parser.hpp"
#include "helpers.hpp"

using namespace cantor;
using namespace cantor::tests;

TEST_CASE("well-formed blocks parse into the model") {
    Model m = parse_spec(
        "safety no11\n"
        "state a init\n"
        "state b\n"
        "edge a 0 a\n"
        "edge a 1 b\n"
        "edge b 0 a\n");
    REQUIRE(m.closed_sets.count("no11"));
    CHECK(member(Point("", "01"), m.closed_sets.at("no11")));
    CHECK(!member(Point("", "1"), m.closed_sets.at("no11")));
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_spec("safety x\nstate a init\nedge a 2 a\n");
        FAIL("expected a parse error");
    } catch (const SpecParseError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(parse_spec("state a init\n"), SpecParseError);
    CHECK_THROWS_AS(parse_spec("safety\n"), SpecParseError);
}

TEST_CASE("semantic errors: totality, productivity, monotonicity") {
    CHECK_THROWS_AS(parse_spec("regset e\n"
                               "state a init\n"
                               "edge a 0 a\n"
                               "accept true\n"),
                    SemanticError);  // non-total
    CHECK_THROWS_AS(parse_spec("transducer t\n"
                               "state a init\n"
                               "edge a 0 a eps\n"
                               "edge a 1 a 1\n"),
                    SemanticError);  // silent reachable cycle
    CHECK_THROWS_AS(parse_spec("table t\n"
                               "depth 3\n"
                               "domain full\n"
                               "map 0 11\n"
                               "map 01 00\n"),
                    SemanticError);  // non-monotone
    CHECK_THROWS_AS(parse_spec("regset e\n"
                               "state a init\n"
                               "edge a 0 a\n"
                               "edge a 1 a\n"
                               "accept inf(zz)\n"),
                    SemanticError);  // undefined name
}

TEST_CASE("set expressions evaluate over the model") {
    Model m = load_fixture("machines.spec");
    RegSet never = eval_regset_expr(m, "inter(cyl(0), compl(cyl(0)))");
    CHECK(is_empty_omega(never, ""));
    RegSet efin = eval_regset_expr(m, "regset:Efin1");
    CHECK(member_lasso(Point("", "0"), efin));
    SafetyAutomaton amb = eval_closed_expr(m, "inter(closed:full, cyl(0))");
    CHECK(equals(amb, closed_from_clopen(ClopenSet({"0"}))));
    CHECK_THROWS_AS(eval_closed_expr(m, "compl(cyl(0))"), SemanticError);
    CHECK_THROWS_AS(eval_regset_expr(m, "regset:nope"), SemanticError);
}

TEST_CASE("serialize then parse is the identity on denotations") {
    Model m = load_fixture("machines.spec");
    Model back = parse_spec(serialize_model(m));
    for (const auto& [name, f] : m.closed_sets)
        CHECK(equals(back.closed_sets.at(name), f));
    std::mt19937 rng(123456);
    auto pts = sample_points(rng, 30);
    for (const auto& [name, e] : m.regsets) {
        const RegSet& b = back.regsets.at(name);
        for (const Point& p : pts) CHECK(member_lasso(p, e) == member_lasso(p, b));
    }
    for (const auto& [name, t] : m.transducers) {
        const Transducer& b = back.transducers.at(name);
        CHECK(equals(b.domain, t.domain));
        for (const Point& p : pts)
            if (member(p, t.domain)) CHECK(eval_point(b, p) == eval_point(t, p));
    }
}

TEST_CASE("serialized random regsets survive the round trip") {
    std::mt19937 rng(123457);
    auto pts = sample_points(rng, 20);
    for (int i = 0; i < 20; ++i) {
        Model m;
        m.regsets.emplace("r", random_regset(rng, 5));
        Model back = parse_spec(serialize_model(m));
        for (const Point& p : pts)
            CHECK(member_lasso(p, m.regsets.at("r")) == member_lasso(p, back.regsets.at("r")));
    }
}

TEST_CASE("serialized random transducers survive the round trip") {
    std::mt19937 rng(123458);
    auto pts = sample_points(rng, 15);
    for (int i = 0; i < 15; ++i) {
        Model m;
        m.transducers.emplace("t", random_transducer(rng, 4));
        Model back = parse_spec(serialize_model(m));
        const Transducer& a = m.transducers.at("t");
        const Transducer& b = back.transducers.at("t");
        CHECK(equals(a.domain, b.domain));
        for (const Point& p : pts)
            if (member(p, a.domain)) CHECK(eval_point(a, p) == eval_point(b, p));
    }
}

TEST_CASE("tables round-trip exactly") {
    Model m = load_fixture("nowhere3.spec");
    Model back = parse_spec(serialize_model(m));
    const FiniteStageMap& a = m.tables.at("nowhere3");
    const FiniteStageMap& b = back.tables.at("nowhere3");
    CHECK(a.depth() == b.depth());
    CHECK(a.entries() == b.entries());
    CHECK(a.leaves() == b.leaves());
}
