#include "doctest.h"

#include <random>

#include "cantor/regset.hpp"
#include "helpers.hpp"

using namespace cantor;
using namespace cantor::tests;

namespace {

RegSet efin1() {
    // two states tracking the last letter; accept iff q1 leaves Inf
    RegSet e;
    e.trans = {{{0, 1}}, {{0, 1}}};
    e.init = 0;
    e.accept = AcceptFormula::negate(inf_atom(e, 1));
    return e;
}

}  // namespace

TEST_CASE("lasso membership in the finitely-many-ones set") {
    RegSet e = efin1();
    CHECK(member_lasso(Point("", "0"), e));
    CHECK(!member_lasso(Point("", "01"), e));
    CHECK(member_lasso(Point("11", "0"), e));
}

TEST_CASE("emptiness within cylinders") {
    RegSet e = efin1();
    CHECK(!is_empty_omega(e, ""));
    RegSet ce = combine(CombineOp::Complement, e);
    RegSet contradiction = combine(CombineOp::Intersect, e, &ce);
    CHECK(is_empty_omega(contradiction, ""));

    // accept = q0 in Inf and q1 in Inf on the last-letter automaton: within
    // [11] a lasso like 11(01)^w qualifies.
    RegSet both;
    both.trans = {{{0, 1}}, {{0, 1}}};
    both.init = 0;
    both.accept = AcceptFormula::conj(inf_atom(both, 0), inf_atom(both, 1));
    CHECK(!is_empty_omega(both, "11"));
    CHECK(member_lasso(Point("11", "01"), both));
}

TEST_CASE("closure computes the smallest closed superset") {
    RegSet e = efin1();
    CHECK(equals(closure(e), full_space()));
    CHECK(equals(closure(combine(CombineOp::Complement, e)), full_space()));

    // closed sets are closure-fixed
    RawAutomaton raw;
    raw.trans = {{0, 1}, {0, kNoState}};
    raw.init = 0;
    SafetyAutomaton no11 = prune(raw);
    CHECK(equals(closure(from_closed(no11)), no11));
}

TEST_CASE("closure is extensive, idempotent and monotone on samples") {
    std::mt19937 rng(60101);
    auto pts = sample_points(rng, 25);
    for (int i = 0; i < 40; ++i) {
        RegSet e = random_regset(rng, 6);
        SafetyAutomaton cl = closure(e);
        for (const Point& p : pts)
            if (member_lasso(p, e)) CHECK(member(p, cl));
        CHECK(equals(closure(from_closed(cl)), cl));
    }
}

TEST_CASE("closure distributes over unions and is monotone") {
    std::mt19937 rng(60102);
    for (int i = 0; i < 30; ++i) {
        RegSet e = random_regset(rng, 5);
        RegSet g = random_regset(rng, 5);
        RegSet u = combine(CombineOp::Union, e, &g);
        CHECK(equals(closure(u), boolean_op(BoolOp::Union, closure(e), closure(g))));
        // e is contained in the union, so its closure must be too
        CHECK(subset_of(closure(e), closure(u)));
        RegSet n = combine(CombineOp::Intersect, e, &g);
        CHECK(subset_of(closure(n), closure(e)));
    }
}

TEST_CASE("combine mirrors pointwise set algebra on sampled lassos") {
    std::mt19937 rng(60103);
    auto pts = sample_points(rng, 30);
    for (int i = 0; i < 30; ++i) {
        RegSet e = random_regset(rng, 5);
        RegSet g = random_regset(rng, 5);
        RegSet u = combine(CombineOp::Union, e, &g);
        RegSet n = combine(CombineOp::Intersect, e, &g);
        RegSet d = combine(CombineOp::Difference, e, &g);
        RegSet c = combine(CombineOp::Complement, e);
        for (const Point& p : pts) {
            bool pe = member_lasso(p, e), pg = member_lasso(p, g);
            CHECK(member_lasso(p, u) == (pe || pg));
            CHECK(member_lasso(p, n) == (pe && pg));
            CHECK(member_lasso(p, d) == (pe && !pg));
            CHECK(member_lasso(p, c) == !pe);
        }
    }
}

TEST_CASE("complement is an involution on membership") {
    std::mt19937 rng(60104);
    auto pts = sample_points(rng, 20);
    RegSet e = efin1();
    RegSet cc = combine(CombineOp::Complement, combine(CombineOp::Complement, e));
    for (const Point& p : pts) CHECK(member_lasso(p, e) == member_lasso(p, cc));
}

TEST_CASE("constructors from closed and clopen sets") {
    CHECK(member_lasso(Point("", "01"), from_clopen(ClopenSet({"0"}))));
    CHECK(!member_lasso(Point("1", "0"), from_clopen(ClopenSet({"0"}))));
    RegSet left = from_clopen(ClopenSet({"0"}));
    RegSet right = from_clopen(ClopenSet({"1"}));
    RegSet both = combine(CombineOp::Union, left, &right);
    CHECK(equals(closure(both), full_space()));
    RegSet nothing = from_closed(SafetyAutomaton{});
    RegSet e = efin1();
    CHECK(is_empty_omega(combine(CombineOp::Intersect, e, &nothing), ""));
}

TEST_CASE("emptiness agrees with a depth-8 word sweep") {
    std::mt19937 rng(60105);
    for (int i = 0; i < 25; ++i) {
        RegSet e = random_regset(rng, 5);
        auto trunc = truncation_omega(e, 8);
        std::set<Word> in(trunc.begin(), trunc.end());
        for (const Word& w : words_of(8)) CHECK(is_empty_omega(e, w) == !in.count(w));
    }
}
