// General regular point-sets over Cantor space: a deterministic total
// automaton plus a Boolean acceptance predicate over the set of states
// visited infinitely often. The represented class is closed under all
// Boolean operations without determinization; complement just negates the
// predicate.

#ifndef CANTOR_REGSET_HPP
#define CANTOR_REGSET_HPP

#include <memory>
#include <string>
#include <vector>

#include "cantor/closed.hpp"
#include "cantor/word.hpp"

namespace cantor {

/// Acceptance formula over atoms; each atom fires iff Inf(run) intersects
/// its carrier set of states. Carriers keep product formulas evaluable
/// without rewriting atoms into exponentially many product states.
struct AcceptFormula {
    enum class Kind { True, False, Atom, Not, And, Or };
    Kind kind = Kind::False;
    int atom = -1;  // index into RegSet::carriers when kind == Atom
    std::vector<AcceptFormula> children;

    static AcceptFormula truth(bool v) { return AcceptFormula{v ? Kind::True : Kind::False, -1, {}}; }
    static AcceptFormula atom_of(int idx) { return AcceptFormula{Kind::Atom, idx, {}}; }
    static AcceptFormula negate(AcceptFormula f);
    static AcceptFormula conj(AcceptFormula a, AcceptFormula b);
    static AcceptFormula disj(AcceptFormula a, AcceptFormula b);

    /// Evaluate under the given atom valuation.
    bool eval(const std::vector<bool>& atom_true) const;
};

struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegSet {
    // Total deterministic automaton: trans[q][b] always a state.
    std::vector<std::array<int, 2>> trans;
    int init = 0;
    // carrier[i] = states on which atom i fires (atom true iff Inf meets it).
    std::vector<std::vector<int>> carriers;
    AcceptFormula accept;

    std::size_t size() const { return trans.size(); }
    int step(int q, int b) const { return trans[q][b]; }
    int run(const Word& w) const;
};

/// "q in Inf" atom over an explicit automaton state (used by parsers and
/// hand-built sets).
AcceptFormula inf_atom(RegSet& e, int state);

bool member_lasso(const Point& p, const RegSet& e);

/// Decides E /\ [within] = empty. Exponential only in the number of atoms
/// (capped; larger inputs are rejected with SizeError), polynomial in states.
bool is_empty_omega(const RegSet& e, const Word& within);

/// Topological closure as a pruned safety automaton: states are kept alive
/// exactly where some accepted run remains reachable.
SafetyAutomaton closure(const RegSet& e);

enum class CombineOp { Union, Intersect, Difference, Complement };

RegSet combine(CombineOp op, const RegSet& e, const RegSet* g = nullptr);

RegSet from_closed(const SafetyAutomaton& f);
RegSet from_clopen(const ClopenSet& u);
RegSet empty_regset();
RegSet full_regset();

/// Depth-k truncation { w : |w| = k, E /\ [w] nonempty }.
std::vector<Word> truncation_omega(const RegSet& e, std::size_t k);

}  // namespace cantor

#endif
