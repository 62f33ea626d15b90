// Closed regular subsets of Cantor space as pruned deterministic safety
// automata. A missing edge forbids that letter; the denotation is the set of
// infinite paths from the initial state. All exposed constructors prune, so
// the empty set is exactly the automaton with no states.

#ifndef CANTOR_CLOSED_HPP
#define CANTOR_CLOSED_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cantor/word.hpp"

namespace cantor {

constexpr int kNoState = -1;

/// Pruned deterministic partial automaton over {0,1}.
struct SafetyAutomaton {
    // trans[q][b] is the successor of state q on letter b, or kNoState.
    std::vector<std::array<int, 2>> trans;
    int init = kNoState;

    bool empty() const { return trans.empty(); }
    std::size_t size() const { return trans.size(); }

    int step(int q, int b) const { return trans[q][b]; }

    /// State reached on w from init, or kNoState when w is not a trace.
    int run(const Word& w) const;
};

struct RawAutomaton {
    std::vector<std::array<int, 2>> trans;
    int init = 0;
};

/// Remove dead-end and unreachable states; empty automaton iff no infinite
/// path survives.
SafetyAutomaton prune(const RawAutomaton& raw);

bool is_empty(const SafetyAutomaton& f);

bool member(const Point& p, const SafetyAutomaton& f);

enum class BoolOp { Intersect, Union };

SafetyAutomaton boolean_op(BoolOp kind, const SafetyAutomaton& f, const SafetyAutomaton& g);

/// Set difference f minus a clopen set (still closed).
SafetyAutomaton subtract_clopen(const SafetyAutomaton& f, const ClopenSet& u);

/// Denotation equality via synchronized traversal of the pruned automata.
bool equals(const SafetyAutomaton& f, const SafetyAutomaton& g);

/// True iff f is a subset of g.
bool subset_of(const SafetyAutomaton& f, const SafetyAutomaton& g);

/// Hopcroft/Moore quotient; keeps iterated constructions small.
SafetyAutomaton minimize(const SafetyAutomaton& f);

/// F minus its isolated points (one Cantor–Bendixson step).
SafetyAutomaton cb_derivative(const SafetyAutomaton& f);

struct PerfectKernelResult {
    SafetyAutomaton kernel;
    unsigned rank = 0;       // number of derivative applications until fixpoint
    bool countable = false;  // kernel empty
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an argument escapes the closed set it must live in.
struct AmbientViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PerfectKernelResult perfect_kernel(const SafetyAutomaton& f, unsigned budget = 64);

// Constructors for common sets.
SafetyAutomaton full_space();
SafetyAutomaton closed_from_clopen(const ClopenSet& u);
SafetyAutomaton closed_singleton(const Point& p);

/// All length-k traces; the depth-k truncation of the denotation.
std::vector<Word> truncation(const SafetyAutomaton& f, std::size_t k);

/// Lexicographically least point of a nonempty closed set.
Point least_point(const SafetyAutomaton& f);

/// Lexicographically ordered distinct points of f, at most `count` of them
/// (f may have fewer or infinitely many; enumeration is leftmost-first).
std::vector<Point> least_points(const SafetyAutomaton& f, std::size_t count);

}  // namespace cantor

#endif
