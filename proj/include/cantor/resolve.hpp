// Resolvability of a regular point-set E relative to a closed ambient space:
// the derivative d(E,F) = cl(F /\ E) /\ cl(F \ E) is iterated from the
// ambient space down to a fixpoint. An empty fixpoint certifies that no
// nonempty closed F satisfies d(E,F) = F; a nonempty one is itself the
// counterexample witness.

#ifndef CANTOR_RESOLVE_HPP
#define CANTOR_RESOLVE_HPP

#include <vector>

#include "cantor/closed.hpp"
#include "cantor/regset.hpp"

namespace cantor {

/// cl_X(F /\ E) /\ cl_X(F \ E), relative closures realized as plain closure
/// intersected with the (closed) ambient space.
SafetyAutomaton derivative(const RegSet& e, const SafetyAutomaton& f, const SafetyAutomaton& ambient);

enum class ResolvabilityStatus { Resolvable, NotResolvable, Unknown };

struct ResolvabilityVerdict {
    ResolvabilityStatus status = ResolvabilityStatus::Unknown;
    unsigned steps = 0;                  // derivative applications performed
    SafetyAutomaton witness;             // nonempty fixpoint when NotResolvable
    std::vector<SafetyAutomaton> trace;  // F0 (ambient) onward, decreasing
};

ResolvabilityVerdict check_resolvable(const RegSet& e, const SafetyAutomaton& ambient,
                                      unsigned budget = 50);

}  // namespace cantor

#endif
