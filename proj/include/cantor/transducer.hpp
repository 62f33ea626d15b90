// Continuous total maps X -> C as deterministic letter-driven transducers
// with a closed regular domain. Productivity (no reachable silent cycle over
// the live domain product) guarantees infinite outputs, hence a well-defined
// continuous map; images of closed sets are computed exactly by a subset
// construction over output prefixes.

#ifndef CANTOR_TRANSDUCER_HPP
#define CANTOR_TRANSDUCER_HPP

#include <optional>
#include <utility>

#include "cantor/closed.hpp"
#include "cantor/word.hpp"

namespace cantor {

struct DomainViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransducerStep {
    int dst = 0;
    Word out;
};

struct Transducer {
    std::vector<std::array<TransducerStep, 2>> step;  // total on letters
    int init = 0;
    SafetyAutomaton domain;

    std::size_t size() const { return step.size(); }
};

/// Throws SemanticError if a silent cycle is reachable inside the
/// transducer x domain product.
void check_productive(const Transducer& t);

/// Same machine over a (smaller) domain.
Transducer with_domain(const Transducer& t, SafetyAutomaton dom);

Point eval_point(const Transducer& t, const Point& p);

/// Exact image of a closed subset of the domain.
SafetyAutomaton image_closed(const Transducer& t, const SafetyAutomaton& f);

/// { x in X : f(x) in u }, clopen in X, returned as a closed set.
SafetyAutomaton preimage_clopen(const Transducer& t, const ClopenSet& u);

/// { x in X : f(x) = p } as a closed set.
SafetyAutomaton preimage_point(const Transducer& t, const Point& p);

struct InjectivityVerdict {
    bool injective = true;
    unsigned delay_budget = 0;
    bool saturated = false;  // search space exhausted within the budget
    std::optional<std::pair<Point, Point>> witness;  // two points, equal image
};

InjectivityVerdict is_injective(const Transducer& t, unsigned delay_budget = 16);

enum class OpennessStatus { Open, NotOpen, OpenUpToDepth };

struct OpennessVerdict {
    OpennessStatus status = OpennessStatus::Open;
    std::optional<Word> witness;  // stem whose image is not relatively open
    unsigned depth = 0;           // saturation depth, or the cap that was hit
};

/// Is f open as a map onto Y = f(X)? Stems are explored by increasing
/// depth; enumeration stops when the (transducer state, domain state,
/// Y-state) signature set saturates.
OpennessVerdict check_open(const Transducer& t, unsigned depth_cap = 12);

enum class NowhereStatus { NowhereOpenUpToDepth, NotNowhereOpen };

struct NowhereOpenVerdict {
    NowhereStatus status = NowhereStatus::NowhereOpenUpToDepth;
    std::optional<Word> witness;  // stem whose restriction is open
    unsigned depth = 0;
};

/// For every stem meeting Z (up to saturation or the cap), checks that the
/// restriction to [stem] /\ Z is not open.
NowhereOpenVerdict check_nowhere_open(const Transducer& t, const SafetyAutomaton& z,
                                      unsigned depth_cap = 12);

/// cl(Y \ I) /\ I = empty — the relative-openness test both check_open and
/// the oracle cross-validate.
bool relatively_open(const SafetyAutomaton& image_part, const SafetyAutomaton& image_all);

}  // namespace cantor

#endif
