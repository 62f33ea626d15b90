// Word-level brute-force oracle. Engine results are truncated to depth k and
// compared against exhaustive computations over {0,1}^{<=k}; the brute
// truncations use a (state, visited-set) walk enumeration that shares no
// algorithmic machinery with the engine's SCC/hit-set analysis.

#ifndef CANTOR_ORACLE_HPP
#define CANTOR_ORACLE_HPP

#include <string>
#include <vector>

#include "cantor/regset.hpp"
#include "cantor/resolve.hpp"
#include "cantor/transducer.hpp"

namespace cantor {

struct DepthTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr unsigned kOracleMaxDepth = 12;

/// Brute truncation of a regular point-set: per length-k word, search for an
/// accepting lasso by walking (state, visited-set) pairs. SizeError when the
/// automaton is too large for exhaustive walking.
std::vector<Word> brute_truncation(const RegSet& e, unsigned k);

bool brute_empty(const RegSet& e, const Word& within);

/// Depth-k output prefixes by direct enumeration over input traces
/// (memoized on (state, domain state, letters still needed)).
std::vector<Word> brute_image(const Transducer& t, const SafetyAutomaton& f, unsigned k);

struct OracleReport {
    std::string kind;
    unsigned depth = 0;
    bool agree = false;       // oracle output equals the engine evaluation
    bool exact_equal = true;  // exact engine result truncation also matches
    std::string detail;
};

OracleReport compare_closure(const RegSet& e, unsigned k);
OracleReport compare_image(const Transducer& t, const SafetyAutomaton& f, unsigned k);
OracleReport compare_empty(const RegSet& e, const Word& within, unsigned k);
OracleReport compare_derivative(const RegSet& e, const SafetyAutomaton& f,
                                const SafetyAutomaton& ambient, unsigned k);
OracleReport compare_rel_open(const SafetyAutomaton& image_part, const SafetyAutomaton& image_all,
                              unsigned k);

}  // namespace cantor

#endif
