// Shared test utilities: fixture loading, word-level brute force, and the
// seeded random corpus every agreement run draws from.

#ifndef CANTOR_TESTS_HELPERS_HPP
#define CANTOR_TESTS_HELPERS_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cantor/closed.hpp"
#include "cantor/parser.hpp"
#include "cantor/regset.hpp"
#include "cantor/transducer.hpp"

namespace cantor::tests {

inline std::string fixture_path(const std::string& name) {
    return std::string(CANTOR_FIXTURES_DIR) + "/" + name;
}

inline Model load_fixture(const std::string& name) {
    return parse_spec_file(fixture_path(name));
}

inline std::vector<Word> words_upto(unsigned k) {
    std::vector<Word> out{Word{}};
    std::size_t start = 0;
    for (unsigned len = 1; len <= k; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = start; i < end; ++i) {
            out.push_back(out[i] + '0');
            out.push_back(out[i] + '1');
        }
        start = end;
    }
    return out;
}

inline std::vector<Word> words_of(unsigned k) {
    std::vector<Word> out{Word{}};
    for (unsigned len = 0; len < k; ++len) {
        std::vector<Word> next;
        for (const Word& w : out) {
            next.push_back(w + '0');
            next.push_back(w + '1');
        }
        out = std::move(next);
    }
    return out;
}

// Extensions of w among depth-k traces; a lower bound on the number of
// points of f in [w] once two traces diverge.
inline std::size_t trace_extensions(const SafetyAutomaton& f, const Word& w, unsigned k) {
    std::size_t n = 0;
    for (const Word& t : truncation(f, k))
        if (is_prefix(w, t)) ++n;
    return n;
}

// ---- seeded random corpus ----------------------------------------------

inline SafetyAutomaton random_closed(std::mt19937& rng, unsigned max_states) {
    std::uniform_int_distribution<unsigned> nd(1, max_states);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int attempt = 0; attempt < 50; ++attempt) {
        unsigned n = nd(rng);
        RawAutomaton raw;
        raw.trans.assign(n, {kNoState, kNoState});
        std::uniform_int_distribution<int> sd(0, static_cast<int>(n) - 1);
        for (unsigned q = 0; q < n; ++q)
            for (int b = 0; b < 2; ++b)
                if (coin(rng) != 0) raw.trans[q][b] = sd(rng);
        raw.init = 0;
        SafetyAutomaton f = prune(raw);
        if (!f.empty()) return f;
    }
    return full_space();
}

inline ClopenSet random_clopen(std::mt19937& rng, unsigned max_stems) {
    std::uniform_int_distribution<unsigned> cnt(1, max_stems);
    std::uniform_int_distribution<unsigned> len(1, 5);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<Word> stems;
    unsigned n = cnt(rng);
    for (unsigned i = 0; i < n; ++i) {
        Word w;
        unsigned l = len(rng);
        for (unsigned j = 0; j < l; ++j) w += static_cast<char>('0' + bit(rng));
        stems.push_back(w);
    }
    return ClopenSet(stems);
}

inline AcceptFormula random_formula(std::mt19937& rng, RegSet& e, unsigned n_states, int budget) {
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<int> sd(0, static_cast<int>(n_states) - 1);
    int k = budget <= 0 ? 0 : kind(rng);
    switch (k) {
        case 1: return AcceptFormula::negate(random_formula(rng, e, n_states, budget - 1));
        case 2:
            return AcceptFormula::conj(random_formula(rng, e, n_states, budget - 1),
                                       random_formula(rng, e, n_states, budget - 1));
        case 3:
            return AcceptFormula::disj(random_formula(rng, e, n_states, budget - 1),
                                       random_formula(rng, e, n_states, budget - 1));
        case 4: return AcceptFormula::truth(static_cast<bool>(sd(rng) % 2));
        default: return inf_atom(e, sd(rng));
    }
}

inline RegSet random_regset(std::mt19937& rng, unsigned max_states) {
    std::uniform_int_distribution<unsigned> nd(1, max_states);
    unsigned n = nd(rng);
    std::uniform_int_distribution<int> sd(0, static_cast<int>(n) - 1);
    RegSet e;
    e.trans.assign(n, {0, 0});
    for (unsigned q = 0; q < n; ++q)
        for (int b = 0; b < 2; ++b) e.trans[q][b] = sd(rng);
    e.init = 0;
    e.accept = random_formula(rng, e, n, 3);
    return e;
}

inline Transducer random_transducer(std::mt19937& rng, unsigned max_states) {
    std::uniform_int_distribution<unsigned> nd(1, max_states);
    std::uniform_int_distribution<int> outlen(0, 2);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int attempt = 0; attempt < 50; ++attempt) {
        unsigned n = nd(rng);
        std::uniform_int_distribution<int> sd(0, static_cast<int>(n) - 1);
        Transducer t;
        t.step.assign(n, {});
        for (unsigned q = 0; q < n; ++q)
            for (int b = 0; b < 2; ++b) {
                Word out;
                int l = outlen(rng);
                for (int j = 0; j < l; ++j) out += static_cast<char>('0' + bit(rng));
                t.step[q][b] = TransducerStep{sd(rng), out};
            }
        t.init = 0;
        t.domain = bit(rng) ? full_space() : random_closed(rng, max_states);
        try {
            check_productive(t);
            return t;
        } catch (const SemanticError&) {
        }
    }
    // Fall back to the identity machine.
    Transducer t;
    t.step.assign(1, {});
    t.step[0][0] = TransducerStep{0, "0"};
    t.step[0][1] = TransducerStep{0, "1"};
    t.init = 0;
    t.domain = full_space();
    return t;
}

// Lasso points used for sampling membership properties.
inline std::vector<Point> sample_points(std::mt19937& rng, unsigned count) {
    std::uniform_int_distribution<unsigned> hlen(0, 4), clen(1, 4);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<Point> out;
    while (out.size() < count) {
        Word h, c;
        unsigned hl = hlen(rng), cl = clen(rng);
        for (unsigned i = 0; i < hl; ++i) h += static_cast<char>('0' + bit(rng));
        for (unsigned i = 0; i < cl; ++i) c += static_cast<char>('0' + bit(rng));
        out.emplace_back(h, c);
    }
    return out;
}

}  // namespace cantor::tests

#endif
