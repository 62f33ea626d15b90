#include "cantor/decompose.hpp"

namespace cantor {

namespace {

// Stems of length <= depth in scan order: shorter first, lexicographic
// within a length, restricted to traces of x (others have empty pieces).
std::vector<Word> scan_stems(const SafetyAutomaton& x, unsigned depth) {
    std::vector<Word> out;
    for (unsigned len = 0; len <= depth; ++len)
        for (const Word& w : truncation(x, len)) out.push_back(w);
    return out;
}

}  // namespace

DecompositionResult kernel_decompose(const Transducer& t, unsigned budget_depth,
                                     unsigned budget_rounds) {
    if (t.domain.empty())
        throw AmbientViolation("kernel_decompose: empty domain");

    DecompositionResult res;
    SafetyAutomaton cur = minimize(t.domain);
    unsigned round = 0;
    bool capped = false;

    while (!cur.empty()) {
        if (round >= budget_rounds) { capped = true; break; }
        ++round;
        bool removed = false;
        for (const Word& w : scan_stems(cur, budget_depth)) {
            SafetyAutomaton piece = boolean_op(BoolOp::Intersect,
                                               closed_from_clopen(ClopenSet({w})), cur);
            if (piece.empty()) continue;
            Transducer restricted = with_domain(t, piece);
            if (check_open(restricted).status != OpennessStatus::Open) continue;
            res.pieces.push_back({w, piece});
            res.trace.emplace_back(round, w);
            cur = minimize(subtract_clopen(cur, ClopenSet({w})));
            removed = true;
            if (cur.empty()) break;
        }
        if (!removed) break;
    }

    res.residual = cur;
    if (capped)
        res.status = DecompositionStatus::DepthCapped;
    else if (cur.empty())
        res.status = DecompositionStatus::FullyDecomposed;
    else {
        res.status = DecompositionStatus::ResidualRemains;
        res.residual_verdict = check_nowhere_open(t, cur, budget_depth);
    }

    // Post-hoc certificates.
    bool all_open = true;
    for (const auto& p : res.pieces)
        if (check_open(with_domain(t, p.piece)).status != OpennessStatus::Open) all_open = false;
    res.piecewise_open_certified = all_open && res.status == DecompositionStatus::FullyDecomposed;
    if (res.piecewise_open_certified) {
        InjectivityVerdict inj = is_injective(t);
        res.piecewise_homeomorphism = inj.injective && inj.saturated;
    }
    return res;
}

}  // namespace cantor
