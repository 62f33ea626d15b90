#include "cantor/table.hpp"

#include <algorithm>
#include <set>

namespace cantor {

FiniteStageMap::FiniteStageMap(unsigned depth, std::map<Word, Word> entries,
                               std::vector<Word> domain_stems)
    : depth_(depth), entries_(std::move(entries)), domain_stems_(std::move(domain_stems)) {
    if (depth_ == 0 || depth_ > 16) throw SemanticError("table depth out of range");
    for (const auto& [w, out] : entries_) {
        if (!is_binary_word(w) || !is_binary_word(out))
            throw SemanticError("table entry with non-binary letters");
        if (w.size() > depth_) throw SemanticError("table entry deeper than the table: " + w);
    }
    for (const Word& s : domain_stems_) {
        if (!is_binary_word(s) || s.size() > depth_)
            throw SemanticError("bad domain stem: " + s);
    }

    // Materialize the leaf set.
    std::set<Word> leafset;
    auto add_leaves_below = [&](const Word& stem) {
        std::vector<Word> frontier{stem};
        while (!frontier.empty()) {
            Word w = frontier.back();
            frontier.pop_back();
            if (w.size() == depth_) { leafset.insert(w); continue; }
            frontier.push_back(w + '0');
            frontier.push_back(w + '1');
        }
    };
    if (domain_stems_.empty()) add_leaves_below(Word{});
    else
        for (const Word& s : domain_stems_) add_leaves_below(s);
    leaves_.assign(leafset.begin(), leafset.end());

    for (const auto& [w, out] : entries_) {
        if (!in_domain(w)) throw SemanticError("table entry outside the domain: " + w);
        (void)out;
    }
    // Monotonicity along chains of listed entries.
    for (const auto& [w1, o1] : entries_)
        for (const auto& [w2, o2] : entries_)
            if (w1 != w2 && is_prefix(w1, w2) && !is_prefix(o1, o2))
                throw SemanticError("non-monotone table at " + w1 + " vs " + w2);
}

bool FiniteStageMap::in_domain(const Word& w) const {
    if (w.size() > depth_) return false;
    return std::any_of(leaves_.begin(), leaves_.end(),
                       [&](const Word& l) { return is_prefix(w, l); });
}

Word FiniteStageMap::output(const Word& w) const {
    Word best_out;
    std::size_t best_len = 0;
    bool found = false;
    for (const auto& [k, out] : entries_) {
        if (is_prefix(k, w) && (!found || k.size() >= best_len)) {
            best_out = out;
            best_len = k.size();
            found = true;
        }
    }
    return best_out;
}

std::vector<Word> FiniteStageMap::image_values() const {
    std::set<Word> vals;
    for (const Word& l : leaves_) vals.insert(output(l));
    return {vals.begin(), vals.end()};
}

std::vector<Word> FiniteStageMap::preimage_leaves(const Word& v) const {
    std::vector<Word> out;
    for (const Word& l : leaves_) {
        Word o = output(l);
        if (is_prefix(o, v) || is_prefix(v, o)) out.push_back(l);
    }
    return out;
}

std::vector<Word> FiniteStageMap::exact_preimage_leaves(const Word& v) const {
    std::vector<Word> out;
    for (const Word& l : leaves_)
        if (output(l) == v) out.push_back(l);
    return out;
}

bool FiniteStageMap::injective_at_stage() const {
    std::set<Word> seen;
    for (const Word& l : leaves_)
        if (!seen.insert(output(l)).second) return false;
    return true;
}

bool outputs_close(const Word& a, const Word& b, unsigned j) {
    std::size_t m = std::min<std::size_t>({j, a.size(), b.size()});
    return a.compare(0, m, b, 0, m) == 0;
}

bool table_restriction_open(const FiniteStageMap& t, const std::vector<Word>& part, unsigned j) {
    if (part.empty()) return true;
    std::set<Word> part_set(part.begin(), part.end());

    // Substems worth testing: prefixes of part leaves.
    std::set<Word> substems;
    for (const Word& l : part)
        for (std::size_t n = 0; n <= l.size(); ++n) substems.insert(l.substr(0, n));

    std::vector<Word> y_vals;
    for (const Word& l : part) y_vals.push_back(t.output(l));

    for (const Word& v : substems) {
        std::set<Word> inner_vals, outer_vals;
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (is_prefix(v, part[i])) inner_vals.insert(y_vals[i]);
        }
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (!is_prefix(v, part[i]) && !inner_vals.count(y_vals[i])) outer_vals.insert(y_vals[i]);
        }
        for (const Word& a : inner_vals)
            for (const Word& b : outer_vals)
                if (outputs_close(a, b, j)) return false;  // adherence from outside
    }
    return true;
}

NowhereOpenVerdict table_check_nowhere_open(const FiniteStageMap& t,
                                            const std::vector<Word>& z_leaves, unsigned depth) {
    NowhereOpenVerdict v;
    v.depth = depth;
    for (unsigned len = 0; len <= depth; ++len) {
        std::set<Word> stems;
        for (const Word& l : z_leaves) stems.insert(l.substr(0, std::min<std::size_t>(len, l.size())));
        for (const Word& w : stems) {
            if (w.size() != len) continue;
            std::vector<Word> part;
            for (const Word& l : z_leaves)
                if (is_prefix(w, l)) part.push_back(l);
            if (part.empty()) continue;
            if (table_restriction_open(t, part, depth)) {
                v.status = NowhereStatus::NotNowhereOpen;
                v.witness = w;
                v.depth = len;
                return v;
            }
        }
    }
    v.status = NowhereStatus::NowhereOpenUpToDepth;
    return v;
}

TableDecompositionResult table_decompose(const FiniteStageMap& t, unsigned budget_depth,
                                         unsigned budget_rounds, unsigned stage_depth) {
    TableDecompositionResult res;
    std::vector<Word> cur = t.leaves();
    unsigned round = 0;
    bool capped = false;

    while (!cur.empty()) {
        if (round >= budget_rounds) { capped = true; break; }
        ++round;
        bool removed = false;
        unsigned max_len = std::min<unsigned>(budget_depth, t.depth());
        for (unsigned len = 0; len <= max_len && !cur.empty(); ++len) {
            std::set<Word> stems;
            for (const Word& l : cur) stems.insert(l.substr(0, len));
            for (const Word& w : stems) {
                std::vector<Word> part, rest;
                for (const Word& l : cur)
                    (is_prefix(w, l) ? part : rest).push_back(l);
                if (part.empty()) continue;
                if (!table_restriction_open(t, part, stage_depth)) continue;
                res.pieces.push_back({w, part});
                cur = rest;
                removed = true;
                if (cur.empty()) break;
            }
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
        res.residual_verdict = table_check_nowhere_open(t, cur, stage_depth);
    }
    return res;
}

}  // namespace cantor
