#include "cantor/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace cantor {

namespace {

constexpr std::size_t kBruteMaxStates = 20;

void check_depth(unsigned k) {
    if (k > kOracleMaxDepth) throw DepthTooLarge("oracle depth exceeds " + std::to_string(kOracleMaxDepth));
}

// All states with an accepting lasso through them, by exhaustive
// (state, visited-set) walk enumeration from every start state.
std::vector<bool> brute_live(const RegSet& e) {
    std::size_t n = e.size();
    if (n > kBruteMaxStates)
        throw SizeError("brute oracle limited to automata with <= " +
                        std::to_string(kBruteMaxStates) + " states");

    std::vector<bool> atom_of_state_cache;
    auto atom_hits = [&](std::uint64_t visited) {
        std::vector<bool> atom_true(e.carriers.size(), false);
        for (std::size_t a = 0; a < e.carriers.size(); ++a)
            for (int s : e.carriers[a])
                if (visited & (std::uint64_t(1) << s)) { atom_true[a] = true; break; }
        return atom_true;
    };

    std::vector<bool> has_lasso(n, false);
    for (std::size_t q0 = 0; q0 < n; ++q0) {
        // Walks from q0; a return to q0 closes a candidate Inf set.
        std::set<std::pair<int, std::uint64_t>> seen;
        std::deque<std::pair<int, std::uint64_t>> work;
        work.push_back({static_cast<int>(q0), 0});
        seen.insert({static_cast<int>(q0), 0});
        bool found = false;
        while (!work.empty() && !found) {
            auto [q, visited] = work.front();
            work.pop_front();
            for (int b = 0; b < 2 && !found; ++b) {
                int t = e.step(q, b);
                std::uint64_t v2 = visited | (std::uint64_t(1) << t);
                if (t == static_cast<int>(q0)) {
                    if (e.accept.eval(atom_hits(v2))) found = true;
                }
                if (seen.insert({t, v2}).second) work.push_back({t, v2});
            }
        }
        has_lasso[q0] = found;
    }

    // A state is live iff it reaches some lasso state.
    std::vector<bool> live = has_lasso;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t q = 0; q < n; ++q) {
            if (live[q]) continue;
            for (int b = 0; b < 2; ++b)
                if (live[e.step(static_cast<int>(q), b)]) { live[q] = true; changed = true; }
        }
    }
    return live;
}

std::vector<Word> all_words(unsigned k) {
    std::vector<Word> out{Word{}};
    for (unsigned i = 0; i < k; ++i) {
        std::vector<Word> next;
        next.reserve(out.size() * 2);
        for (const Word& w : out) {
            next.push_back(w + '0');
            next.push_back(w + '1');
        }
        out = std::move(next);
    }
    return out;
}

std::vector<Word> intersect_sorted(std::vector<Word> a, std::vector<Word> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<Word> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Word> sorted(std::vector<Word> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Brute truncation where exhaustive walking is feasible, engine truncation
// beyond the size cap.
std::vector<Word> trunc_oracle(const RegSet& e, unsigned k) {
    if (e.size() <= kBruteMaxStates) return brute_truncation(e, k);
    return truncation_omega(e, k);
}

}  // namespace

std::vector<Word> brute_truncation(const RegSet& e, unsigned k) {
    check_depth(k);
    std::vector<bool> live = brute_live(e);
    std::vector<Word> out;
    for (const Word& w : all_words(k))
        if (live[e.run(w)]) out.push_back(w);
    return out;
}

bool brute_empty(const RegSet& e, const Word& within) {
    std::vector<bool> live = brute_live(e);
    return !live[e.run(within)];
}

std::vector<Word> brute_image(const Transducer& t, const SafetyAutomaton& f, unsigned k) {
    check_depth(k);
    if (f.empty()) return {};
    // outs(q, d, j): the j-letter output prefixes reachable from (q, d).
    std::map<std::tuple<int, int, unsigned>, std::set<Word>> memo;
    std::set<std::tuple<int, int, unsigned>> in_progress;
    std::function<const std::set<Word>&(int, int, unsigned)> outs =
        [&](int q, int d, unsigned j) -> const std::set<Word>& {
        auto key = std::make_tuple(q, d, j);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        if (!in_progress.insert(key).second)
            throw std::logic_error("brute_image: silent cycle in a productive machine");
        std::set<Word> result;
        if (j == 0) {
            result.insert(Word{});
        } else {
            for (int b = 0; b < 2; ++b) {
                int dn = f.step(d, b);
                if (dn == kNoState) continue;
                const TransducerStep& st = t.step[q][b];
                if (st.out.size() >= j) {
                    result.insert(st.out.substr(0, j));
                } else {
                    for (const Word& rest : outs(st.dst, dn, j - static_cast<unsigned>(st.out.size())))
                        result.insert(st.out + rest);
                }
            }
        }
        in_progress.erase(key);
        return memo.emplace(key, std::move(result)).first->second;
    };
    const std::set<Word>& got = outs(t.init, f.init, k);
    return {got.begin(), got.end()};
}

OracleReport compare_closure(const RegSet& e, unsigned k) {
    check_depth(k);
    OracleReport r{"closure", k, false, true, ""};
    std::vector<Word> oracle = sorted(brute_truncation(e, k));
    std::vector<Word> engine = sorted(truncation(closure(e), k));
    r.agree = oracle == engine;
    if (!r.agree) r.detail = "closure truncation mismatch";
    return r;
}

OracleReport compare_image(const Transducer& t, const SafetyAutomaton& f, unsigned k) {
    check_depth(k);
    OracleReport r{"image", k, false, true, ""};
    std::vector<Word> oracle = sorted(brute_image(t, f, k));
    std::vector<Word> engine = sorted(truncation(image_closed(t, f), k));
    r.agree = oracle == engine;
    if (!r.agree) r.detail = "image truncation mismatch";
    return r;
}

OracleReport compare_empty(const RegSet& e, const Word& within, unsigned k) {
    OracleReport r{"empty", k, false, true, ""};
    r.agree = brute_empty(e, within) == is_empty_omega(e, within);
    if (!r.agree) r.detail = "emptiness verdict mismatch";
    return r;
}

OracleReport compare_derivative(const RegSet& e, const SafetyAutomaton& f,
                                const SafetyAutomaton& ambient, unsigned k) {
    check_depth(k);
    OracleReport r{"derivative", k, false, true, ""};

    RegSet f_reg = from_closed(f);
    RegSet inter = combine(CombineOp::Intersect, f_reg, &e);
    RegSet compl_e = combine(CombineOp::Complement, e);
    RegSet minus = combine(CombineOp::Intersect, f_reg, &compl_e);

    // Oracle: word-level closure (identity on truncations) of the two parts,
    // intersected with each other and the ambient truncation. The part
    // truncations come from the exhaustive walk when the products are small.
    std::vector<Word> t_inter = trunc_oracle(inter, k);
    std::vector<Word> t_minus = trunc_oracle(minus, k);
    std::vector<Word> t_amb = truncation(ambient, k);
    std::vector<Word> oracle = intersect_sorted(intersect_sorted(t_inter, t_minus), t_amb);

    // Engine evaluation at the same depth, from the engine's closure
    // automata.
    std::vector<Word> e_inter = truncation(closure(inter), k);
    std::vector<Word> e_minus = truncation(closure(minus), k);
    std::vector<Word> engine = intersect_sorted(intersect_sorted(e_inter, e_minus), t_amb);

    r.agree = oracle == engine;
    if (!r.agree) r.detail = "derivative composition mismatch";

    // The exact derivative is contained in the depth-k composition; record
    // whether it coincides at this depth.
    std::vector<Word> exact = sorted(truncation(derivative(e, f, ambient), k));
    if (!std::includes(oracle.begin(), oracle.end(), exact.begin(), exact.end())) {
        r.agree = false;
        r.detail = "exact derivative escapes the depth-k composition";
    }
    r.exact_equal = exact == oracle;
    return r;
}

OracleReport compare_rel_open(const SafetyAutomaton& image_part, const SafetyAutomaton& image_all,
                              unsigned k) {
    check_depth(k);
    OracleReport r{"rel_open", k, false, true, ""};
    RegSet y = from_closed(image_all);
    RegSet i = from_closed(image_part);
    RegSet diff = combine(CombineOp::Difference, y, &i);
    std::vector<Word> t_diff = trunc_oracle(diff, k);
    std::vector<Word> t_part = truncation(image_part, k);
    bool oracle_nonempty = !intersect_sorted(t_diff, t_part).empty();
    bool engine_nonempty = !relatively_open(image_part, image_all);
    r.agree = oracle_nonempty == engine_nonempty;
    // Exact adherence always shows up in every truncation.
    if (engine_nonempty && !oracle_nonempty) {
        r.exact_equal = false;
        r.detail = "exact adherence missing from the depth-k test";
    }
    if (!r.agree && r.detail.empty()) r.detail = "relative-openness verdict mismatch";
    return r;
}

}  // namespace cantor
