#include "cantor/closed.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace cantor {

int SafetyAutomaton::run(const Word& w) const {
    if (empty()) return kNoState;
    int q = init;
    for (char ch : w) {
        q = trans[q][ch - '0'];
        if (q == kNoState) return kNoState;
    }
    return q;
}

SafetyAutomaton prune(const RawAutomaton& raw) {
    std::size_t n = raw.trans.size();
    if (n == 0 || raw.init < 0 || raw.init >= static_cast<int>(n)) return SafetyAutomaton{};

    // Iteratively drop states with no outgoing edge into the live region.
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t q = 0; q < n; ++q) {
            if (!alive[q]) continue;
            bool has_edge = false;
            for (int b = 0; b < 2; ++b) {
                int t = raw.trans[q][b];
                if (t != kNoState && t >= 0 && t < static_cast<int>(n) && alive[t]) has_edge = true;
            }
            if (!has_edge) { alive[q] = false; changed = true; }
        }
    }
    if (!alive[raw.init]) return SafetyAutomaton{};

    // Restrict to states reachable from init within the live region, BFS
    // order so the numbering is canonical for a given input.
    std::vector<int> id(n, kNoState);
    std::vector<int> order;
    std::queue<int> bfs;
    id[raw.init] = 0;
    order.push_back(raw.init);
    bfs.push(raw.init);
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (int b = 0; b < 2; ++b) {
            int t = raw.trans[q][b];
            if (t == kNoState || t < 0 || t >= static_cast<int>(n) || !alive[t]) continue;
            if (id[t] == kNoState) {
                id[t] = static_cast<int>(order.size());
                order.push_back(t);
                bfs.push(t);
            }
        }
    }

    SafetyAutomaton out;
    out.init = 0;
    out.trans.resize(order.size(), {kNoState, kNoState});
    for (std::size_t i = 0; i < order.size(); ++i) {
        int q = order[i];
        for (int b = 0; b < 2; ++b) {
            int t = raw.trans[q][b];
            if (t != kNoState && t >= 0 && t < static_cast<int>(n) && alive[t])
                out.trans[i][b] = id[t];
        }
    }
    return out;
}

bool is_empty(const SafetyAutomaton& f) {
    return f.empty();
}

bool member(const Point& p, const SafetyAutomaton& f) {
    if (f.empty()) return false;
    int q = f.init;
    for (char ch : p.head) {
        q = f.step(q, ch - '0');
        if (q == kNoState) return false;
    }
    std::set<std::pair<int, std::size_t>> seen;
    std::size_t pos = 0;
    while (seen.insert({q, pos}).second) {
        q = f.step(q, p.cycle[pos] - '0');
        if (q == kNoState) return false;
        pos = (pos + 1) % p.cycle.size();
    }
    return true;
}

namespace {

// Product helper: encodes optional component states; `sink` means the
// component has already died.
struct PairKey {
    int a, b;
    bool operator<(const PairKey& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
};

}  // namespace

SafetyAutomaton boolean_op(BoolOp kind, const SafetyAutomaton& f, const SafetyAutomaton& g) {
    if (kind == BoolOp::Intersect) {
        if (f.empty() || g.empty()) return SafetyAutomaton{};
        std::map<PairKey, int> id;
        std::vector<PairKey> states;
        RawAutomaton raw;
        auto intern = [&](PairKey k) {
            auto it = id.find(k);
            if (it != id.end()) return it->second;
            int i = static_cast<int>(states.size());
            id.emplace(k, i);
            states.push_back(k);
            raw.trans.push_back({kNoState, kNoState});
            return i;
        };
        raw.init = intern({f.init, g.init});
        for (std::size_t i = 0; i < states.size(); ++i) {
            PairKey s = states[i];
            for (int b = 0; b < 2; ++b) {
                int ta = f.step(s.a, b);
                int tb = g.step(s.b, b);
                if (ta == kNoState || tb == kNoState) continue;
                raw.trans[i][b] = intern({ta, tb});
            }
        }
        return prune(raw);
    }

    // Union via product of totalized components: a run survives as long as
    // at least one component is still tracing.
    if (f.empty()) return g;
    if (g.empty()) return f;
    const int deadA = static_cast<int>(f.size());
    const int deadB = static_cast<int>(g.size());
    std::map<PairKey, int> id;
    std::vector<PairKey> states;
    RawAutomaton raw;
    auto intern = [&](PairKey k) {
        auto it = id.find(k);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(states.size());
        id.emplace(k, i);
        states.push_back(k);
        raw.trans.push_back({kNoState, kNoState});
        return i;
    };
    raw.init = intern({f.init, g.init});
    for (std::size_t i = 0; i < states.size(); ++i) {
        PairKey s = states[i];
        for (int b = 0; b < 2; ++b) {
            int ta = (s.a == deadA) ? deadA : f.step(s.a, b);
            int tb = (s.b == deadB) ? deadB : g.step(s.b, b);
            if (ta == kNoState) ta = deadA;
            if (tb == kNoState) tb = deadB;
            if (ta == deadA && tb == deadB) continue;
            raw.trans[i][b] = intern({ta, tb});
        }
    }
    return prune(raw);
}

SafetyAutomaton subtract_clopen(const SafetyAutomaton& f, const ClopenSet& u) {
    if (f.empty() || u.is_empty()) return f;
    if (u.is_full()) return SafetyAutomaton{};
    return boolean_op(BoolOp::Intersect, f, closed_from_clopen(u.complement()));
}

bool equals(const SafetyAutomaton& f, const SafetyAutomaton& g) {
    if (f.empty() || g.empty()) return f.empty() == g.empty();
    std::set<PairKey> seen;
    std::deque<PairKey> queue{{f.init, g.init}};
    seen.insert({f.init, g.init});
    while (!queue.empty()) {
        PairKey s = queue.front();
        queue.pop_front();
        for (int b = 0; b < 2; ++b) {
            int ta = f.step(s.a, b);
            int tb = g.step(s.b, b);
            if ((ta == kNoState) != (tb == kNoState)) return false;
            if (ta == kNoState) continue;
            if (seen.insert({ta, tb}).second) queue.push_back({ta, tb});
        }
    }
    return true;
}

bool subset_of(const SafetyAutomaton& f, const SafetyAutomaton& g) {
    if (f.empty()) return true;
    if (g.empty()) return false;
    std::set<PairKey> seen;
    std::deque<PairKey> queue{{f.init, g.init}};
    seen.insert({f.init, g.init});
    while (!queue.empty()) {
        PairKey s = queue.front();
        queue.pop_front();
        for (int b = 0; b < 2; ++b) {
            int ta = f.step(s.a, b);
            if (ta == kNoState) continue;
            int tb = g.step(s.b, b);
            if (tb == kNoState) return false;
            if (seen.insert({ta, tb}).second) queue.push_back({ta, tb});
        }
    }
    return true;
}

SafetyAutomaton minimize(const SafetyAutomaton& f) {
    if (f.empty()) return f;
    std::size_t n = f.size();
    std::vector<int> block(n, 0);
    int blocks = 1;
    while (true) {
        // Signature: per letter, presence plus target block.
        std::map<std::vector<int>, int> sig_to_block;
        std::vector<int> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            std::vector<int> sig{block[q]};
            for (int b = 0; b < 2; ++b) {
                int t = f.trans[q][b];
                sig.push_back(t == kNoState ? -1 : block[t]);
            }
            auto it = sig_to_block.find(sig);
            if (it == sig_to_block.end())
                it = sig_to_block.emplace(sig, static_cast<int>(sig_to_block.size())).first;
            next[q] = it->second;
        }
        if (static_cast<int>(sig_to_block.size()) == blocks) break;
        blocks = static_cast<int>(sig_to_block.size());
        block = next;
    }

    RawAutomaton raw;
    raw.trans.assign(blocks, {kNoState, kNoState});
    for (std::size_t q = 0; q < n; ++q)
        for (int b = 0; b < 2; ++b)
            if (f.trans[q][b] != kNoState)
                raw.trans[block[q]][b] = block[f.trans[q][b]];
    raw.init = block[f.init];
    return prune(raw);
}

SafetyAutomaton cb_derivative(const SafetyAutomaton& f) {
    if (f.empty()) return f;
    std::size_t n = f.size();
    // A state is thick iff at least two infinite paths leave it: either it
    // branches, or it reaches a branching state. Least fixpoint backwards.
    std::vector<bool> thick(n, false);
    std::deque<int> work;
    for (std::size_t q = 0; q < n; ++q) {
        int deg = (f.trans[q][0] != kNoState) + (f.trans[q][1] != kNoState);
        if (deg == 2) { thick[q] = true; work.push_back(static_cast<int>(q)); }
    }
    std::vector<std::vector<int>> preds(n);
    for (std::size_t q = 0; q < n; ++q)
        for (int b = 0; b < 2; ++b)
            if (f.trans[q][b] != kNoState) preds[f.trans[q][b]].push_back(static_cast<int>(q));
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int p : preds[q])
            if (!thick[p]) { thick[p] = true; work.push_back(p); }
    }

    RawAutomaton raw;
    raw.trans.assign(n, {kNoState, kNoState});
    for (std::size_t q = 0; q < n; ++q) {
        if (!thick[q]) continue;
        for (int b = 0; b < 2; ++b) {
            int t = f.trans[q][b];
            if (t != kNoState && thick[t]) raw.trans[q][b] = t;
        }
    }
    raw.init = thick[f.init] ? f.init : kNoState;
    if (raw.init == kNoState) return SafetyAutomaton{};
    return minimize(prune(raw));
}

PerfectKernelResult perfect_kernel(const SafetyAutomaton& f, unsigned budget) {
    SafetyAutomaton cur = minimize(f);
    for (unsigned i = 0; i <= budget; ++i) {
        SafetyAutomaton next = cb_derivative(cur);
        if (equals(next, cur))
            return PerfectKernelResult{cur, i, is_empty(cur)};
        cur = next;
    }
    throw BudgetExceeded("perfect_kernel: derivative chain did not stabilize within budget");
}

SafetyAutomaton full_space() {
    SafetyAutomaton a;
    a.init = 0;
    a.trans.push_back({0, 0});
    return a;
}

SafetyAutomaton closed_from_clopen(const ClopenSet& u) {
    if (u.is_empty()) return SafetyAutomaton{};
    if (u.is_full()) return full_space();

    // Prefix tree of the stems; a covered node continues into the full space.
    struct Node { int child[2] = {kNoState, kNoState}; bool covered = false; };
    std::vector<Node> trie(1);
    for (const Word& s : u.stems()) {
        int cur = 0;
        for (char ch : s) {
            int b = ch - '0';
            if (trie[cur].child[b] == kNoState) {
                trie[cur].child[b] = static_cast<int>(trie.size());
                trie.emplace_back();
            }
            cur = trie[cur].child[b];
        }
        trie[cur].covered = true;
    }

    RawAutomaton raw;
    // State layout: trie nodes, then one absorbing full state.
    int full_state = static_cast<int>(trie.size());
    raw.trans.assign(trie.size() + 1, {kNoState, kNoState});
    raw.trans[full_state] = {full_state, full_state};
    for (std::size_t t = 0; t < trie.size(); ++t) {
        if (trie[t].covered) { raw.trans[t] = {full_state, full_state}; continue; }
        for (int b = 0; b < 2; ++b) {
            int c = trie[t].child[b];
            if (c == kNoState) continue;
            raw.trans[t][b] = trie[c].covered ? full_state : c;
        }
    }
    raw.init = 0;
    return minimize(prune(raw));
}

SafetyAutomaton closed_singleton(const Point& p) {
    RawAutomaton raw;
    std::size_t h = p.head.size(), c = p.cycle.size();
    raw.trans.assign(h + c, {kNoState, kNoState});
    for (std::size_t i = 0; i < h; ++i)
        raw.trans[i][p.head[i] - '0'] = static_cast<int>(i + 1);
    for (std::size_t i = 0; i < c; ++i)
        raw.trans[h + i][p.cycle[i] - '0'] = static_cast<int>(h + (i + 1) % c);
    raw.init = 0;
    return prune(raw);
}

std::vector<Word> truncation(const SafetyAutomaton& f, std::size_t k) {
    std::vector<Word> out;
    if (f.empty()) return out;
    // Lexicographic DFS over traces.
    struct Frame { int q; Word w; };
    std::vector<Frame> stack{{f.init, Word{}}};
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        if (fr.w.size() == k) { out.push_back(fr.w); continue; }
        for (int b = 1; b >= 0; --b) {
            int t = f.step(fr.q, b);
            if (t == kNoState) continue;
            stack.push_back({t, fr.w + static_cast<char>('0' + b)});
        }
    }
    return out;
}

Point least_point(const SafetyAutomaton& f) {
    if (f.empty()) throw std::logic_error("least_point: empty set");
    std::vector<int> pos_of(f.size(), -1);
    std::vector<char> letters;
    int q = f.init;
    while (pos_of[q] < 0) {
        pos_of[q] = static_cast<int>(letters.size());
        int b = (f.step(q, 0) != kNoState) ? 0 : 1;
        letters.push_back(static_cast<char>('0' + b));
        q = f.step(q, b);
    }
    std::size_t split = pos_of[q];
    Word head(letters.begin(), letters.begin() + split);
    Word cycle(letters.begin() + split, letters.end());
    return Point(head, cycle);
}

std::vector<Point> least_points(const SafetyAutomaton& f, std::size_t count) {
    std::vector<Point> out;
    if (f.empty() || count == 0) return out;
    const std::size_t depth = 12;
    // Leftmost completions of the depth-`depth` traces, in lex order. Deep
    // enough for the candidate streams the constructions use.
    struct Frame { int q; std::size_t d; };
    std::vector<std::pair<Word, int>> leaves;
    Word path;
    std::function<void(int, std::size_t)> dfs = [&](int q, std::size_t d) {
        if (leaves.size() >= count) return;
        if (d == depth) { leaves.emplace_back(path, q); return; }
        for (int b = 0; b < 2; ++b) {
            int t = f.step(q, b);
            if (t == kNoState) continue;
            path.push_back(static_cast<char>('0' + b));
            dfs(t, d + 1);
            path.pop_back();
        }
    };
    dfs(f.init, 0);
    std::set<Point> seen;
    for (auto& [w, q] : leaves) {
        SafetyAutomaton sub = f;
        sub.init = q;
        Point tail = least_point(sub);
        Point p(w + tail.head, tail.cycle);
        if (seen.insert(p).second) out.push_back(p);
        if (out.size() >= count) break;
    }
    return out;
}

}  // namespace cantor
