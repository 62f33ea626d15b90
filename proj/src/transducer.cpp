#include "cantor/transducer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "cantor/regset.hpp"

namespace cantor {

void check_productive(const Transducer& t) {
    if (t.domain.empty()) return;
    // DFS for a cycle of all-silent steps in the transducer x domain product.
    std::map<std::pair<int, int>, int> color;  // 0 absent, 1 on stack, 2 done
    struct Frame { std::pair<int, int> node; int edge; };
    std::vector<Frame> stack{{{t.init, t.domain.init}, 0}};
    color[{t.init, t.domain.init}] = 1;
    while (!stack.empty()) {
        Frame& fr = stack.back();
        if (fr.edge >= 2) {
            color[fr.node] = 2;
            stack.pop_back();
            continue;
        }
        int b = fr.edge++;
        int dom_next = t.domain.step(fr.node.second, b);
        if (dom_next == kNoState) continue;
        const TransducerStep& st = t.step[fr.node.first][b];
        if (!st.out.empty()) continue;  // only silent edges matter for the cycle
        std::pair<int, int> next{st.dst, dom_next};
        auto it = color.find(next);
        if (it == color.end()) {
            color[next] = 1;
            stack.push_back({next, 0});
        } else if (it->second == 1) {
            throw SemanticError("non-productive transducer: reachable silent cycle");
        }
    }
    // Silent-edge DFS only reaches part of the product; repeat from every
    // reachable product state.
    std::set<std::pair<int, int>> reach{{t.init, t.domain.init}};
    std::deque<std::pair<int, int>> work{{t.init, t.domain.init}};
    while (!work.empty()) {
        auto [q, d] = work.front();
        work.pop_front();
        for (int b = 0; b < 2; ++b) {
            int dn = t.domain.step(d, b);
            if (dn == kNoState) continue;
            std::pair<int, int> nx{t.step[q][b].dst, dn};
            if (reach.insert(nx).second) work.push_back(nx);
        }
    }
    for (auto& node : reach) {
        if (color.count(node)) continue;
        std::vector<Frame> st2{{node, 0}};
        color[node] = 1;
        while (!st2.empty()) {
            Frame& fr = st2.back();
            if (fr.edge >= 2) { color[fr.node] = 2; st2.pop_back(); continue; }
            int b = fr.edge++;
            int dn = t.domain.step(fr.node.second, b);
            if (dn == kNoState) continue;
            const TransducerStep& s = t.step[fr.node.first][b];
            if (!s.out.empty()) continue;
            std::pair<int, int> next{s.dst, dn};
            auto it = color.find(next);
            if (it == color.end()) { color[next] = 1; st2.push_back({next, 0}); }
            else if (it->second == 1)
                throw SemanticError("non-productive transducer: reachable silent cycle");
        }
    }
}

Transducer with_domain(const Transducer& t, SafetyAutomaton dom) {
    Transducer out = t;
    out.domain = std::move(dom);
    return out;
}

Point eval_point(const Transducer& t, const Point& p) {
    if (!member(p, t.domain)) throw DomainViolation("eval_point: point outside the domain");
    int q = t.init;
    Word out_head;
    for (char ch : p.head) {
        const TransducerStep& st = t.step[q][ch - '0'];
        out_head += st.out;
        q = st.dst;
    }
    // Around the input cycle until (state, cycle position) repeats.
    std::map<std::pair<int, std::size_t>, std::pair<std::size_t, std::size_t>> seen;
    // value: (#letters emitted when first here, index in emission order)
    Word emitted;
    std::size_t pos = 0;
    while (true) {
        auto key = std::make_pair(q, pos);
        auto it = seen.find(key);
        if (it != seen.end()) {
            std::size_t cut = it->second.first;
            Word head = out_head + emitted.substr(0, cut);
            Word cycle = emitted.substr(cut);
            if (cycle.empty())
                throw std::logic_error("eval_point: silent loop on a domain point");
            return Point(head, cycle);
        }
        seen.emplace(key, std::make_pair(emitted.size(), seen.size()));
        const TransducerStep& st = t.step[q][p.cycle[pos] - '0'];
        emitted += st.out;
        q = st.dst;
        pos = (pos + 1) % p.cycle.size();
    }
}

namespace {

// A configuration of the image construction: machine state, domain state,
// and output letters emitted but not yet consumed.
struct Config {
    int q, d;
    Word pend;
    bool operator<(const Config& o) const {
        return std::tie(q, d, pend) < std::tie(o.q, o.d, o.pend);
    }
};

using ConfigSet = std::vector<Config>;  // sorted, unique

// Expand silent configurations by input steps until every configuration
// has pending output. Terminates because productive machines have no
// silent cycles over the live domain.
ConfigSet eps_close(const Transducer& t, const ConfigSet& in) {
    std::set<Config> out;
    std::deque<Config> work;
    for (const Config& c : in) {
        if (out.insert(c).second) work.push_back(c);
    }
    while (!work.empty()) {
        Config c = work.front();
        work.pop_front();
        if (!c.pend.empty()) continue;
        for (int b = 0; b < 2; ++b) {
            int dn = t.domain.step(c.d, b);
            if (dn == kNoState) continue;
            const TransducerStep& st = t.step[c.q][b];
            Config nx{st.dst, dn, st.out};
            if (out.insert(nx).second && nx.pend.empty()) work.push_back(nx);
        }
    }
    return ConfigSet(out.begin(), out.end());
}

}  // namespace

SafetyAutomaton image_closed(const Transducer& t, const SafetyAutomaton& f) {
    if (!subset_of(f, t.domain))
        throw AmbientViolation("image_closed: set not within the transducer domain");
    if (f.empty()) return SafetyAutomaton{};

    Transducer restricted = with_domain(t, f);
    std::map<ConfigSet, int> id;
    std::vector<ConfigSet> states;
    RawAutomaton raw;
    auto intern = [&](ConfigSet s) {
        auto it = id.find(s);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(states.size());
        id.emplace(s, i);
        states.push_back(std::move(s));
        raw.trans.push_back({kNoState, kNoState});
        return i;
    };
    raw.init = intern(eps_close(restricted, {{t.init, f.init, Word{}}}));
    for (std::size_t i = 0; i < states.size(); ++i) {
        ConfigSet cur = states[i];  // copy: states may reallocate
        for (int b = 0; b < 2; ++b) {
            std::set<Config> nxt;
            for (const Config& c : cur) {
                if (c.pend.empty()) continue;  // closed sets have none silent
                if (c.pend[0] != static_cast<char>('0' + b)) continue;
                nxt.insert(Config{c.q, c.d, c.pend.substr(1)});
            }
            if (nxt.empty()) continue;
            raw.trans[i][b] = intern(eps_close(restricted, ConfigSet(nxt.begin(), nxt.end())));
        }
    }
    return minimize(prune(raw));
}

SafetyAutomaton preimage_clopen(const Transducer& t, const ClopenSet& u) {
    if (t.domain.empty() || u.is_empty()) return SafetyAutomaton{};
    if (u.is_full()) return t.domain;

    std::size_t max_stem = 0;
    for (const Word& s : u.stems()) max_stem = std::max(max_stem, s.size());

    auto committed_in = [&](const Word& o) {
        for (const Word& s : u.stems())
            if (is_prefix(s, o)) return true;
        return false;
    };
    auto still_possible = [&](const Word& o) {
        for (const Word& s : u.stems())
            if (is_prefix(o, s) || is_prefix(s, o)) return true;
        return false;
    };

    // State: undecided (q, d, output-so-far) or committed-inside (d only).
    struct Key {
        int q, d;
        Word o;
        bool in;
        bool operator<(const Key& k) const {
            return std::tie(in, q, d, o) < std::tie(k.in, k.q, k.d, k.o);
        }
    };
    std::map<Key, int> id;
    std::vector<Key> states;
    RawAutomaton raw;
    auto intern = [&](Key k) {
        auto it = id.find(k);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(states.size());
        id.emplace(k, i);
        states.push_back(std::move(k));
        raw.trans.push_back({kNoState, kNoState});
        return i;
    };
    raw.init = intern(Key{t.init, t.domain.init, Word{}, false});
    for (std::size_t i = 0; i < states.size(); ++i) {
        Key cur = states[i];
        for (int b = 0; b < 2; ++b) {
            int dn = t.domain.step(cur.d, b);
            if (dn == kNoState) continue;
            if (cur.in) {
                raw.trans[i][b] = intern(Key{-1, dn, Word{}, true});
                continue;
            }
            const TransducerStep& st = t.step[cur.q][b];
            Word o = cur.o + st.out;
            if (committed_in(o)) {
                raw.trans[i][b] = intern(Key{-1, dn, Word{}, true});
            } else if (still_possible(o)) {
                // undecided implies some stem strictly extends o, so |o| stays
                // below max_stem and the state space is finite
                raw.trans[i][b] = intern(Key{st.dst, dn, o, false});
            }
            // else committed outside: no edge
        }
    }
    return minimize(prune(raw));
}

SafetyAutomaton preimage_point(const Transducer& t, const Point& p) {
    if (t.domain.empty()) return SafetyAutomaton{};
    std::size_t h = p.head.size(), c = p.cycle.size();
    auto advance = [&](std::size_t pos) { return pos + 1 < h + c ? pos + 1 : h; };

    struct Key {
        int q, d;
        std::size_t pos;
        bool operator<(const Key& k) const { return std::tie(q, d, pos) < std::tie(k.q, k.d, k.pos); }
    };
    std::map<Key, int> id;
    std::vector<Key> states;
    RawAutomaton raw;
    auto intern = [&](Key k) {
        auto it = id.find(k);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(states.size());
        id.emplace(k, i);
        states.push_back(k);
        raw.trans.push_back({kNoState, kNoState});
        return i;
    };
    raw.init = intern(Key{t.init, t.domain.init, 0});
    for (std::size_t i = 0; i < states.size(); ++i) {
        Key cur = states[i];
        for (int b = 0; b < 2; ++b) {
            int dn = t.domain.step(cur.d, b);
            if (dn == kNoState) continue;
            const TransducerStep& st = t.step[cur.q][b];
            std::size_t pos = cur.pos;
            bool ok = true;
            for (char ch : st.out) {
                if (p.at(pos) != ch) { ok = false; break; }
                pos = advance(pos);
            }
            if (!ok) continue;
            raw.trans[i][b] = intern(Key{st.dst, dn, pos});
        }
    }
    return minimize(prune(raw));
}

namespace {

// Pair-run state for the injectivity search. `ahead` holds the output
// letters one side has emitted beyond the other; side > 0 means run 1 is
// ahead, side < 0 run 2, 0 in sync.
struct PairState {
    int q1, d1, q2, d2;
    int side;
    Word ahead;
    bool diverged;
    bool operator<(const PairState& o) const {
        return std::tie(q1, d1, q2, d2, side, ahead, diverged) <
               std::tie(o.q1, o.d1, o.q2, o.d2, o.side, o.ahead, o.diverged);
    }
};

}  // namespace

InjectivityVerdict is_injective(const Transducer& t, unsigned delay_budget) {
    InjectivityVerdict verdict;
    verdict.delay_budget = delay_budget;
    verdict.saturated = true;
    if (t.domain.empty()) return verdict;

    std::map<PairState, int> id;
    std::vector<PairState> states;
    std::vector<std::array<int, 4>> edges;  // per (a,b) in {00,01,10,11}
    auto intern = [&](const PairState& s) {
        auto it = id.find(s);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(states.size());
        id.emplace(s, i);
        states.push_back(s);
        edges.push_back({-1, -1, -1, -1});
        return i;
    };
    PairState start{t.init, t.domain.init, t.init, t.domain.init, 0, Word{}, false};
    intern(start);

    for (std::size_t i = 0; i < states.size(); ++i) {
        PairState cur = states[i];
        for (int a = 0; a < 2; ++a) {
            int d1n = t.domain.step(cur.d1, a);
            if (d1n == kNoState) continue;
            for (int b = 0; b < 2; ++b) {
                int d2n = t.domain.step(cur.d2, b);
                if (d2n == kNoState) continue;
                const TransducerStep& s1 = t.step[cur.q1][a];
                const TransducerStep& s2 = t.step[cur.q2][b];
                Word o1 = (cur.side > 0 ? cur.ahead : Word{}) + s1.out;
                Word o2 = (cur.side < 0 ? cur.ahead : Word{}) + s2.out;
                std::size_t m = std::min(o1.size(), o2.size());
                if (o1.compare(0, m, o2, 0, m) != 0) continue;  // outputs split
                PairState nx;
                nx.q1 = s1.dst; nx.d1 = d1n;
                nx.q2 = s2.dst; nx.d2 = d2n;
                nx.diverged = cur.diverged || (a != b);
                if (o1.size() >= o2.size()) { nx.side = o1.size() == o2.size() ? 0 : 1; nx.ahead = o1.substr(m); }
                else { nx.side = -1; nx.ahead = o2.substr(m); }
                if (nx.ahead.size() > delay_budget) { verdict.saturated = false; continue; }
                edges[i][a * 2 + b] = intern(nx);
            }
        }
    }

    // A diverged pair state lying on a cycle yields two distinct lasso
    // inputs with outputs that stay consistent forever, i.e. equal points.
    int n = static_cast<int>(states.size());
    // Find any diverged node both reachable (all are, by construction) and
    // able to reach itself.
    for (int s = 0; s < n; ++s) {
        if (!states[s].diverged) continue;
        // BFS from s back to s
        std::vector<int> prev_node(n, -1), prev_edge(n, -1);
        std::deque<int> work{s};
        int found = -1;
        std::set<int> seen;
        while (!work.empty() && found < 0) {
            int u = work.front();
            work.pop_front();
            for (int eb = 0; eb < 4; ++eb) {
                int v = edges[u][eb];
                if (v < 0) continue;
                if (v == s) { prev_node[s] = u; prev_edge[s] = eb; found = s; break; }
                if (seen.insert(v).second) {
                    prev_node[v] = u;
                    prev_edge[v] = eb;
                    work.push_back(v);
                }
            }
        }
        if (found < 0) continue;

        // Reconstruct stem (init -> s) and cycle (s -> s).
        auto path_letters = [&](int from, int to, const std::vector<int>& pn,
                                const std::vector<int>& pe) {
            std::vector<int> rev;
            int cur = to;
            while (cur != from || rev.empty()) {
                rev.push_back(pe[cur]);
                cur = pn[cur];
                if (cur < 0) break;
            }
            std::reverse(rev.begin(), rev.end());
            return rev;
        };
        std::vector<int> cyc = path_letters(s, s, prev_node, prev_edge);

        std::vector<int> pn2(n, -1), pe2(n, -1);
        std::deque<int> w2{0};
        std::set<int> seen2{0};
        while (!w2.empty()) {
            int u = w2.front();
            w2.pop_front();
            for (int eb = 0; eb < 4; ++eb) {
                int v = edges[u][eb];
                if (v < 0 || !seen2.insert(v).second) continue;
                pn2[v] = u;
                pe2[v] = eb;
                w2.push_back(v);
            }
        }
        std::vector<int> stem;
        {
            std::vector<int> rev;
            int cur = s;
            while (cur != 0) {
                rev.push_back(pe2[cur]);
                cur = pn2[cur];
            }
            std::reverse(rev.begin(), rev.end());
            stem = rev;
        }
        Word h1, h2, c1, c2;
        for (int eb : stem) { h1 += static_cast<char>('0' + eb / 2); h2 += static_cast<char>('0' + eb % 2); }
        for (int eb : cyc) { c1 += static_cast<char>('0' + eb / 2); c2 += static_cast<char>('0' + eb % 2); }
        Point x1(h1, c1), x2(h2, c2);
        if (x1 == x2) continue;  // cycle diverged only in the stem letters but equal points
        verdict.injective = false;
        verdict.witness = std::make_pair(x1, x2);
        return verdict;
    }
    return verdict;
}

bool relatively_open(const SafetyAutomaton& image_part, const SafetyAutomaton& image_all) {
    RegSet y = from_closed(image_all);
    RegSet i = from_closed(image_part);
    RegSet diff = combine(CombineOp::Difference, y, &i);
    SafetyAutomaton cl_diff = closure(diff);
    SafetyAutomaton overlap = boolean_op(BoolOp::Intersect, cl_diff, image_part);
    return is_empty(overlap);
}

OpennessVerdict check_open(const Transducer& t, unsigned depth_cap) {
    OpennessVerdict v;
    if (t.domain.empty()) { v.status = OpennessStatus::Open; return v; }
    SafetyAutomaton y = image_closed(t, t.domain);

    struct Sig {
        int q, d, qy;
        bool operator<(const Sig& o) const { return std::tie(q, d, qy) < std::tie(o.q, o.d, o.qy); }
    };
    struct Node { Sig sig; Word stem; };
    std::set<Sig> seen;
    std::deque<Node> queue;
    Sig start{t.init, t.domain.init, y.init};
    seen.insert(start);
    queue.push_back({start, Word{}});
    unsigned max_depth = 0;

    while (!queue.empty()) {
        Node node = queue.front();
        queue.pop_front();
        max_depth = std::max<unsigned>(max_depth, node.stem.size());

        SafetyAutomaton part = boolean_op(BoolOp::Intersect,
                                          closed_from_clopen(ClopenSet({node.stem})), t.domain);
        SafetyAutomaton img = image_closed(t, part);
        if (!relatively_open(img, y)) {
            v.status = OpennessStatus::NotOpen;
            v.witness = node.stem;
            v.depth = node.stem.size();
            return v;
        }
        if (node.stem.size() >= depth_cap) {
            v.status = OpennessStatus::OpenUpToDepth;
            v.depth = depth_cap;
            continue;  // keep scanning: a NotOpen at the frontier still counts
        }
        for (int b = 0; b < 2; ++b) {
            int dn = t.domain.step(node.sig.d, b);
            if (dn == kNoState) continue;
            const TransducerStep& st = t.step[node.sig.q][b];
            int qy = node.sig.qy;
            bool ok = true;
            for (char ch : st.out) {
                qy = y.step(qy, ch - '0');
                if (qy == kNoState) { ok = false; break; }
            }
            if (!ok)
                throw std::logic_error("check_open: image trace fell outside Y");
            Sig nx{st.dst, dn, qy};
            if (seen.insert(nx).second)
                queue.push_back({nx, node.stem + static_cast<char>('0' + b)});
        }
    }
    if (v.status != OpennessStatus::OpenUpToDepth) {
        v.status = OpennessStatus::Open;
        v.depth = max_depth;
    }
    return v;
}

NowhereOpenVerdict check_nowhere_open(const Transducer& t, const SafetyAutomaton& z,
                                      unsigned depth_cap) {
    if (!subset_of(z, t.domain))
        throw AmbientViolation("check_nowhere_open: Z not within the domain");
    NowhereOpenVerdict v;
    if (z.empty()) { v.depth = depth_cap; return v; }

    struct Sig {
        int q, d;
        bool operator<(const Sig& o) const { return std::tie(q, d) < std::tie(o.q, o.d); }
    };
    struct Node { Sig sig; Word stem; };
    std::set<Sig> seen;
    std::deque<Node> queue;
    Sig start{t.init, z.init};
    seen.insert(start);
    queue.push_back({start, Word{}});
    unsigned max_depth = 0;
    bool capped = false;

    while (!queue.empty()) {
        Node node = queue.front();
        queue.pop_front();
        max_depth = std::max<unsigned>(max_depth, node.stem.size());

        SafetyAutomaton part = boolean_op(BoolOp::Intersect,
                                          closed_from_clopen(ClopenSet({node.stem})), z);
        Transducer restricted = with_domain(t, part);
        OpennessVerdict sub = check_open(restricted, depth_cap);
        if (sub.status == OpennessStatus::Open) {
            v.status = NowhereStatus::NotNowhereOpen;
            v.witness = node.stem;
            v.depth = node.stem.size();
            return v;
        }
        if (node.stem.size() >= depth_cap) { capped = true; continue; }
        for (int b = 0; b < 2; ++b) {
            int dn = z.step(node.sig.d, b);
            if (dn == kNoState) continue;
            Sig nx{t.step[node.sig.q][b].dst, dn};
            if (seen.insert(nx).second)
                queue.push_back({nx, node.stem + static_cast<char>('0' + b)});
        }
    }
    v.status = NowhereStatus::NowhereOpenUpToDepth;
    v.depth = capped ? depth_cap : max_depth;
    return v;
}

}  // namespace cantor
