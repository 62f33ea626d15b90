#include "cantor/regset.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cantor {

AcceptFormula AcceptFormula::negate(AcceptFormula f) {
    AcceptFormula out;
    out.kind = Kind::Not;
    out.children.push_back(std::move(f));
    return out;
}

AcceptFormula AcceptFormula::conj(AcceptFormula a, AcceptFormula b) {
    AcceptFormula out;
    out.kind = Kind::And;
    out.children.push_back(std::move(a));
    out.children.push_back(std::move(b));
    return out;
}

AcceptFormula AcceptFormula::disj(AcceptFormula a, AcceptFormula b) {
    AcceptFormula out;
    out.kind = Kind::Or;
    out.children.push_back(std::move(a));
    out.children.push_back(std::move(b));
    return out;
}

bool AcceptFormula::eval(const std::vector<bool>& atom_true) const {
    switch (kind) {
        case Kind::True: return true;
        case Kind::False: return false;
        case Kind::Atom: return atom_true[atom];
        case Kind::Not: return !children[0].eval(atom_true);
        case Kind::And:
            for (const auto& c : children)
                if (!c.eval(atom_true)) return false;
            return true;
        case Kind::Or:
            for (const auto& c : children)
                if (c.eval(atom_true)) return true;
            return false;
    }
    return false;
}

int RegSet::run(const Word& w) const {
    int q = init;
    for (char ch : w) q = trans[q][ch - '0'];
    return q;
}

AcceptFormula inf_atom(RegSet& e, int state) {
    e.carriers.push_back({state});
    return AcceptFormula::atom_of(static_cast<int>(e.carriers.size()) - 1);
}

bool member_lasso(const Point& p, const RegSet& e) {
    int q = e.run(p.head);
    // Iterate around the cycle until a (state, cycle-position) pair repeats;
    // the states seen from the first repeat onward are exactly Inf.
    std::map<std::pair<int, std::size_t>, std::size_t> first_seen;
    std::vector<int> states;
    std::size_t pos = 0;
    while (true) {
        auto key = std::make_pair(q, pos);
        auto it = first_seen.find(key);
        if (it != first_seen.end()) {
            std::set<int> inf(states.begin() + it->second, states.end());
            std::vector<bool> atom_true(e.carriers.size(), false);
            for (std::size_t a = 0; a < e.carriers.size(); ++a)
                for (int s : e.carriers[a])
                    if (inf.count(s)) { atom_true[a] = true; break; }
            return e.accept.eval(atom_true);
        }
        first_seen.emplace(key, states.size());
        states.push_back(q);
        q = e.step(q, p.cycle[pos] - '0');
        pos = (pos + 1) % p.cycle.size();
    }
}

namespace {

constexpr std::size_t kMaxFormulaAtoms = 16;

void collect_atoms(const AcceptFormula& f, std::set<int>& out) {
    if (f.kind == AcceptFormula::Kind::Atom) out.insert(f.atom);
    for (const auto& c : f.children) collect_atoms(c, out);
}

// Iterative Tarjan over the subgraph of allowed states.
std::vector<std::vector<int>> sccs_of(const RegSet& e, const std::vector<bool>& allowed) {
    int n = static_cast<int>(e.size());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> out;
    int counter = 0;

    struct Frame { int q; int edge; };
    for (int s = 0; s < n; ++s) {
        if (!allowed[s] || index[s] >= 0) continue;
        std::vector<Frame> call{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = true;
        while (!call.empty()) {
            Frame& fr = call.back();
            if (fr.edge < 2) {
                int b = fr.edge++;
                int t = e.step(fr.q, b);
                if (!allowed[t]) continue;
                if (index[t] < 0) {
                    index[t] = low[t] = counter++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    call.push_back({t, 0});
                } else if (on_stack[t]) {
                    low[fr.q] = std::min(low[fr.q], index[t]);
                }
            } else {
                int q = fr.q;
                call.pop_back();
                if (!call.empty()) low[call.back().q] = std::min(low[call.back().q], low[q]);
                if (low[q] == index[q]) {
                    std::vector<int> comp;
                    while (true) {
                        int t = stack.back();
                        stack.pop_back();
                        on_stack[t] = false;
                        comp.push_back(t);
                        if (t == q) break;
                    }
                    out.push_back(std::move(comp));
                }
            }
        }
    }
    return out;
}

// States from which an accepted run exists. Enumerates hit-sets of the
// atoms the formula actually mentions; for each accepting hit-set, looks
// for a strongly connected component realizing exactly that hit-set.
std::vector<bool> live_states(const RegSet& e) {
    int n = static_cast<int>(e.size());
    std::set<int> mentioned;
    collect_atoms(e.accept, mentioned);
    std::vector<int> atoms(mentioned.begin(), mentioned.end());
    if (atoms.size() > kMaxFormulaAtoms)
        throw SizeError("acceptance formula mentions too many atoms (bound " +
                        std::to_string(kMaxFormulaAtoms) + ")");

    // carrier membership per mentioned atom
    std::vector<std::vector<bool>> carries(atoms.size(), std::vector<bool>(n, false));
    for (std::size_t a = 0; a < atoms.size(); ++a)
        for (int s : e.carriers[atoms[a]])
            if (s >= 0 && s < n) carries[a][s] = true;

    std::vector<bool> live(n, false);
    std::size_t combos = std::size_t(1) << atoms.size();
    for (std::size_t h = 0; h < combos; ++h) {
        std::vector<bool> atom_true(e.carriers.size(), false);
        for (std::size_t a = 0; a < atoms.size(); ++a)
            atom_true[atoms[a]] = (h >> a) & 1;
        if (!e.accept.eval(atom_true)) continue;

        std::vector<bool> allowed(n, true);
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (!((h >> a) & 1))
                for (int s = 0; s < n; ++s)
                    if (carries[a][s]) allowed[s] = false;

        for (const auto& comp : sccs_of(e, allowed)) {
            // needs at least one internal edge
            bool has_edge = comp.size() > 1;
            if (!has_edge)
                for (int b = 0; b < 2 && !has_edge; ++b)
                    if (e.step(comp[0], b) == comp[0]) has_edge = true;
            if (!has_edge) continue;
            // hit-set of the component must be exactly h
            bool exact = true;
            for (std::size_t a = 0; a < atoms.size() && exact; ++a) {
                bool hit = false;
                for (int q : comp)
                    if (carries[a][q]) { hit = true; break; }
                if (hit != bool((h >> a) & 1)) exact = false;
            }
            if (!exact) continue;
            for (int q : comp) live[q] = true;
        }
    }

    // Anything that reaches a live state is live (finite prefixes are free).
    std::vector<std::vector<int>> preds(n);
    for (int q = 0; q < n; ++q)
        for (int b = 0; b < 2; ++b) preds[e.step(q, b)].push_back(q);
    std::deque<int> work;
    for (int q = 0; q < n; ++q)
        if (live[q]) work.push_back(q);
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int p : preds[q])
            if (!live[p]) { live[p] = true; work.push_back(p); }
    }
    return live;
}

}  // namespace

bool is_empty_omega(const RegSet& e, const Word& within) {
    std::vector<bool> live = live_states(e);
    return !live[e.run(within)];
}

SafetyAutomaton closure(const RegSet& e) {
    std::vector<bool> live = live_states(e);
    if (!live[e.init]) return SafetyAutomaton{};
    RawAutomaton raw;
    raw.trans.assign(e.size(), {kNoState, kNoState});
    for (std::size_t q = 0; q < e.size(); ++q) {
        if (!live[q]) continue;
        for (int b = 0; b < 2; ++b) {
            int t = e.step(static_cast<int>(q), b);
            if (live[t]) raw.trans[q][b] = t;
        }
    }
    raw.init = e.init;
    return minimize(prune(raw));
}

namespace {

AcceptFormula shift_atoms(const AcceptFormula& f, int offset) {
    AcceptFormula out = f;
    if (out.kind == AcceptFormula::Kind::Atom) out.atom += offset;
    for (auto& c : out.children) c = shift_atoms(c, offset);
    return out;
}

}  // namespace

RegSet combine(CombineOp op, const RegSet& e, const RegSet* g) {
    if (op == CombineOp::Complement) {
        RegSet out = e;
        out.accept = AcceptFormula::negate(out.accept);
        return out;
    }
    if (g == nullptr) throw std::invalid_argument("combine: binary op needs two sets");

    // Reachable product automaton.
    std::map<std::pair<int, int>, int> id;
    std::vector<std::pair<int, int>> states;
    RegSet out;
    auto intern = [&](std::pair<int, int> k) {
        auto it = id.find(k);
        if (it != id.end()) return it->second;
        int i = static_cast<int>(states.size());
        id.emplace(k, i);
        states.push_back(k);
        out.trans.push_back({0, 0});
        return i;
    };
    out.init = intern({e.init, g->init});
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto [a, b] = states[i];
        for (int letter = 0; letter < 2; ++letter)
            out.trans[i][letter] = intern({e.step(a, letter), g->step(b, letter)});
    }

    // Lift carriers: a product state carries an atom iff its component does.
    out.carriers.clear();
    for (const auto& carrier : e.carriers) {
        std::vector<int> lifted;
        std::set<int> members(carrier.begin(), carrier.end());
        for (std::size_t i = 0; i < states.size(); ++i)
            if (members.count(states[i].first)) lifted.push_back(static_cast<int>(i));
        out.carriers.push_back(std::move(lifted));
    }
    int offset = static_cast<int>(e.carriers.size());
    for (const auto& carrier : g->carriers) {
        std::vector<int> lifted;
        std::set<int> members(carrier.begin(), carrier.end());
        for (std::size_t i = 0; i < states.size(); ++i)
            if (members.count(states[i].second)) lifted.push_back(static_cast<int>(i));
        out.carriers.push_back(std::move(lifted));
    }

    AcceptFormula fe = e.accept;
    AcceptFormula fg = shift_atoms(g->accept, offset);
    switch (op) {
        case CombineOp::Union: out.accept = AcceptFormula::disj(std::move(fe), std::move(fg)); break;
        case CombineOp::Intersect: out.accept = AcceptFormula::conj(std::move(fe), std::move(fg)); break;
        case CombineOp::Difference:
            out.accept = AcceptFormula::conj(std::move(fe), AcceptFormula::negate(std::move(fg)));
            break;
        case CombineOp::Complement: break;  // handled above
    }
    return out;
}

RegSet empty_regset() {
    RegSet e;
    e.trans.push_back({0, 0});
    e.init = 0;
    e.accept = AcceptFormula::truth(false);
    return e;
}

RegSet full_regset() {
    RegSet e = empty_regset();
    e.accept = AcceptFormula::truth(true);
    return e;
}

RegSet from_closed(const SafetyAutomaton& f) {
    if (f.empty()) return empty_regset();
    RegSet e;
    int sink = static_cast<int>(f.size());
    e.trans.assign(f.size() + 1, {sink, sink});
    for (std::size_t q = 0; q < f.size(); ++q)
        for (int b = 0; b < 2; ++b)
            if (f.trans[q][b] != kNoState) e.trans[q][b] = f.trans[q][b];
    e.init = f.init;
    e.carriers.push_back({sink});
    e.accept = AcceptFormula::negate(AcceptFormula::atom_of(0));
    return e;
}

RegSet from_clopen(const ClopenSet& u) {
    if (u.is_empty()) return empty_regset();
    if (u.is_full()) return full_regset();
    // Prefix tree with absorbing inside/outside states; membership is
    // decided by which absorber the run ends up looping in.
    struct Node { int child[2] = {-1, -1}; bool covered = false; };
    std::vector<Node> trie(1);
    for (const Word& s : u.stems()) {
        int cur = 0;
        for (char ch : s) {
            int b = ch - '0';
            if (trie[cur].child[b] < 0) {
                trie[cur].child[b] = static_cast<int>(trie.size());
                trie.emplace_back();
            }
            cur = trie[cur].child[b];
        }
        trie[cur].covered = true;
    }
    RegSet e;
    int inside = static_cast<int>(trie.size());
    int outside = inside + 1;
    e.trans.assign(trie.size() + 2, {outside, outside});
    e.trans[inside] = {inside, inside};
    for (std::size_t t = 0; t < trie.size(); ++t) {
        if (trie[t].covered) { e.trans[t] = {inside, inside}; continue; }
        for (int b = 0; b < 2; ++b) {
            int c = trie[t].child[b];
            if (c < 0) continue;
            e.trans[t][b] = trie[c].covered ? inside : c;
        }
    }
    e.init = 0;
    e.carriers.push_back({inside});
    e.accept = AcceptFormula::atom_of(0);
    return e;
}

std::vector<Word> truncation_omega(const RegSet& e, std::size_t k) {
    std::vector<bool> live = live_states(e);
    std::vector<Word> out;
    struct Frame { int q; Word w; };
    std::vector<Frame> stack{{e.init, Word{}}};
    if (!live[e.init]) return out;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        if (fr.w.size() == k) { out.push_back(fr.w); continue; }
        for (int b = 1; b >= 0; --b) {
            int t = e.step(fr.q, b);
            if (!live[t]) continue;
            stack.push_back({t, fr.w + static_cast<char>('0' + b)});
        }
    }
    return out;
}

}  // namespace cantor
