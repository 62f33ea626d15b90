#include "cantor/word.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace cantor {

bool is_binary_word(const Word& w) {
    return std::all_of(w.begin(), w.end(), [](char c) { return c == '0' || c == '1'; });
}

std::size_t lcp(const Word& a, const Word& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

bool is_prefix(const Word& prefix, const Word& w) {
    return prefix.size() <= w.size() && std::equal(prefix.begin(), prefix.end(), w.begin());
}

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
}

Rational Rational::pow2(int exponent) {
    if (exponent < -62 || exponent > 62) throw std::overflow_error("Rational::pow2: exponent out of range");
    if (exponent >= 0) return Rational(std::int64_t(1) << exponent, 1);
    return Rational(1, std::int64_t(1) << (-exponent));
}

bool Rational::operator<(const Rational& o) const {
    // Cross-multiply in 128-bit to stay exact.
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

std::string Rational::str() const {
    std::ostringstream os;
    os << num;
    if (den != 1) os << '/' << den;
    return os.str();
}

namespace {

// Smallest period of w; w is primitive iff the period is |w|.
std::size_t primitive_period(const Word& w) {
    for (std::size_t p = 1; p < w.size(); ++p) {
        if (w.size() % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < w.size() && ok; ++i)
            if (w[i] != w[i - p]) ok = false;
        if (ok) return p;
    }
    return w.size();
}

}  // namespace

Point::Point(Word h, Word c) : head(std::move(h)), cycle(std::move(c)) {
    if (cycle.empty()) throw std::invalid_argument("Point: empty cycle");
    if (!is_binary_word(head) || !is_binary_word(cycle))
        throw std::invalid_argument("Point: non-binary letters");
    std::size_t p = primitive_period(cycle);
    cycle.resize(p);
    // Absorb trailing head letters that already agree with the cycle end,
    // rotating the cycle as the boundary moves left.
    while (!head.empty() && head.back() == cycle.back()) {
        head.pop_back();
        cycle.insert(cycle.begin(), cycle.back());
        cycle.pop_back();
    }
}

char Point::at(std::size_t i) const {
    if (i < head.size()) return head[i];
    return cycle[(i - head.size()) % cycle.size()];
}

Word Point::prefix(std::size_t n) const {
    Word out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return out;
}

bool Point::operator<(const Point& o) const {
    if (*this == o) return false;
    std::size_t n = head.size() + cycle.size() + o.head.size() + o.cycle.size();
    for (std::size_t i = 0; i < n; ++i)
        if (at(i) != o.at(i)) return at(i) < o.at(i);
    return false;  // unreachable for canonical distinct points
}

std::string Point::str() const {
    return head + "(" + cycle + ")";
}

Point Point::parse(const std::string& text) {
    auto open = text.find('(');
    auto close = text.find(')');
    if (open == std::string::npos || close == std::string::npos || close != text.size() - 1 || close < open)
        throw ParseError("point literal must look like head(cycle): " + text);
    Word h = text.substr(0, open);
    Word c = text.substr(open + 1, close - open - 1);
    if (h == "eps") h.clear();
    if (c.empty() || !is_binary_word(h) || !is_binary_word(c))
        throw ParseError("bad point literal: " + text);
    return Point(h, c);
}

std::optional<std::size_t> point_lcp(const Point& a, const Point& b) {
    if (a == b) return std::nullopt;
    // Distinct canonical points must differ within one full unrolling of
    // both lassos.
    std::size_t bound = a.head.size() + b.head.size() + a.cycle.size() * b.cycle.size() + 1;
    for (std::size_t i = 0; i < bound; ++i)
        if (a.at(i) != b.at(i)) return i;
    throw std::logic_error("point_lcp: points compared equal past the bound");
}

Rational point_distance(const Point& a, const Point& b) {
    auto l = point_lcp(a, b);
    if (!l) return Rational(0, 1);
    return Rational::pow2(-static_cast<int>(*l));
}

Rational cylinder_diameter(const Cylinder& c) {
    return Rational::pow2(-static_cast<int>(c.stem.size()));
}

bool cylinders_disjoint(const Cylinder& a, const Cylinder& b) {
    return !is_prefix(a.stem, b.stem) && !is_prefix(b.stem, a.stem);
}

bool cylinder_contains(const Cylinder& outer, const Cylinder& inner) {
    return is_prefix(outer.stem, inner.stem);
}

bool point_in_cylinder(const Point& p, const Cylinder& c) {
    for (std::size_t i = 0; i < c.stem.size(); ++i)
        if (p.at(i) != c.stem[i]) return false;
    return true;
}

namespace {

// Prefix-tree node used for clopen normalization and complements.
struct TrieNode {
    bool covered = false;  // a stem ends here: the whole subtree is in the set
    int child[2] = {-1, -1};
};

struct Trie {
    std::vector<TrieNode> nodes;
    Trie() { nodes.emplace_back(); }

    void insert(const Word& w) {
        int cur = 0;
        for (char ch : w) {
            if (nodes[cur].covered) return;  // already absorbed
            int b = ch - '0';
            if (nodes[cur].child[b] < 0) {
                nodes[cur].child[b] = static_cast<int>(nodes.size());
                nodes.emplace_back();
            }
            cur = nodes[cur].child[b];
        }
        nodes[cur].covered = true;
        nodes[cur].child[0] = nodes[cur].child[1] = -1;
    }

    // Merge full sibling pairs bottom-up; returns true when node n covers
    // its whole cylinder after reduction.
    bool reduce(int n) {
        if (nodes[n].covered) return true;
        bool full0 = nodes[n].child[0] >= 0 && reduce(nodes[n].child[0]);
        bool full1 = nodes[n].child[1] >= 0 && reduce(nodes[n].child[1]);
        if (full0 && full1) {
            nodes[n].covered = true;
            nodes[n].child[0] = nodes[n].child[1] = -1;
            return true;
        }
        return false;
    }

    void collect(int n, Word& path, std::vector<Word>& out) const {
        if (nodes[n].covered) {
            out.push_back(path);
            return;
        }
        for (int b = 0; b < 2; ++b) {
            if (nodes[n].child[b] < 0) continue;
            path.push_back(static_cast<char>('0' + b));
            collect(nodes[n].child[b], path, out);
            path.pop_back();
        }
    }

    // Stems of the complement: every missing branch along the tree.
    void collect_complement(int n, Word& path, std::vector<Word>& out) const {
        if (nodes[n].covered) return;
        for (int b = 0; b < 2; ++b) {
            path.push_back(static_cast<char>('0' + b));
            if (nodes[n].child[b] < 0)
                out.push_back(path);
            else
                collect_complement(nodes[n].child[b], path, out);
            path.pop_back();
        }
    }
};

}  // namespace

ClopenSet::ClopenSet(const std::vector<Word>& stems) {
    Trie t;
    for (const Word& w : stems) {
        if (!is_binary_word(w)) throw std::invalid_argument("ClopenSet: non-binary stem: " + w);
        t.insert(w);
    }
    if (!stems.empty()) t.reduce(0);
    Word path;
    t.collect(0, path, stems_);
    std::sort(stems_.begin(), stems_.end());
}

ClopenSet normalize(const std::vector<Word>& stems) {
    return ClopenSet(stems);
}

ClopenSet ClopenSet::complement() const {
    if (is_empty()) return full();
    Trie t;
    for (const Word& w : stems_) t.insert(w);
    std::vector<Word> out;
    Word path;
    t.collect_complement(0, path, out);
    return ClopenSet(out);
}

bool ClopenSet::contains(const Point& p) const {
    for (const Word& s : stems_) {
        bool ok = true;
        for (std::size_t i = 0; i < s.size() && ok; ++i)
            if (p.at(i) != s[i]) ok = false;
        if (ok) return true;
    }
    return false;
}

bool ClopenSet::contains_word_cylinder(const Word& w) const {
    for (const Word& s : stems_)
        if (is_prefix(s, w)) return true;
    return false;
}

std::string ClopenSet::str() const {
    if (stems_.empty()) return "empty";
    std::string out;
    for (std::size_t i = 0; i < stems_.size(); ++i) {
        if (i) out += ' ';
        out += stems_[i].empty() ? "eps" : stems_[i];
    }
    return out;
}

}  // namespace cantor
