// Binary words, ultimately periodic points, cylinders and the clopen-set
// algebra over Cantor space. Everything here is immutable value data; all
// operations are pure.

#ifndef CANTOR_WORD_HPP
#define CANTOR_WORD_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantor {

/// A finite word over {0,1}, stored as a string of '0'/'1' characters.
using Word = std::string;

bool is_binary_word(const Word& w);

/// Length of the longest common prefix of two words.
std::size_t lcp(const Word& a, const Word& b);

/// True iff `prefix` is a prefix of `w`.
bool is_prefix(const Word& prefix, const Word& w);

/// Exact rational number. Small, normalized, overflow-checked on the
/// operations the engine needs (comparisons against 1/n and powers of two).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    static Rational pow2(int exponent);  // 2^exponent, |exponent| <= 62

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    std::string str() const;
};

/// An ultimately periodic point head . cycle^omega, kept in canonical form:
/// minimal head, primitive cycle. Two Points are equal iff their infinite
/// unrollings agree, which after canonicalization is field equality.
struct Point {
    Word head;
    Word cycle;

    Point() : cycle("0") {}
    Point(Word h, Word c);

    /// Letter at position i (0-based) of the unrolling.
    char at(std::size_t i) const;

    /// First n letters of the unrolling.
    Word prefix(std::size_t n) const;

    bool operator==(const Point& o) const { return head == o.head && cycle == o.cycle; }
    bool operator!=(const Point& o) const { return !(*this == o); }
    bool operator<(const Point& o) const;  // order of the infinite unrollings

    std::string str() const;  // "head(cycle)"
    static Point parse(const std::string& text);
};

/// Length of the longest common prefix of two point unrollings; nullopt when
/// the points are equal.
std::optional<std::size_t> point_lcp(const Point& a, const Point& b);

/// Distance 2^-(lcp) under the fixed metric; 0 for equal points.
Rational point_distance(const Point& a, const Point& b);

/// The basic clopen neighborhood [stem]: all infinite sequences extending stem.
struct Cylinder {
    Word stem;
    explicit Cylinder(Word s = "") : stem(std::move(s)) {}
    bool operator==(const Cylinder& o) const { return stem == o.stem; }
};

/// Exact diameter 2^-|stem| of a cylinder.
Rational cylinder_diameter(const Cylinder& c);

bool cylinders_disjoint(const Cylinder& a, const Cylinder& b);
bool cylinder_contains(const Cylinder& outer, const Cylinder& inner);
bool point_in_cylinder(const Point& p, const Cylinder& c);

/// A finite union of cylinders in canonical antichain form: no stem is a
/// prefix of another and no two sibling stems w0, w1 are both present.
/// Canonicalization happens at construction, so equality of denotations is
/// field equality.
class ClopenSet {
  public:
    ClopenSet() = default;
    explicit ClopenSet(const std::vector<Word>& stems);

    static ClopenSet empty() { return ClopenSet(); }
    static ClopenSet full() { return ClopenSet({Word("")}); }

    const std::vector<Word>& stems() const { return stems_; }
    bool is_empty() const { return stems_.empty(); }
    bool is_full() const { return stems_.size() == 1 && stems_[0].empty(); }

    ClopenSet complement() const;

    bool contains(const Point& p) const;
    bool contains_word_cylinder(const Word& w) const;  // [w] subset of this

    bool operator==(const ClopenSet& o) const { return stems_ == o.stems_; }
    bool operator!=(const ClopenSet& o) const { return !(*this == o); }

    std::string str() const;  // whitespace-separated stems, "eps" for the root

  private:
    std::vector<Word> stems_;  // sorted, canonical antichain
};

ClopenSet normalize(const std::vector<Word>& stems);

/// Thrown when a word or point literal is malformed.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a structurally well-formed model violates a semantic
/// invariant (non-total transitions, non-productive transducer, ...).
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cantor

#endif
