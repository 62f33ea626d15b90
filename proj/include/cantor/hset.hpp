// The Hurewicz-style standard set H (a countable dense-in-itself family of
// points with nested neighborhood bases) and the finite-stage construction
// of a discrete set D whose image is dense and codense in H. The
// construction alternates two selection steps: convergence children picked
// inside the parent's neighborhood, and witness children picked in the
// preimage of image points whose full preimage avoids the parent's
// neighborhood. D keeps the odd levels.

#ifndef CANTOR_HSET_HPP
#define CANTOR_HSET_HPP

#include <map>
#include <optional>

#include "cantor/table.hpp"
#include "cantor/transducer.hpp"
#include "cantor/word.hpp"

namespace cantor {

using IndexTuple = std::vector<int>;

std::string index_str(const IndexTuple& idx);

/// Index-tree of point codes; point(idx) = code(idx)*0^w and the j-th base
/// neighborhood is [code(idx) * 0^(j-1)]. The root has the empty code.
struct HFamily {
    unsigned k_max = 0;
    unsigned i_max = 0;
    std::map<IndexTuple, Word> codes;  // nonempty tuples only

    Word code(const IndexTuple& idx) const;
    Point point(const IndexTuple& idx) const;
    Cylinder base(const IndexTuple& idx, unsigned j) const;
};

/// The fixed coding scheme word(i1..ik) = 0^(i1-1) 1 ... 0^(ik-1) 1.
HFamily generate_h(unsigned k_max, unsigned i_max);

struct HConditionReport {
    bool a = false;          // interpreted form: U^1 nesting along the tree
    bool a_printed = false;  // the printed form, reported for transparency
    bool b = false;          // sibling U^1 bases pairwise disjoint
    bool c = false;          // diam(U^{i1}) < 1/(i1+...+ik), exact rationals
    bool no_isolated = false;
};

HConditionReport check_h_conditions(const HFamily& h);

/// One selected node of the D-construction.
struct DNode {
    IndexTuple idx;
    Point x;      // selected domain point
    Word x_stem;  // isolating cylinder U^1(x)
    Point p;      // image f(x)
    Word p_stem;  // image-side neighborhood U^1(p)
};

struct DConstruction {
    unsigned index_bound = 0;  // N
    unsigned depth_bound = 0;  // d (odd)
    bool table_backend = false;
    DNode root;  // root x and p = f(x); root.x_stem unused, root.p_stem = ""
    std::map<IndexTuple, DNode> nodes;

    bool is_odd(const IndexTuple& idx) const { return idx.size() % 2 == 1; }
    std::vector<const DNode*> d_points() const;      // odd levels
    std::vector<const DNode*> even_points() const;   // even levels
};

struct ConstructionObstructed : std::runtime_error {
    IndexTuple index;
    std::string reason;
    ConstructionObstructed(IndexTuple i, std::string r)
        : std::runtime_error("construction obstructed at (" + index_str(i) + "): " + r),
          index(std::move(i)),
          reason(std::move(r)) {}
};

DConstruction construct_d(const Transducer& t, const SafetyAutomaton& z, unsigned index_bound,
                          unsigned depth_bound);
DConstruction construct_d(const FiniteStageMap& t, const std::vector<Word>& z_leaves,
                          unsigned index_bound, unsigned depth_bound);

enum class ImageMatch { True, False, NotApplicable };

struct DVerification {
    bool discrete = false;
    bool dense = false;
    bool codense = false;
    ImageMatch image_match = ImageMatch::NotApplicable;
    bool preimage_equations = false;  // post-hoc recheck of the witness equations
    // The first-step neighborhoods are read as cylinders intersected with Z
    // explicitly; flagged here so reports carry the interpretation.
    std::string neighborhood_reading =
        "neighborhoods are cylinders, intersected with Z explicitly";
};

DVerification verify_d(const DConstruction& c, const Transducer& t, const SafetyAutomaton& z);
DVerification verify_d(const DConstruction& c, const FiniteStageMap& t);

}  // namespace cantor

#endif
