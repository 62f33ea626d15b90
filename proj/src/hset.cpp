#include "cantor/hset.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cantor/regset.hpp"

namespace cantor {

std::string index_str(const IndexTuple& idx) {
    std::ostringstream os;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) os << ',';
        os << idx[i];
    }
    return os.str();
}

Word HFamily::code(const IndexTuple& idx) const {
    if (idx.empty()) return Word{};
    return codes.at(idx);
}

Point HFamily::point(const IndexTuple& idx) const {
    return Point(code(idx), "0");
}

Cylinder HFamily::base(const IndexTuple& idx, unsigned j) const {
    return Cylinder(code(idx) + Word(j - 1, '0'));
}

HFamily generate_h(unsigned k_max, unsigned i_max) {
    if (k_max < 1 || i_max < 1) throw std::invalid_argument("generate_h: bounds must be positive");
    HFamily h;
    h.k_max = k_max;
    h.i_max = i_max;
    std::vector<std::pair<IndexTuple, Word>> frontier{{IndexTuple{}, Word{}}};
    for (unsigned k = 1; k <= k_max; ++k) {
        std::vector<std::pair<IndexTuple, Word>> next;
        for (const auto& [idx, word] : frontier) {
            for (unsigned i = 1; i <= i_max; ++i) {
                IndexTuple child = idx;
                child.push_back(static_cast<int>(i));
                Word cw = word + Word(i - 1, '0') + '1';
                h.codes.emplace(child, cw);
                next.emplace_back(child, cw);
            }
        }
        frontier = std::move(next);
    }
    return h;
}

HConditionReport check_h_conditions(const HFamily& h) {
    HConditionReport r;
    r.a = r.a_printed = r.b = r.c = r.no_isolated = true;

    for (const auto& [idx, word] : h.codes) {
        // a) interpreted: U^1(child) inside U^1(parent), plus base
        // monotonicity U^{j+1} inside U^j (structural for stem bases).
        IndexTuple parent(idx.begin(), idx.end() - 1);
        Word pword = h.code(parent);
        if (!is_prefix(pword, word)) r.a = false;
        for (unsigned j = 1; j < h.i_max; ++j)
            if (!cylinder_contains(h.base(idx, j), h.base(idx, j + 1))) r.a = false;

        // a) as printed: U^{i_k}(parent) contains U^1(child), for k >= 1.
        if (parent.size() >= 1) {
            unsigned ik = static_cast<unsigned>(parent.back());
            if (!cylinder_contains(h.base(parent, ik), h.base(idx, 1))) r.a_printed = false;
        }

        // c) diam(U^{i1}(p_idx)) < 1/(i1+...+ik), exact.
        unsigned i1 = static_cast<unsigned>(idx.front());
        std::int64_t sum = 0;
        for (int i : idx) sum += i;
        Rational diam = cylinder_diameter(h.base(idx, i1));
        if (!(diam < Rational(1, sum))) r.c = false;
    }

    // b) sibling U^1 bases pairwise disjoint.
    std::map<IndexTuple, std::vector<IndexTuple>> children;
    for (const auto& [idx, word] : h.codes) {
        IndexTuple parent(idx.begin(), idx.end() - 1);
        children[parent].push_back(idx);
        (void)word;
    }
    for (const auto& [parent, kids] : children) {
        for (std::size_t i = 0; i < kids.size(); ++i)
            for (std::size_t j = i + 1; j < kids.size(); ++j)
                if (!cylinders_disjoint(h.base(kids[i], 1), h.base(kids[j], 1))) r.b = false;
        (void)parent;
    }

    // no isolated points at finite stage: children converge to their parent.
    for (const auto& [parent, kids] : children) {
        if (kids.empty()) { r.no_isolated = false; continue; }
        Point pp = h.point(parent);
        Rational prev(2, 1);
        std::vector<IndexTuple> ordered = kids;
        std::sort(ordered.begin(), ordered.end());
        for (const auto& kid : ordered) {
            Point kp = h.point(kid);
            if (kp == pp) { r.no_isolated = false; break; }
            Rational d = point_distance(kp, pp);
            if (!(d < prev)) { r.no_isolated = false; break; }
            prev = d;
        }
    }
    return r;
}

std::vector<const DNode*> DConstruction::d_points() const {
    std::vector<const DNode*> out;
    for (const auto& [idx, node] : nodes)
        if (is_odd(idx)) out.push_back(&node);
    return out;
}

std::vector<const DNode*> DConstruction::even_points() const {
    std::vector<const DNode*> out;
    for (const auto& [idx, node] : nodes)
        if (!is_odd(idx)) out.push_back(&node);
    return out;
}

namespace {

char flip(char c) { return c == '0' ? '1' : '0'; }

// Length of the common prefix of a finite word and a point unrolling.
std::size_t word_point_lcp(const Word& w, const Point& x) {
    std::size_t i = 0;
    while (i < w.size() && w[i] == x.at(i)) ++i;
    return i;
}

bool word_prefix_of_point(const Word& w, const Point& x) {
    return word_point_lcp(w, x) == w.size();
}

// Backend interface for the two map representations the construction runs
// over. All sets are implicitly intersected with Z.
struct DBackend {
    virtual ~DBackend() = default;
    // Lexicographically least points of Z /\ [include] minus the excluded
    // cylinders, up to `count` of them.
    virtual std::vector<Point> points_in(const Word& include, const std::vector<Word>& exclude,
                                         std::size_t count) = 0;
    virtual Point image_of(const Point& x) = 0;
    // Image points with lcp(candidate, p) exactly j, lex order.
    virtual std::vector<Point> tier_candidates(const Point& p, std::size_t j,
                                               std::size_t count) = 0;
    // Full preimage of `target` misses [stem].
    virtual bool preimage_disjoint(const Point& target, const Word& stem) = 0;
    // Least point of preimage(target) /\ Z avoiding all excluded cylinders.
    virtual std::optional<Point> least_preimage_in_z(const Point& target,
                                                     const std::vector<Word>& exclude) = 0;
    virtual std::size_t max_stem_length() const = 0;  // cap on cylinder stems
    virtual std::size_t tier_scan_limit(const Point& p) const = 0;
};

struct TransducerBackend : DBackend {
    const Transducer& t;
    SafetyAutomaton z;
    SafetyAutomaton image_z;

    TransducerBackend(const Transducer& t_, SafetyAutomaton z_) : t(t_), z(std::move(z_)) {
        if (!z.empty()) image_z = image_closed(t, z);
    }

    SafetyAutomaton region(const Word& include, const std::vector<Word>& exclude) {
        SafetyAutomaton s = boolean_op(BoolOp::Intersect, closed_from_clopen(ClopenSet({include})), z);
        if (!exclude.empty()) s = subtract_clopen(s, ClopenSet(exclude));
        return s;
    }

    std::vector<Point> points_in(const Word& include, const std::vector<Word>& exclude,
                                 std::size_t count) override {
        return least_points(region(include, exclude), count);
    }

    Point image_of(const Point& x) override { return eval_point(t, x); }

    std::vector<Point> tier_candidates(const Point& p, std::size_t j, std::size_t count) override {
        Word stem = p.prefix(j) + flip(p.at(j));
        SafetyAutomaton tier =
            boolean_op(BoolOp::Intersect, closed_from_clopen(ClopenSet({stem})), image_z);
        return least_points(tier, count);
    }

    bool preimage_disjoint(const Point& target, const Word& stem) override {
        SafetyAutomaton pre = preimage_point(t, target);
        return is_empty(boolean_op(BoolOp::Intersect, pre, closed_from_clopen(ClopenSet({stem}))));
    }

    std::optional<Point> least_preimage_in_z(const Point& target,
                                             const std::vector<Word>& exclude) override {
        SafetyAutomaton pre = boolean_op(BoolOp::Intersect, preimage_point(t, target), z);
        if (!exclude.empty()) pre = subtract_clopen(pre, ClopenSet(exclude));
        if (pre.empty()) return std::nullopt;
        return least_point(pre);
    }

    std::size_t max_stem_length() const override { return 64; }
    std::size_t tier_scan_limit(const Point& p) const override {
        (void)p;
        return 32;  // tiers beyond the neighborhood scale; budgeted
    }
};

struct TableBackend : DBackend {
    const FiniteStageMap& t;
    std::vector<Word> z_leaves;  // sorted
    std::size_t max_value_len = 0;

    TableBackend(const FiniteStageMap& t_, std::vector<Word> z) : t(t_), z_leaves(std::move(z)) {
        std::sort(z_leaves.begin(), z_leaves.end());
        for (const Word& v : t.image_values()) max_value_len = std::max(max_value_len, v.size());
    }

    static Point leaf_point(const Word& leaf) { return Point(leaf, "0"); }

    std::vector<Point> points_in(const Word& include, const std::vector<Word>& exclude,
                                 std::size_t count) override {
        std::vector<Point> out;
        for (const Word& l : z_leaves) {
            if (!is_prefix(include, l)) continue;
            bool blocked = false;
            for (const Word& e : exclude)
                if (is_prefix(e, l)) { blocked = true; break; }
            if (blocked) continue;
            out.push_back(leaf_point(l));
            if (out.size() >= count) break;
        }
        return out;
    }

    Point image_of(const Point& x) override {
        return Point(t.output(x.prefix(t.depth())), "0");
    }

    std::vector<Point> tier_candidates(const Point& p, std::size_t j, std::size_t count) override {
        Word stem = p.prefix(j) + flip(p.at(j));
        std::set<Point> cands;
        for (const Word& v : t.image_values()) {
            Point vp(v, "0");
            if (word_prefix_of_point(stem, vp)) cands.insert(vp);
        }
        std::vector<Point> out(cands.begin(), cands.end());
        if (out.size() > count) out.resize(count);
        return out;
    }

    bool preimage_disjoint(const Point& target, const Word& stem) override {
        for (const Word& l : t.leaves()) {
            if (!is_prefix(stem, l)) continue;
            Word v = t.output(l);
            // l can map to target only if its committed output lies on target
            if (v == target.prefix(v.size())) return false;
        }
        return true;
    }

    std::optional<Point> least_preimage_in_z(const Point& target,
                                             const std::vector<Word>& exclude) override {
        for (const Word& l : z_leaves) {
            if (Point(t.output(l), "0") != target) continue;
            bool blocked = false;
            for (const Word& e : exclude)
                if (is_prefix(e, l)) { blocked = true; break; }
            if (!blocked) return leaf_point(l);
        }
        return std::nullopt;
    }

    std::size_t max_stem_length() const override { return t.depth(); }
    std::size_t tier_scan_limit(const Point& p) const override {
        (void)p;
        return max_value_len + 1;
    }
};

// Isolating-cylinder stem for a freshly selected point. `container` is the
// cylinder the stem must stay inside (ring for convergence children, empty
// for witness points). Returns nullopt when the point cannot be isolated
// from the registry within the backend's stem cap.
std::optional<Word> isolate(const Point& x, const Word& container,
                            const std::vector<Word>& registry, std::size_t cap) {
    std::size_t hard = container.size();
    for (const Word& s : registry) {
        if (word_prefix_of_point(s, x)) {
            // A registered cylinder containing x must be an ancestor
            // containing the whole container region.
            if (!is_prefix(s, container)) return std::nullopt;
        } else {
            hard = std::max(hard, word_point_lcp(s, x) + 1);
        }
    }
    if (hard > cap) return std::nullopt;
    // Prefer to pin the point past its head; clamped to the backend's stem cap.
    std::size_t m = std::max(hard, std::min(x.head.size() + 1, cap));
    return x.prefix(m);
}

struct Selection {
    Point x;
    Word x_stem;
    Point p;
    Word p_stem;
};

DConstruction run_construction(DBackend& backend, unsigned index_bound, unsigned depth_bound,
                               bool table) {
    if (index_bound < 1 || depth_bound < 1 || depth_bound % 2 == 0)
        throw std::invalid_argument("construct_d: index bound >= 1 and odd depth bound required");

    DConstruction c;
    c.index_bound = index_bound;
    c.depth_bound = depth_bound;
    c.table_backend = table;

    auto roots = backend.points_in(Word{}, {}, 1);
    if (roots.empty()) throw ConstructionObstructed({}, "Z is empty");
    c.root.idx = {};
    c.root.x = roots[0];
    c.root.p = backend.image_of(roots[0]);
    c.root.x_stem = Word{};
    c.root.p_stem = Word{};

    std::vector<Word> registry;

    std::vector<DNode*> level{&c.root};
    for (unsigned depth = 1; depth <= depth_bound; ++depth) {
        std::vector<DNode*> next_level;
        bool odd = depth % 2 == 1;
        for (DNode* parent : level) {
            std::vector<Selection> siblings;
            if (odd) {
                // Convergence children: inside the parent's neighborhood, in
                // the ring between consecutive base elements; images converge.
                std::size_t base_len = parent->idx.empty() ? 1 : parent->x_stem.size();
                Rational prev_dist(2, 1);
                for (unsigned k = 1; k <= index_bound; ++k) {
                    IndexTuple idx = parent->idx;
                    idx.push_back(static_cast<int>(k));
                    Word ring = parent->x.prefix(base_len + k - 1) +
                                flip(parent->x.at(base_len + k - 1));
                    std::vector<Word> exclude;
                    for (const Word& s : registry)
                        if (!is_prefix(s, ring)) exclude.push_back(s);
                    std::optional<Selection> chosen;
                    for (const Point& cand : backend.points_in(ring, exclude, 8)) {
                        Point img = backend.image_of(cand);
                        if (img == parent->p) continue;
                        if (!word_prefix_of_point(parent->p_stem, img)) continue;
                        Rational d = point_distance(img, parent->p);
                        if (!(d < prev_dist)) continue;
                        Word sp = img.prefix(*point_lcp(img, parent->p) + 1);
                        bool sp_ok = true;
                        for (const Selection& sib : siblings)
                            if (!cylinders_disjoint(Cylinder(sp), Cylinder(sib.p_stem)))
                                sp_ok = false;
                        if (!sp_ok) continue;
                        auto sx = isolate(cand, ring, registry, backend.max_stem_length());
                        if (!sx) continue;
                        chosen = Selection{cand, *sx, img, sp};
                        break;
                    }
                    if (!chosen)
                        throw ConstructionObstructed(
                            idx, "no admissible convergence child in ring " + std::to_string(k));
                    registry.push_back(chosen->x_stem);
                    prev_dist = point_distance(chosen->p, parent->p);
                    siblings.push_back(*chosen);
                    DNode node{idx, chosen->x, chosen->x_stem, chosen->p, chosen->p_stem};
                    auto [it, ok] = c.nodes.emplace(idx, node);
                    (void)ok;
                    next_level.push_back(&it->second);
                }
            } else {
                // Witness children: image points converging to the parent's
                // image whose full preimage avoids the parent's isolating
                // cylinder; the selected point sits in that preimage, inside
                // Z, in a fresh cylinder disjoint from everything chosen.
                std::size_t tier = parent->p_stem.size();
                std::size_t tier_cap = tier + backend.tier_scan_limit(parent->p);
                for (unsigned l = 1; l <= index_bound; ++l) {
                    IndexTuple idx = parent->idx;
                    idx.push_back(static_cast<int>(l));
                    std::optional<Selection> chosen;
                    for (; tier <= tier_cap && !chosen; ++tier) {
                        for (const Point& target : backend.tier_candidates(parent->p, tier, 8)) {
                            if (target == parent->p) continue;
                            Word sp = target.prefix(tier + 1);
                            bool sp_ok = true;
                            for (const Selection& sib : siblings)
                                if (!cylinders_disjoint(Cylinder(sp), Cylinder(sib.p_stem)))
                                    sp_ok = false;
                            if (!sp_ok) continue;
                            if (!backend.preimage_disjoint(target, parent->x_stem)) continue;
                            auto wit = backend.least_preimage_in_z(target, registry);
                            if (!wit) continue;
                            auto sx = isolate(*wit, Word{}, registry, backend.max_stem_length());
                            if (!sx) continue;
                            chosen = Selection{*wit, *sx, target, sp};
                            break;
                        }
                    }
                    if (!chosen)
                        throw ConstructionObstructed(
                            idx, "no admissible witness target near the parent image");
                    registry.push_back(chosen->x_stem);
                    siblings.push_back(*chosen);
                    DNode node{idx, chosen->x, chosen->x_stem, chosen->p, chosen->p_stem};
                    auto [it, ok] = c.nodes.emplace(idx, node);
                    (void)ok;
                    next_level.push_back(&it->second);
                }
            }
        }
        level = std::move(next_level);
    }
    return c;
}

DVerification run_verification(const DConstruction& c, DBackend& backend,
                               ImageMatch injectivity_known) {
    DVerification v;

    // Discreteness: isolating cylinders of D pairwise disjoint, each holding
    // exactly one selected point.
    auto dpts = c.d_points();
    v.discrete = true;
    for (std::size_t i = 0; i < dpts.size(); ++i) {
        for (std::size_t j = i + 1; j < dpts.size(); ++j)
            if (!cylinders_disjoint(Cylinder(dpts[i]->x_stem), Cylinder(dpts[j]->x_stem)))
                v.discrete = false;
        if (!word_prefix_of_point(dpts[i]->x_stem, dpts[i]->x)) v.discrete = false;
        for (std::size_t j = 0; j < dpts.size(); ++j)
            if (i != j && word_prefix_of_point(dpts[i]->x_stem, dpts[j]->x)) v.discrete = false;
    }

    std::vector<const DNode*> all;
    all.push_back(&c.root);
    for (const auto& [idx, node] : c.nodes) all.push_back(&node);

    std::set<Point> d_images;
    for (const DNode* n : dpts) d_images.insert(n->p);

    // Density: every neighborhood of every generated point above the last
    // level contains an image of D.
    v.dense = true;
    for (const DNode* q : all) {
        if (q->idx.size() >= c.depth_bound) continue;
        bool hit = false;
        for (const DNode* odd : dpts)
            if (word_prefix_of_point(q->p_stem, odd->p)) { hit = true; break; }
        if (!hit) v.dense = false;
    }

    // Codensity: each such neighborhood also contains a generated point that
    // is not an image of D (an even-level point, possibly the center).
    v.codense = true;
    auto evens = c.even_points();
    for (const DNode* q : all) {
        if (q->idx.size() >= c.depth_bound) continue;
        bool hit = false;
        for (const DNode* ev : evens) {
            if (d_images.count(ev->p)) continue;
            if (word_prefix_of_point(q->p_stem, ev->p)) { hit = true; break; }
        }
        if (!hit && !d_images.count(c.root.p) && word_prefix_of_point(q->p_stem, c.root.p))
            hit = true;
        if (!hit) v.codense = false;
    }

    // The paper's witness equations, re-verified rather than trusted.
    v.preimage_equations = true;
    for (const DNode* ev : evens) {
        IndexTuple parent_idx(ev->idx.begin(), ev->idx.end() - 1);
        const DNode& parent = c.nodes.at(parent_idx);
        if (!backend.preimage_disjoint(ev->p, parent.x_stem)) v.preimage_equations = false;
    }
    // Recorded images must be the map's actual values.
    for (const DNode* n : all)
        if (backend.image_of(n->x) != n->p) v.preimage_equations = false;

    v.image_match = injectivity_known;
    return v;
}

}  // namespace

DConstruction construct_d(const Transducer& t, const SafetyAutomaton& z, unsigned index_bound,
                          unsigned depth_bound) {
    if (!subset_of(z, t.domain))
        throw AmbientViolation("construct_d: Z not within the domain");
    TransducerBackend backend(t, minimize(z));
    return run_construction(backend, index_bound, depth_bound, false);
}

DConstruction construct_d(const FiniteStageMap& t, const std::vector<Word>& z_leaves,
                          unsigned index_bound, unsigned depth_bound) {
    TableBackend backend(t, z_leaves.empty() ? t.leaves() : z_leaves);
    return run_construction(backend, index_bound, depth_bound, true);
}

DVerification verify_d(const DConstruction& c, const Transducer& t, const SafetyAutomaton& z) {
    TransducerBackend backend(t, minimize(z));
    InjectivityVerdict inj = is_injective(t);
    ImageMatch match = ImageMatch::NotApplicable;
    if (inj.injective && inj.saturated) {
        // O(D): the union of the isolating cylinders; compare image /\ H
        // with f(D) /\ H over the generated family.
        std::vector<Word> stems;
        for (const DNode* n : c.d_points()) stems.push_back(n->x_stem);
        SafetyAutomaton od =
            boolean_op(BoolOp::Intersect, closed_from_clopen(ClopenSet(stems)), t.domain);
        SafetyAutomaton img = od.empty() ? SafetyAutomaton{} : image_closed(t, od);
        std::set<Point> d_images;
        for (const DNode* n : c.d_points()) d_images.insert(n->p);
        match = ImageMatch::True;
        std::vector<const DNode*> all;
        all.push_back(&c.root);
        for (const auto& [idx, node] : c.nodes) all.push_back(&node);
        for (const DNode* n : all) {
            bool in_image = !img.empty() && member(n->p, img);
            bool in_fd = d_images.count(n->p) > 0;
            if (in_image != in_fd) match = ImageMatch::False;
        }
    }
    DVerification v = run_verification(c, backend, match);
    return v;
}

DVerification verify_d(const DConstruction& c, const FiniteStageMap& t) {
    TableBackend backend(t, t.leaves());
    ImageMatch match = ImageMatch::NotApplicable;
    if (t.injective_at_stage()) {
        std::vector<Word> stems;
        for (const DNode* n : c.d_points()) stems.push_back(n->x_stem);
        ClopenSet od(stems);
        std::set<Point> image_points;
        for (const Word& l : t.leaves())
            if (od.contains(Point(l, "0"))) image_points.insert(Point(t.output(l), "0"));
        std::set<Point> d_images;
        for (const DNode* n : c.d_points()) d_images.insert(n->p);
        match = ImageMatch::True;
        std::vector<const DNode*> all;
        all.push_back(&c.root);
        for (const auto& [idx, node] : c.nodes) all.push_back(&node);
        for (const DNode* n : all) {
            bool in_image = image_points.count(n->p) > 0;
            bool in_fd = d_images.count(n->p) > 0;
            if (in_image != in_fd) match = ImageMatch::False;
        }
    }
    return run_verification(c, backend, match);
}

}  // namespace cantor
