#ifndef GARCAT_SETS_HPP
#define GARCAT_SETS_HPP

#include "garcat/category.hpp"
#include "garcat/garside.hpp"

namespace garcat {

/// Constructible subset X(a; e) of the boundary: points extending a but none
/// of the exclusions. Stored reduced: every exclusion properly extends the
/// root, exclusions form an antichain, and the set is nonempty.
///
/// Emptiness and equality are decided through bounded cylinder enumeration,
/// which is valid whenever the category has no sources (every vertex receives
/// an edge in every factor), so that boundary points are exactly the infinite
/// paths.
struct BasicOpen {
    Morphism root;
    std::vector<Morphism> excl;

    const ObjectId& vertex() const { return root.tgt; }

    friend bool operator==(const BasicOpen& a, const BasicOpen& b) {
        return a.root == b.root && a.excl == b.excl;
    }
};

inline bool basic_less(const BasicOpen& a, const BasicOpen& b) {
    if (!(a.root == b.root)) return morphism_less(a.root, b.root);
    return std::lexicographical_compare(a.excl.begin(), a.excl.end(), b.excl.begin(), b.excl.end(),
                                        MorphismLess{});
}

/// Smallest degree at which membership in the set is decided by a prefix.
inline DegreeVector resolution(const BasicOpen& u) {
    DegreeVector d = u.root.degree();
    for (const Morphism& e : u.excl) d = deg_join(d, e.degree());
    return d;
}

/// All degree-d prefixes whose full cylinder lies inside the set; requires
/// d >= resolution(u) componentwise.
inline std::vector<Morphism> cylinders(const PathCategory& cat, const BasicOpen& u,
                                       const DegreeVector& d) {
    if (!deg_leq(resolution(u), d)) throw error(errc::degree, "cylinders: resolution too coarse");
    DegreeVector extra(d.size());
    for (size_t j = 0; j < d.size(); ++j) extra[j] = d[j] - u.root.degree()[j];
    std::vector<Morphism> out;
    for (const Morphism& c : cat.extensions_of(u.root, extra)) {
        bool excluded = false;
        for (const Morphism& e : u.excl)
            if (cat.left_divides(e, c)) {
                excluded = true;
                break;
            }
        if (!excluded) out.push_back(c);
    }
    return out;
}

inline bool is_empty(const PathCategory& cat, const Morphism& root,
                     const std::vector<Morphism>& excl) {
    BasicOpen probe{root, excl};
    return cylinders(cat, probe, resolution(probe)).empty();
}

/// Reduces X(root; excl) to the stored normal form; nullopt when empty.
inline std::optional<BasicOpen> reduce_basic(const PathCategory& cat, const Morphism& root,
                                             const std::vector<Morphism>& excl) {
    BasicOpen u{root, {}};
    for (const Morphism& e : excl) {
        if (e.tgt != root.tgt) throw error(errc::domain, "exclusion at a different object");
        if (cat.left_divides(e, root)) return std::nullopt;  // whole cone excluded
        for (const Morphism& m : cat.mcm(root, e)) u.excl.push_back(m);
    }
    // antichain: drop exclusions refining another exclusion
    std::sort(u.excl.begin(), u.excl.end(), MorphismLess{});
    u.excl.erase(std::unique(u.excl.begin(), u.excl.end()), u.excl.end());
    std::vector<Morphism> keep;
    for (const Morphism& e : u.excl) {
        bool dominated = false;
        for (const Morphism& f : u.excl)
            if (!(f == e) && cat.left_divides(f, e)) {
                dominated = true;
                break;
            }
        if (!dominated) keep.push_back(e);
    }
    u.excl = std::move(keep);
    if (is_empty(cat, u.root, u.excl)) return std::nullopt;
    return u;
}

inline std::optional<BasicOpen> basic_open(const PathCategory& cat, const Morphism& root,
                                           const std::vector<Morphism>& excl = {}) {
    return reduce_basic(cat, root, excl);
}

/// Intersection of two reduced basic sets, as disjoint reduced pieces (for
/// product path categories there is at most one).
inline std::vector<BasicOpen> intersect_basic(const PathCategory& cat, const BasicOpen& u,
                                              const BasicOpen& v) {
    std::vector<BasicOpen> out;
    if (u.vertex() != v.vertex()) return out;
    for (const Morphism& m : cat.mcm(u.root, v.root)) {
        std::vector<Morphism> excl;
        for (const Morphism& e : u.excl)
            for (const Morphism& x : cat.mcm(m, e)) excl.push_back(x);
        for (const Morphism& e : v.excl)
            for (const Morphism& x : cat.mcm(m, e)) excl.push_back(x);
        if (auto w = reduce_basic(cat, m, excl)) out.push_back(std::move(*w));
    }
    return out;
}

/// u \ v as disjoint reduced pieces.
inline std::vector<BasicOpen> subtract_basic(const PathCategory& cat, const BasicOpen& u,
                                             const BasicOpen& v) {
    if (u.vertex() != v.vertex()) return {u};
    std::vector<BasicOpen> out;
    // part outside the cone of v.root
    {
        std::vector<Morphism> excl = u.excl;
        excl.push_back(v.root);
        if (auto w = reduce_basic(cat, u.root, excl)) out.push_back(std::move(*w));
    }
    // parts under the exclusions of v, disjointified against one another
    for (size_t i = 0; i < v.excl.size(); ++i) {
        std::vector<Morphism> excl = u.excl;
        for (size_t j = 0; j < i; ++j)
            for (const Morphism& m : cat.mcm(v.excl[i], v.excl[j])) excl.push_back(m);
        for (const Morphism& m : cat.mcm(u.root, v.excl[i])) {
            std::vector<Morphism> adj;
            for (const Morphism& e : excl)
                for (const Morphism& x : cat.mcm(m, e)) adj.push_back(x);
            if (auto w = reduce_basic(cat, m, adj)) out.push_back(std::move(*w));
        }
    }
    return out;
}

/// Finite disjoint union of basic sets; parts pairwise disjoint, sorted.
struct CompactOpen {
    std::vector<BasicOpen> parts;

    bool empty() const { return parts.empty(); }

    friend bool operator==(const CompactOpen& a, const CompactOpen& b) { return a.parts == b.parts; }
};

inline CompactOpen co_of(const std::vector<BasicOpen>& parts) {
    CompactOpen c{parts};
    std::sort(c.parts.begin(), c.parts.end(), basic_less);
    return c;
}

inline CompactOpen co_basic(const BasicOpen& u) { return CompactOpen{{u}}; }

/// Disjoint, reduced, canonical representation of a union of basic sets.
inline CompactOpen decompose_disjoint(const PathCategory& cat, const std::vector<BasicOpen>& sets) {
    std::vector<BasicOpen> parts;
    for (const BasicOpen& raw : sets) {
        auto reduced = reduce_basic(cat, raw.root, raw.excl);
        if (!reduced) continue;
        std::vector<BasicOpen> pieces{*reduced};
        for (const BasicOpen& p : parts) {
            std::vector<BasicOpen> next;
            for (const BasicOpen& piece : pieces)
                for (BasicOpen& q : subtract_basic(cat, piece, p)) next.push_back(std::move(q));
            pieces = std::move(next);
        }
        for (BasicOpen& piece : pieces) parts.push_back(std::move(piece));
    }
    return co_of(parts);
}

inline CompactOpen co_union(const PathCategory& cat, const CompactOpen& a, const CompactOpen& b) {
    std::vector<BasicOpen> all = a.parts;
    all.insert(all.end(), b.parts.begin(), b.parts.end());
    return decompose_disjoint(cat, all);
}

inline CompactOpen co_intersect(const PathCategory& cat, const CompactOpen& a, const CompactOpen& b) {
    std::vector<BasicOpen> parts;
    for (const BasicOpen& u : a.parts)
        for (const BasicOpen& v : b.parts)
            for (BasicOpen& w : intersect_basic(cat, u, v)) parts.push_back(std::move(w));
    return co_of(parts);  // pieces of disjoint-by-part intersections stay disjoint
}

inline CompactOpen co_subtract(const PathCategory& cat, const CompactOpen& a, const CompactOpen& b) {
    std::vector<BasicOpen> parts = a.parts;
    for (const BasicOpen& v : b.parts) {
        std::vector<BasicOpen> next;
        for (const BasicOpen& u : parts)
            for (BasicOpen& w : subtract_basic(cat, u, v)) next.push_back(std::move(w));
        parts = std::move(next);
    }
    return co_of(parts);
}

/// The membership oracle behind set equality: two constructible sets agree iff
/// they contain the same cylinders at any degree at least both resolutions.
inline std::vector<Morphism> cylinders(const PathCategory& cat, const CompactOpen& u,
                                       const DegreeVector& d) {
    std::vector<Morphism> out;
    for (const BasicOpen& p : u.parts)
        for (Morphism& c : cylinders(cat, p, d)) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), MorphismLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline DegreeVector resolution(const PathCategory& cat, const CompactOpen& u) {
    DegreeVector d(cat.rank(), 0);
    for (const BasicOpen& p : u.parts) d = deg_join(d, resolution(p));
    return d;
}

inline bool co_equal(const PathCategory& cat, const CompactOpen& a, const CompactOpen& b) {
    if (a == b) return true;
    // different vertices contribute disjoint cylinders, so compare per vertex
    DegreeVector d = deg_join(resolution(cat, a), resolution(cat, b));
    std::map<ObjectId, std::pair<std::vector<Morphism>, std::vector<Morphism>>> per_vertex;
    for (const BasicOpen& p : a.parts)
        for (Morphism& c : cylinders(cat, p, d)) per_vertex[p.vertex()].first.push_back(std::move(c));
    for (const BasicOpen& p : b.parts)
        for (Morphism& c : cylinders(cat, p, d)) per_vertex[p.vertex()].second.push_back(std::move(c));
    for (auto& [v, cs] : per_vertex) {
        auto norm = [](std::vector<Morphism>& xs) {
            std::sort(xs.begin(), xs.end(), MorphismLess{});
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        };
        norm(cs.first);
        norm(cs.second);
        if (cs.first != cs.second) return false;
    }
    return true;
}

inline bool co_subset(const PathCategory& cat, const CompactOpen& a, const CompactOpen& b) {
    return co_subtract(cat, a, b).empty();
}

inline bool basic_subset(const PathCategory& cat, const BasicOpen& a, const BasicOpen& b) {
    return co_subset(cat, co_basic(a), co_basic(b));
}

inline bool basic_disjoint(const PathCategory& cat, const BasicOpen& a, const BasicOpen& b) {
    return intersect_basic(cat, a, b).empty();
}

/// Rewrites a basic set as a disjoint union of sets X(b; b f) whose exclusions
/// are single family steps over the root. Terminates because the root chain
/// climbs inside a locally finite level family.
inline CompactOpen push_to_family_form(const PathCategory& cat, const BasicOpen& u) {
    auto reduced = reduce_basic(cat, u.root, u.excl);
    if (!reduced) return CompactOpen{};
    std::vector<BasicOpen> done;
    std::vector<BasicOpen> work{*reduced};
    while (!work.empty()) {
        BasicOpen cur = work.back();
        work.pop_back();
        bool in_form = true;
        DegreeVector one(cat.rank(), 1);
        for (const Morphism& e : cur.excl) {
            DegreeVector q(cat.rank());
            for (size_t j = 0; j < cat.rank(); ++j)
                q[j] = e.degree()[j] - cur.root.degree()[j];
            if (!deg_leq(q, one)) {
                in_form = false;
                break;
            }
        }
        if (in_form) {
            done.push_back(std::move(cur));
            continue;
        }
        // split off the first family step under each exclusion
        std::vector<Morphism> heads;
        for (const Morphism& e : cur.excl) {
            Morphism quot = cat.left_quotient(cur.root, e);
            Morphism h = cat.compose(cur.root, head(cat, quot));
            if (std::find(heads.begin(), heads.end(), h) == heads.end()) heads.push_back(h);
        }
        std::sort(heads.begin(), heads.end(), MorphismLess{});
        if (auto stem = reduce_basic(cat, cur.root, heads)) done.push_back(std::move(*stem));
        for (size_t i = 0; i < heads.size(); ++i) {
            std::vector<Morphism> excl;
            for (size_t j = 0; j < i; ++j)
                for (const Morphism& m : cat.mcm(heads[i], heads[j])) excl.push_back(m);
            for (const Morphism& e : cur.excl)
                for (const Morphism& m : cat.mcm(heads[i], e)) excl.push_back(m);
            if (auto piece = reduce_basic(cat, heads[i], excl)) work.push_back(std::move(*piece));
        }
    }
    return co_of(done);
}

}  // namespace garcat

#endif
