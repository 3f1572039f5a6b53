#ifndef GARCAT_TUPLES_HPP
#define GARCAT_TUPLES_HPP

#include <sstream>

#include "garcat/zs.hpp"

namespace garcat {

/// Object of the bisection category: an ordered tuple of compact open sets.
struct TupleObject {
    std::vector<CompactOpen> entries;

    friend bool operator==(const TupleObject& a, const TupleObject& b) { return a.entries == b.entries; }
};

/// One bisection of a tuple morphism: the arrow applied on a vertex-rooted
/// basic domain, mapping into the target entry named by base.
struct TupleEntry {
    ZSMorphism arrow;
    BasicOpen dom;  // X(d(arrow); f), vertex-rooted
    uint32_t base;

    friend bool operator==(const TupleEntry& a, const TupleEntry& b) {
        return a.arrow == b.arrow && a.dom == b.dom && a.base == b.base;
    }
};

inline bool entry_less(const TupleEntry& a, const TupleEntry& b) {
    if (a.base != b.base) return a.base < b.base;
    if (!(a.arrow == b.arrow)) return zs_less(a.arrow, b.arrow);
    return basic_less(a.dom, b.dom);
}

struct TupleMorphism {
    std::vector<TupleEntry> entries;
    TupleObject target;

    friend bool operator==(const TupleMorphism& a, const TupleMorphism& b) {
        return a.entries == b.entries && a.target == b.target;
    }
};

inline BasicOpen entry_range(const Context& ctx, const TupleEntry& e) {
    std::vector<Morphism> excl;
    for (const Morphism& f : e.dom.excl)
        excl.push_back(ctx.cat().compose(e.arrow.path, ctx.act(e.arrow.twist, f)));
    auto r = reduce_basic(ctx.cat(), e.arrow.path, excl);
    if (!r) throw error(errc::emptiness, "entry with empty range");
    return *r;
}

inline TupleObject source_of(const TupleMorphism& m) {
    TupleObject s;
    for (const TupleEntry& e : m.entries) s.entries.push_back(co_basic(e.dom));
    return s;
}

inline bool object_equal(const Context& ctx, const TupleObject& a, const TupleObject& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (size_t i = 0; i < a.entries.size(); ++i)
        if (!co_equal(ctx.cat(), a.entries[i], b.entries[i])) return false;
    return true;
}

/// Structural and partition validity; used by tests and at ingestion points.
inline bool tuple_valid(const Context& ctx, const TupleMorphism& m) {
    for (const TupleEntry& e : m.entries) {
        if (e.base >= m.target.entries.size()) return false;
        if (!e.dom.root.is_identity()) return false;
        if (e.dom.vertex() != zs_domain(ctx, e.arrow)) return false;
    }
    for (size_t j = 0; j < m.target.entries.size(); ++j) {
        std::vector<BasicOpen> ranges;
        for (const TupleEntry& e : m.entries)
            if (e.base == j) ranges.push_back(entry_range(ctx, e));
        for (size_t p = 0; p < ranges.size(); ++p)
            for (size_t q = p + 1; q < ranges.size(); ++q)
                if (!basic_disjoint(ctx.cat(), ranges[p], ranges[q])) return false;
        if (!co_equal(ctx.cat(), co_of(ranges), m.target.entries[j])) return false;
    }
    return true;
}

/// Semantic equality in the bisection category: entrywise equal bisections
/// (twists may differ by words acting trivially on the domain).
inline bool tuple_eq(const Context& ctx, const TupleMorphism& a, const TupleMorphism& b) {
    if (a.entries.size() != b.entries.size()) return false;
    if (!object_equal(ctx, a.target, b.target)) return false;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        const TupleEntry& x = a.entries[i];
        const TupleEntry& y = b.entries[i];
        if (x.base != y.base || !(x.arrow.path == y.arrow.path)) return false;
        if (!co_equal(ctx.cat(), co_basic(x.dom), co_basic(y.dom))) return false;
        GroupWord diff = x.arrow.twist.inverse().then(y.arrow.twist);
        if (!diff.empty() && !is_trivial_on(ctx, diff, x.dom)) return false;
    }
    return true;
}

inline TupleMorphism tuple_identity(const Context& ctx, const TupleObject& x) {
    TupleMorphism m;
    m.target = x;
    for (size_t j = 0; j < x.entries.size(); ++j) {
        if (x.entries[j].parts.size() != 1 || !x.entries[j].parts[0].root.is_identity())
            throw error(errc::domain, "identity needs vertex-rooted single-part entries");
        const BasicOpen& u = x.entries[j].parts[0];
        m.entries.push_back({zs_identity(ctx, u.vertex()), u, static_cast<uint32_t>(j)});
    }
    return m;
}

inline bool is_unit_tuple(const TupleMorphism& m) {
    return std::all_of(m.entries.begin(), m.entries.end(),
                       [](const TupleEntry& e) { return zs_is_unit(e.arrow); });
}

/// Inverse of a unit: the base map must be a bijection onto the target.
inline TupleMorphism invert_unit(const Context& ctx, const TupleMorphism& u) {
    if (!is_unit_tuple(u)) throw error(errc::domain, "invert_unit: not a unit");
    if (u.entries.size() != u.target.entries.size())
        throw error(errc::domain, "invert_unit: base map not bijective");
    TupleMorphism r;
    r.target = source_of(u);
    r.entries.resize(u.entries.size());
    std::vector<bool> hit(u.entries.size(), false);
    for (size_t i = 0; i < u.entries.size(); ++i) {
        const TupleEntry& e = u.entries[i];
        if (hit[e.base]) throw error(errc::domain, "invert_unit: base map not bijective");
        hit[e.base] = true;
        BasicOpen moved = act_set(ctx, e.arrow.twist, e.dom);
        r.entries[e.base] =
            TupleEntry{ZSMorphism{ctx.cat().identity(moved.vertex()), e.arrow.twist.inverse()}, moved,
                       static_cast<uint32_t>(i)};
    }
    return r;
}

/// Entrywise composition (b a)_i = b_{base(i)} a_i.
inline TupleMorphism compose_tuple(const Context& ctx, const TupleMorphism& b, const TupleMorphism& a) {
    if (!object_equal(ctx, source_of(b), a.target))
        throw error(errc::composition, "compose_tuple: object mismatch");
    TupleMorphism r;
    r.target = b.target;
    for (const TupleEntry& e : a.entries) {
        const TupleEntry& mid = b.entries[e.base];
        r.entries.push_back({compose_zs(ctx, mid.arrow, e.arrow), e.dom, mid.base});
    }
    return r;
}

/// Disjoint union: concatenated entries and targets, bases shifted.
inline TupleMorphism amalg(const TupleMorphism& a, const TupleMorphism& b) {
    TupleMorphism r = a;
    uint32_t shift = static_cast<uint32_t>(a.target.entries.size());
    for (TupleEntry e : b.entries) {
        e.base += shift;
        r.entries.push_back(std::move(e));
    }
    for (const CompactOpen& u : b.target.entries) r.target.entries.push_back(u);
    return r;
}

// ---------------------------------------------------------------------------
// gamma morphisms

/// Splitting data: vertex, exclusion set inside vS, and an mcm-closed,
/// duplicate-free source family in vC.
struct GammaSpec {
    ObjectId vertex;
    std::vector<Morphism> excl;
    std::vector<Morphism> family;
};

inline std::vector<Morphism> family_at(const PathCategory& cat, const ObjectId& v) {
    return canonical_family(cat).at(v);
}

inline void validate_gamma_spec(const Context& ctx, const GammaSpec& spec) {
    const PathCategory& cat = ctx.cat();
    DegreeVector one(cat.rank(), 1);
    for (const Morphism& e : spec.excl) {
        if (e.tgt != spec.vertex || e.is_identity() || !deg_leq(e.degree(), one))
            throw error(errc::domain, "gamma: exclusions must lie in vS");
    }
    for (size_t i = 0; i < spec.family.size(); ++i) {
        const Morphism& s = spec.family[i];
        if (s.tgt != spec.vertex || s.is_identity())
            throw error(errc::domain, "gamma: family members must be non-units at the vertex");
        for (size_t j = i + 1; j < spec.family.size(); ++j)
            if (s == spec.family[j]) throw error(errc::domain, "gamma: duplicate family member");
    }
    for (const Morphism& s : spec.family)
        for (const Morphism& t : spec.family)
            for (const Morphism& m : cat.mcm(s, t))
                if (std::find(spec.family.begin(), spec.family.end(), m) == spec.family.end())
                    throw error(errc::domain, "gamma: family not closed under mcms");
}

/// Residual exclusion set f_s: minimal non-unit extensions f with s f in the
/// family or s f in mcm(s, excl).
inline std::vector<Morphism> residual_exclusions(const Context& ctx, const GammaSpec& spec,
                                                 const Morphism& s) {
    const PathCategory& cat = ctx.cat();
    bool member = s.is_identity() && s.tgt == spec.vertex;
    for (const Morphism& t : spec.family)
        if (t == s) member = true;
    if (!member) throw error(errc::domain, "residual_exclusions: s outside {v} u family");
    std::vector<Morphism> cands;
    for (const Morphism& t : spec.family)
        if (cat.properly_left_divides(s, t)) cands.push_back(cat.left_quotient(s, t));
    for (const Morphism& e : spec.excl)
        for (const Morphism& m : cat.mcm(s, e))
            if (cat.properly_left_divides(s, m)) cands.push_back(cat.left_quotient(s, m));
    std::sort(cands.begin(), cands.end(), MorphismLess{});
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::vector<Morphism> out;
    for (const Morphism& f : cands) {
        bool dominated = false;
        for (const Morphism& g : cands)
            if (!(g == f) && cat.left_divides(g, f)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(f);
    }
    return out;
}

/// The canonical splitting of X(v; excl) along the family: one bisection per
/// surviving member, with residual domains; entries with empty domain (and
/// members under an exclusion) are dropped.
inline TupleMorphism gamma(const Context& ctx, const GammaSpec& spec) {
    const PathCategory& cat = ctx.cat();
    validate_gamma_spec(ctx, spec);
    auto target_set = reduce_basic(cat, cat.identity(spec.vertex), spec.excl);
    if (!target_set) throw error(errc::emptiness, "gamma: empty target");

    std::vector<Morphism> members{cat.identity(spec.vertex)};
    {
        std::vector<Morphism> fam = spec.family;
        std::sort(fam.begin(), fam.end(), MorphismLess{});
        for (Morphism& s : fam) members.push_back(std::move(s));
    }

    TupleMorphism g;
    g.target.entries.push_back(co_basic(*target_set));
    for (const Morphism& s : members) {
        if (!s.is_identity()) {
            bool buried = false;
            for (const Morphism& e : spec.excl)
                if (cat.left_divides(e, s)) {
                    buried = true;
                    break;
                }
            if (buried) continue;
        }
        std::vector<Morphism> res = residual_exclusions(ctx, spec, s);
        auto dom = reduce_basic(cat, cat.identity(s.dom), res);
        if (!dom) continue;
        g.entries.push_back({zs_of(s), *dom, 0});
    }
    return g;
}

/// Right Garside map: the amalgamated full splitting over every entry of x.
inline TupleMorphism delta_of(const Context& ctx, const TupleObject& x) {
    TupleMorphism out;
    bool first = true;
    for (const CompactOpen& u : x.entries) {
        if (u.parts.size() != 1 || !u.parts[0].root.is_identity())
            throw error(errc::domain, "delta: entries must be vertex-rooted basic sets");
        GammaSpec spec{u.parts[0].vertex(), u.parts[0].excl, family_at(ctx.cat(), u.parts[0].vertex())};
        TupleMorphism g = gamma(ctx, spec);
        out = first ? std::move(g) : amalg(out, g);
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// lcm / quotients / gcd

inline uint32_t arrow_norm(const TupleEntry& e) { return deg_max(e.arrow.path.degree()); }

/// Membership in the divisors of the Garside map: arrows of norm at most one
/// and exclusion degrees bounded so that ||arrow . f|| <= 1.
inline bool is_delta_divisor(const Context& ctx, const TupleMorphism& m) {
    DegreeVector one(ctx.cat().rank(), 1);
    for (const TupleEntry& e : m.entries) {
        if (!deg_leq(e.arrow.path.degree(), one)) return false;
        for (const Morphism& f : e.dom.excl)
            if (!deg_leq(deg_add(e.arrow.path.degree(), f.degree()), one)) return false;
    }
    return true;
}

/// lcm completions: a a' = b b' is the least common multiple; pieces are
/// indexed by overlaps of ranges pulled back through the lifted mcm.
inline std::pair<TupleMorphism, TupleMorphism> lcm_tuple(const Context& ctx, const TupleMorphism& a,
                                                         const TupleMorphism& b) {
    if (!object_equal(ctx, a.target, b.target)) throw error(errc::domain, "lcm_tuple: targets differ");
    const PathCategory& cat = ctx.cat();
    TupleMorphism ap, bp;
    ap.target = source_of(a);
    bp.target = source_of(b);
    for (size_t i = 0; i < a.entries.size(); ++i) {
        BasicOpen ra = entry_range(ctx, a.entries[i]);
        for (size_t j = 0; j < b.entries.size(); ++j) {
            if (a.entries[i].base != b.entries[j].base) continue;
            BasicOpen rb = entry_range(ctx, b.entries[j]);
            for (const BasicOpen& piece : intersect_basic(cat, ra, rb)) {
                std::vector<Morphism> quot;
                for (const Morphism& e : piece.excl) quot.push_back(cat.left_quotient(piece.root, e));
                auto dom = reduce_basic(cat, cat.identity(piece.root.dom), quot);
                if (!dom) continue;
                ZSMorphism m = zs_of(piece.root);
                ap.entries.push_back(
                    {zs_left_quotient(ctx, a.entries[i].arrow, m), *dom, static_cast<uint32_t>(i)});
                bp.entries.push_back(
                    {zs_left_quotient(ctx, b.entries[j].arrow, m), *dom, static_cast<uint32_t>(j)});
            }
        }
    }
    return {ap, bp};
}

/// Exact division: the unique t with k t = m (entrywise), or a divisibility
/// error when k is not a left divisor.
inline TupleMorphism tuple_left_quotient(const Context& ctx, const TupleMorphism& k,
                                         const TupleMorphism& m) {
    if (!object_equal(ctx, k.target, m.target))
        throw error(errc::divisibility, "tuple_left_quotient: targets differ");
    TupleMorphism t;
    t.target = source_of(k);
    for (const TupleEntry& e : m.entries) {
        BasicOpen re = entry_range(ctx, e);
        const TupleEntry* host = nullptr;
        size_t host_index = 0;
        for (size_t p = 0; p < k.entries.size(); ++p) {
            if (k.entries[p].base != e.base) continue;
            if (basic_subset(ctx.cat(), re, entry_range(ctx, k.entries[p]))) {
                host = &k.entries[p];
                host_index = p;
                break;
            }
        }
        if (!host || !zs_left_divides(ctx, host->arrow, e.arrow))
            throw error(errc::divisibility, "tuple_left_quotient: not a divisor");
        t.entries.push_back({zs_left_quotient(ctx, host->arrow, e.arrow), e.dom,
                             static_cast<uint32_t>(host_index)});
    }
    TupleMorphism check = compose_tuple(ctx, k, t);
    if (!(check.entries == m.entries))
        throw error(errc::divisibility, "tuple_left_quotient: division check failed");
    return t;
}

inline bool tuple_left_divides(const Context& ctx, const TupleMorphism& k, const TupleMorphism& m) {
    try {
        tuple_left_quotient(ctx, k, m);
        return true;
    } catch (const error&) {
        return false;
    }
}

/// Right complement against the Garside map: k . complement = Delta(target).
inline TupleMorphism delta_complement(const Context& ctx, const TupleMorphism& k) {
    return tuple_left_quotient(ctx, k, delta_of(ctx, k.target));
}

namespace detail {

/// Degree-(1,...,1) cylinders at v (the atoms deciding every divisor set).
inline std::vector<Morphism> atoms_at(const PathCategory& cat, const ObjectId& v) {
    return cat.morphisms_of_degree(v, DegreeVector(cat.rank(), 1));
}

inline std::vector<size_t> atom_set_of(const PathCategory& cat, const std::vector<Morphism>& atoms,
                                       const Morphism& root, const std::vector<Morphism>& excl) {
    std::vector<size_t> out;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (!cat.left_divides(root, atoms[i])) continue;
        bool hit = false;
        for (const Morphism& e : excl)
            if (cat.left_divides(e, atoms[i])) {
                hit = true;
                break;
            }
        if (!hit) out.push_back(i);
    }
    return out;
}

inline std::vector<Morphism> divisors_of(const PathCategory& cat, const Morphism& h) {
    std::vector<Morphism> out;
    DegreeVector d = h.degree();
    DegreeVector p(d.size(), 0);
    std::function<void(size_t)> go = [&](size_t j) {
        if (j == d.size()) {
            out.push_back(cat.factorize_at_degree(h, p).first);
            return;
        }
        for (uint32_t x = 0; x <= d[j]; ++x) {
            p[j] = x;
            go(j + 1);
        }
        p[j] = 0;
    };
    go(0);
    std::sort(out.begin(), out.end(), [](const Morphism& x, const Morphism& y) {
        DegreeVector dx = x.degree(), dy = y.degree();
        uint32_t sx = 0, sy = 0;
        for (uint32_t q : dx) sx += q;
        for (uint32_t q : dy) sy += q;
        if (sx != sy) return sx > sy;  // deepest first
        return morphism_less(x, y);
    });
    return out;
}

}  // namespace detail

/// Left gcd of two Garside-map divisors at the same target: overlap blocks of
/// the two range partitions, each covered by the deepest expressible piece.
inline TupleMorphism gcd_tuple(const Context& ctx, const TupleMorphism& a, const TupleMorphism& b) {
    if (!object_equal(ctx, a.target, b.target)) throw error(errc::domain, "gcd_tuple: targets differ");
    const PathCategory& cat = ctx.cat();
    TupleMorphism out;
    out.target = a.target;
    for (size_t j = 0; j < a.target.entries.size(); ++j) {
        struct Piece {
            BasicOpen range;
            const Morphism* path;
        };
        std::vector<Piece> pieces;
        for (const TupleEntry& e : a.entries)
            if (e.base == j) pieces.push_back({entry_range(ctx, e), &e.arrow.path});
        size_t na = pieces.size();
        for (const TupleEntry& e : b.entries)
            if (e.base == j) pieces.push_back({entry_range(ctx, e), &e.arrow.path});
        if (pieces.empty()) continue;

        // connected components of the overlap graph
        std::vector<size_t> parent(pieces.size());
        for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        std::function<size_t(size_t)> find = [&](size_t x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (size_t p = 0; p < na; ++p)
            for (size_t q = na; q < pieces.size(); ++q)
                if (!basic_disjoint(cat, pieces[p].range, pieces[q].range))
                    parent[find(p)] = find(q);

        std::map<size_t, std::vector<size_t>> blocks;
        for (size_t p = 0; p < pieces.size(); ++p) blocks[find(p)].push_back(p);

        for (auto& [root, members] : blocks) {
            // deepest common prefix of the member arrows
            Morphism h = *pieces[members[0]].path;
            for (size_t m : members) {
                const Morphism& p = *pieces[m].path;
                DegreeVector cut(cat.rank());
                for (size_t r = 0; r < cat.rank(); ++r) {
                    uint32_t c = 0;
                    while (c < std::min(h.paths[r].size(), p.paths[r].size()) &&
                           h.paths[r][c] == p.paths[r][c])
                        ++c;
                    cut[r] = c;
                }
                h = cat.factorize_at_degree(h, cut).first;
            }
            std::vector<BasicOpen> union_parts;
            for (size_t m : members) union_parts.push_back(pieces[m].range);
            CompactOpen block_set = co_of(union_parts);

            DegreeVector one(cat.rank(), 1);
            bool placed = false;
            for (const Morphism& cand : detail::divisors_of(cat, h)) {
                auto atoms = detail::atoms_at(cat, cand.dom);
                // atoms of the block pulled back through cand
                std::vector<bool> covered(atoms.size(), false);
                for (size_t i = 0; i < atoms.size(); ++i) {
                    Morphism cyl = cat.compose(cand, atoms[i]);
                    if (auto cb = basic_open(cat, cyl))
                        covered[i] = co_subset(cat, co_basic(*cb), block_set);
                }
                // exclusions available under the Garside norm bound
                std::vector<Morphism> pool;
                for (const Morphism& g : family_at(cat, cand.dom))
                    if (deg_leq(deg_add(cand.degree(), g.degree()), one)) pool.push_back(g);
                std::vector<Morphism> chosen;
                std::vector<bool> blocked(atoms.size(), false);
                for (const Morphism& g : pool) {
                    auto cone = detail::atom_set_of(cat, atoms, g, {});
                    bool inside = std::all_of(cone.begin(), cone.end(),
                                              [&](size_t i) { return !covered[i]; });
                    if (inside) {
                        chosen.push_back(g);
                        for (size_t i : cone) blocked[i] = true;
                    }
                }
                bool exact = true;
                for (size_t i = 0; i < atoms.size(); ++i)
                    if (covered[i] == blocked[i]) {
                        exact = false;
                        break;
                    }
                if (!exact) continue;
                // minimal antichain among chosen
                std::vector<Morphism> excl;
                for (const Morphism& g : chosen) {
                    bool dom = false;
                    for (const Morphism& g2 : chosen)
                        if (!(g2 == g) && cat.left_divides(g2, g)) {
                            dom = true;
                            break;
                        }
                    if (!dom) excl.push_back(g);
                }
                auto domset = reduce_basic(cat, cat.identity(cand.dom), excl);
                if (!domset) continue;
                out.entries.push_back({zs_of(cand), *domset, static_cast<uint32_t>(j)});
                placed = true;
                break;
            }
            if (!placed) throw error(errc::domain, "gcd_tuple: no expressible cover for a block");
        }
    }
    std::sort(out.entries.begin(), out.entries.end(), entry_less);
    return out;
}

// ---------------------------------------------------------------------------
// divisor enumeration (norm-one partitions of an object entry)

struct DivisorPiece {
    Morphism arrow;
    BasicOpen dom;
};

/// All partitions of X(v; excl) into Garside-map divisor pieces, canonical
/// order. Cached per (vertex, exclusions) in the context-independent sense.
inline const std::vector<std::vector<DivisorPiece>>& enumerate_entry_partitions(
    const Context& ctx, const ObjectId& v, const std::vector<Morphism>& excl) {
    static std::mutex mu;
    static std::map<std::string, std::vector<std::vector<DivisorPiece>>> cache;
    const PathCategory& cat = ctx.cat();
    DegreeVector one(cat.rank(), 1);
    for (const Morphism& e : excl)
        if (!deg_leq(e.degree(), one))
            throw error(errc::domain, "enumerate_entry_partitions: exclusions must lie in vS");
    std::string key = cat.fingerprint() + "#" + cat.object_name(v) + ";";
    for (const Morphism& e : excl) key += cat.format(e) + ",";
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto atoms = detail::atoms_at(cat, v);
    std::vector<size_t> target_atoms = detail::atom_set_of(cat, atoms, cat.identity(v), excl);
    std::vector<bool> wanted(atoms.size(), false);
    for (size_t i : target_atoms) wanted[i] = true;

    // vocabulary of pieces with their atom footprints
    struct Vocab {
        DivisorPiece piece;
        std::vector<size_t> footprint;
    };
    std::vector<Vocab> vocab;
    std::vector<Morphism> arrows{cat.identity(v)};
    for (const Morphism& s : family_at(cat, v)) arrows.push_back(s);
    for (const Morphism& a : arrows) {
        std::vector<Morphism> pool;
        for (const Morphism& g : family_at(cat, a.dom))
            if (deg_leq(deg_add(a.degree(), g.degree()), one)) pool.push_back(g);
        // all antichain subsets of the pool with nonempty domain
        std::vector<std::vector<Morphism>> subsets{{}};
        for (const Morphism& g : pool) {
            size_t n = subsets.size();
            for (size_t i = 0; i < n; ++i) {
                auto s = subsets[i];
                s.push_back(g);
                subsets.push_back(std::move(s));
            }
        }
        for (const std::vector<Morphism>& g : subsets) {
            bool antichain = true;
            for (const Morphism& x : g)
                for (const Morphism& y : g)
                    if (!(x == y) && cat.left_divides(x, y)) antichain = false;
            if (!antichain) continue;
            auto dom = reduce_basic(cat, cat.identity(a.dom), g);
            if (!dom) continue;
            if (!(dom->excl.size() == g.size())) continue;  // already reduced form only
            std::vector<Morphism> pushed;
            for (const Morphism& e : dom->excl) pushed.push_back(cat.compose(a, e));
            auto footprint = detail::atom_set_of(cat, atoms, a, pushed);
            bool ok = !footprint.empty();
            for (size_t i : footprint)
                if (!wanted[i]) ok = false;
            if (ok) vocab.push_back({{a, *dom}, footprint});
        }
    }

    std::vector<std::vector<DivisorPiece>> result;
    std::vector<bool> used(atoms.size(), false);
    std::vector<DivisorPiece> cur;
    std::function<void()> cover = [&]() {
        size_t first = target_atoms.size();
        for (size_t idx = 0; idx < target_atoms.size(); ++idx)
            if (!used[target_atoms[idx]]) {
                first = idx;
                break;
            }
        if (first == target_atoms.size()) {
            result.push_back(cur);
            return;
        }
        size_t pivot = target_atoms[first];
        for (const Vocab& w : vocab) {
            if (std::find(w.footprint.begin(), w.footprint.end(), pivot) == w.footprint.end()) continue;
            bool fits = std::all_of(w.footprint.begin(), w.footprint.end(),
                                    [&](size_t i) { return !used[i]; });
            if (!fits) continue;
            for (size_t i : w.footprint) used[i] = true;
            cur.push_back(w.piece);
            cover();
            cur.pop_back();
            for (size_t i : w.footprint) used[i] = false;
        }
    };
    cover();
    for (auto& partition : result)
        std::sort(partition.begin(), partition.end(), [](const DivisorPiece& x, const DivisorPiece& y) {
            if (!(x.arrow == y.arrow)) return morphism_less(x.arrow, y.arrow);
            return basic_less(x.dom, y.dom);
        });
    auto [pos, inserted] = cache.emplace(key, std::move(result));
    return pos->second;
}

// ---------------------------------------------------------------------------
// completion towards canonical splittings

/// All morphisms at v of norm exactly L, canonical order.
inline std::vector<Morphism> norm_level_family(const PathCategory& cat, const ObjectId& v,
                                               uint32_t L) {
    std::vector<Morphism> out;
    DegreeVector p(cat.rank(), 0);
    std::function<void(size_t)> go = [&](size_t j) {
        if (j == cat.rank()) {
            if (deg_max(p) == L)
                for (const Morphism& m : cat.morphisms_of_degree(v, p)) out.push_back(m);
            return;
        }
        for (uint32_t x = 0; x <= L; ++x) {
            p[j] = x;
            go(j + 1);
        }
        p[j] = 0;
    };
    go(0);
    std::sort(out.begin(), out.end(), MorphismLess{});
    return out;
}

/// Completes a towards the canonical level-L splitting of its target: returns
/// b with compose(a, b) equal to the amalgam of gamma(excl_j, S_L) over the
/// target entries. Requires ||a_i|| <= L and ||a_i f|| <= L for all exclusions.
inline TupleMorphism complete_to_gamma(const Context& ctx, const TupleMorphism& a, uint32_t L) {
    const PathCategory& cat = ctx.cat();
    if (L < 1) throw error(errc::parameter, "complete_to_gamma: L must be >= 1");
    for (const TupleEntry& e : a.entries) {
        if (deg_max(e.arrow.path.degree()) > L)
            throw error(errc::norm_bound, "complete_to_gamma: entry norm exceeds L");
        for (const Morphism& f : e.dom.excl)
            if (deg_max(deg_add(e.arrow.path.degree(), f.degree())) > L)
                throw error(errc::norm_bound, "complete_to_gamma: exclusion norm exceeds L");
    }

    // canonical splitting of the target and per-entry residual data
    TupleMorphism canonical;
    std::vector<GammaSpec> specs;
    bool first = true;
    for (const CompactOpen& u : a.target.entries) {
        if (u.parts.size() != 1 || !u.parts[0].root.is_identity())
            throw error(errc::domain, "complete_to_gamma: target entries must be vertex-rooted");
        GammaSpec spec{u.parts[0].vertex(), u.parts[0].excl,
                       norm_level_family(cat, u.parts[0].vertex(), L)};
        TupleMorphism g = gamma(ctx, spec);
        canonical = first ? std::move(g) : amalg(canonical, g);
        specs.push_back(std::move(spec));
        first = false;
    }

    TupleMorphism cur = a;
    std::optional<TupleMorphism> acc;
    for (uint32_t round = 0;; ++round) {
        if (round > 4 * (L + 1) * static_cast<uint32_t>(cat.rank()) + 8)
            throw error(errc::norm_bound, "complete_to_gamma: did not converge");
        TupleMorphism step;
        bool moved = false;
        bool started = false;
        for (const TupleEntry& e : cur.entries) {
            const GammaSpec& gs = specs[e.base];
            TupleMorphism piece;
            uint32_t n = deg_max(e.arrow.path.degree());
            std::vector<Morphism> want;
            if (n == L) want = residual_exclusions(ctx, gs, e.arrow.path);
            if (n < L) {
                piece = gamma(ctx, GammaSpec{e.dom.vertex(), e.dom.excl,
                                             family_at(cat, e.dom.vertex())});
                moved = true;
            } else if (!(want == e.dom.excl)) {
                std::vector<Morphism> grow;
                for (const Morphism& s : family_at(cat, e.dom.vertex()))
                    if (deg_max(deg_add(e.arrow.path.degree(), s.degree())) == L) grow.push_back(s);
                piece = gamma(ctx, GammaSpec{e.dom.vertex(), e.dom.excl, grow});
                moved = true;
            } else {
                piece = tuple_identity(ctx, TupleObject{{co_basic(e.dom)}});
            }
            step = started ? amalg(step, piece) : std::move(piece);
            started = true;
        }
        if (!moved) break;
        cur = compose_tuple(ctx, cur, step);
        acc = acc ? compose_tuple(ctx, *acc, step) : std::move(step);
    }

    // final unit: reorder to the canonical entry order and cancel twists
    TupleMorphism unit;
    unit.target = source_of(cur);
    for (const TupleEntry& ce : canonical.entries) {
        size_t match = cur.entries.size();
        for (size_t i = 0; i < cur.entries.size(); ++i)
            if (cur.entries[i].base == ce.base && cur.entries[i].arrow.path == ce.arrow.path) {
                match = i;
                break;
            }
        if (match == cur.entries.size())
            throw error(errc::norm_bound, "complete_to_gamma: canonical piece missing");
        GroupWord q = cur.entries[match].arrow.twist.inverse();
        unit.entries.push_back(
            {ZSMorphism{cat.identity(ctx.act_object(q, ce.dom.vertex())), q}, ce.dom,
             static_cast<uint32_t>(match)});
    }
    if (unit.entries.size() != cur.entries.size())
        throw error(errc::norm_bound, "complete_to_gamma: piece count mismatch");
    TupleMorphism b = acc ? compose_tuple(ctx, *acc, unit) : unit;
    if (!tuple_eq(ctx, compose_tuple(ctx, a, b), canonical))
        throw error(errc::norm_bound, "complete_to_gamma: completion check failed");
    return b;
}

/// A tuple morphism from a family-rooted object onto the given tuple of
/// compact opens, built from the family-form decompositions of its parts.
inline TupleMorphism reduce_to_XS(const Context& ctx, const std::vector<CompactOpen>& target) {
    const PathCategory& cat = ctx.cat();
    TupleMorphism out;
    out.target.entries = target;
    for (size_t i = 0; i < target.size(); ++i) {
        if (target[i].empty()) throw error(errc::emptiness, "reduce_to_XS: empty entry");
        for (const BasicOpen& part : target[i].parts)
            for (const BasicOpen& piece : push_to_family_form(cat, part).parts) {
                std::vector<Morphism> quot;
                for (const Morphism& e : piece.excl) quot.push_back(cat.left_quotient(piece.root, e));
                auto dom = reduce_basic(cat, cat.identity(piece.root.dom), quot);
                if (!dom) continue;
                out.entries.push_back({zs_of(piece.root), *dom, static_cast<uint32_t>(i)});
            }
    }
    return out;
}

/// Debug printer: one line per entry as (path, twist, exclusions, base).
inline std::string format_tuple(const Context& ctx, const TupleMorphism& m) {
    std::ostringstream os;
    for (const TupleEntry& e : m.entries) {
        os << "(" << (e.arrow.path.is_identity() ? "id" : ctx.cat().format(e.arrow.path));
        if (!e.arrow.twist.empty()) os << "," << ctx.format_twist(e.arrow.twist);
        os << ";{";
        for (size_t i = 0; i < e.dom.excl.size(); ++i)
            os << (i ? "," : "") << ctx.cat().format(e.dom.excl[i]);
        os << "}->" << e.base << ") ";
    }
    return os.str();
}

/// All Garside-map divisors at x up to units: products of entry partitions.
inline std::vector<TupleMorphism> enumerate_divisors(const Context& ctx, const TupleObject& x) {
    std::vector<TupleMorphism> out{TupleMorphism{{}, x}};
    for (size_t j = 0; j < x.entries.size(); ++j) {
        if (x.entries[j].parts.size() != 1 || !x.entries[j].parts[0].root.is_identity())
            throw error(errc::domain, "enumerate_divisors: entries must be vertex-rooted");
        const BasicOpen& u = x.entries[j].parts[0];
        const auto& partitions = enumerate_entry_partitions(ctx, u.vertex(), u.excl);
        std::vector<TupleMorphism> next;
        for (const TupleMorphism& base : out)
            for (const auto& partition : partitions) {
                TupleMorphism m = base;
                for (const DivisorPiece& p : partition)
                    m.entries.push_back({zs_of(p.arrow), p.dom, static_cast<uint32_t>(j)});
                next.push_back(std::move(m));
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace garcat

#endif
