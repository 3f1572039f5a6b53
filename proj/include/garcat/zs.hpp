#ifndef GARCAT_ZS_HPP
#define GARCAT_ZS_HPP

#include <memory>
#include <mutex>

#include "garcat/automaton.hpp"
#include "garcat/sets.hpp"

namespace garcat {

/// Ground category plus an optional self-similar action. All bisection-level
/// machinery runs over a Context; a missing automaton means every twist is
/// the empty word and the arrows are plain category morphisms.
class Context {
public:
    explicit Context(const CategorySpec& spec) : cat_(spec) {}
    Context(const CategorySpec& spec, const AutomatonSpec& autom)
        : cat_(spec), autom_(std::make_unique<Automaton>(cat_, autom)) {}

    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

    const PathCategory& cat() const { return cat_; }
    bool has_automaton() const { return autom_ != nullptr; }
    const Automaton& automaton() const {
        if (!autom_) throw error(errc::parameter, "no automaton in this context");
        return *autom_;
    }

    Morphism act(const GroupWord& w, const Morphism& a) const {
        if (w.empty()) return a;
        return automaton().act(w, a);
    }

    GroupWord cocycle(const GroupWord& w, const Morphism& a) const {
        if (w.empty()) return {};
        return automaton().cocycle(w, a);
    }

    ObjectId act_object(const GroupWord& w, const ObjectId& v) const {
        if (w.empty()) return v;
        return automaton().act_object(w, v);
    }

    bool is_trivial(const GroupWord& w) const {
        if (w.empty()) return true;
        if (!autom_) throw error(errc::parameter, "twist on a category without automaton");
        std::lock_guard<std::mutex> lock(mutex_);
        return autom_->is_trivial(w, &trivial_cache_);
    }

    std::string format_twist(const GroupWord& w) const {
        if (!autom_) return w.empty() ? "id" : "?";
        return autom_->format(w);
    }

private:
    PathCategory cat_;
    std::unique_ptr<Automaton> autom_;
    mutable std::mutex mutex_;
    mutable std::map<GroupWord, bool> trivial_cache_;
};

/// Arrow of the Zappa-Szep product: a ground path together with a group word
/// acting underneath it. Plain category arrows embed with an empty twist.
struct ZSMorphism {
    Morphism path;
    GroupWord twist;

    friend bool operator==(const ZSMorphism& a, const ZSMorphism& b) {
        return a.path == b.path && a.twist == b.twist;
    }
};

inline bool zs_less(const ZSMorphism& a, const ZSMorphism& b) {
    if (!(a.path == b.path)) return morphism_less(a.path, b.path);
    return a.twist < b.twist;
}

inline ZSMorphism zs_of(const Morphism& a) { return ZSMorphism{a, {}}; }

inline const ObjectId& zs_target(const ZSMorphism& a) { return a.path.tgt; }

inline ObjectId zs_domain(const Context& ctx, const ZSMorphism& a) {
    return ctx.act_object(a.twist.inverse(), a.path.dom);
}

inline bool zs_is_unit(const ZSMorphism& a) { return a.path.is_identity(); }

inline ZSMorphism zs_identity(const Context& ctx, const ObjectId& v) {
    return ZSMorphism{ctx.cat().identity(v), {}};
}

/// (a, g)(b, h) = (a (g.b), phi(g, b) h)
inline ZSMorphism compose_zs(const Context& ctx, const ZSMorphism& x, const ZSMorphism& y) {
    if (zs_domain(ctx, x) != zs_target(y)) throw error(errc::composition, "compose_zs: object mismatch");
    Morphism moved = ctx.act(x.twist, y.path);
    return ZSMorphism{ctx.cat().compose(x.path, moved), ctx.cocycle(x.twist, y.path).then(y.twist)};
}

inline ZSMorphism zs_inverse_unit(const Context& ctx, const ZSMorphism& u) {
    if (!zs_is_unit(u)) throw error(errc::domain, "zs_inverse_unit: not a unit");
    return ZSMorphism{ctx.cat().identity(zs_domain(ctx, u)), u.twist.inverse()};
}

/// Left divisibility in the product: (a,g) divides (b,h) iff a divides b.
inline bool zs_left_divides(const Context& ctx, const ZSMorphism& x, const ZSMorphism& y) {
    return ctx.cat().left_divides(x.path, y.path);
}

/// The unique q with x q = y (up to nothing: the construction cancels the
/// twists literally, so compose_zs(x, q) == y on the nose).
inline ZSMorphism zs_left_quotient(const Context& ctx, const ZSMorphism& x, const ZSMorphism& y) {
    Morphism ground = ctx.cat().left_quotient(x.path, y.path);
    Morphism pulled = ctx.act(x.twist.inverse(), ground);
    GroupWord tw = ctx.cocycle(x.twist, pulled).inverse().then(y.twist);
    return ZSMorphism{pulled, tw};
}

/// Minimal common multiples lift from the ground category; the chosen
/// transversal carries the empty twist.
inline std::vector<ZSMorphism> mcm_zs(const Context& ctx, const ZSMorphism& x, const ZSMorphism& y) {
    if (zs_target(x) != zs_target(y)) throw error(errc::domain, "mcm_zs: targets differ");
    std::vector<ZSMorphism> out;
    for (const Morphism& m : ctx.cat().mcm(x.path, y.path)) out.push_back(zs_of(m));
    return out;
}

/// =*-map on the lifted family: defined iff the ground paths agree, in which
/// case the witnessing unit absorbs the twist difference.
inline std::optional<ZSMorphism> star_map_zs(const Context& ctx, const ZSMorphism& s,
                                             const ZSMorphism& t) {
    if (!(s.path == t.path)) return std::nullopt;
    GroupWord u = s.twist.inverse().then(t.twist);
    return ZSMorphism{ctx.cat().identity(zs_domain(ctx, s)), u};
}

/// Image of a basic set under a group word: w.X(a; e) = X(w.a; w.e).
inline BasicOpen act_set(const Context& ctx, const GroupWord& w, const BasicOpen& u) {
    if (w.empty()) return u;
    BasicOpen r;
    r.root = ctx.act(w, u.root);
    for (const Morphism& e : u.excl) r.excl.push_back(ctx.act(w, e));
    std::sort(r.excl.begin(), r.excl.end(), MorphismLess{});
    return r;
}

/// Whether the word fixes every boundary point of the (vertex-rooted) set:
/// it must fix every finite path that occurs as a prefix of a point of u.
inline bool is_trivial_on(const Context& ctx, const GroupWord& w, const BasicOpen& u) {
    if (!u.root.is_identity()) throw error(errc::domain, "is_trivial_on: set must be vertex-rooted");
    if (w.empty()) return true;
    if (u.excl.empty()) return ctx.is_trivial(w);
    if (ctx.act_object(w, u.vertex()) != u.vertex()) return false;
    const Automaton& at = ctx.automaton();
    DegreeVector depth = resolution(u);
    std::function<bool(const GroupWord&, const Morphism&)> rec = [&](const GroupWord& sec,
                                                                     const Morphism& prefix) -> bool {
        if (deg_leq(depth, prefix.degree())) return ctx.is_trivial(sec);
        for (const Morphism& ext : ctx.cat().morphisms_of_degree(prefix.dom, DegreeVector{1})) {
            Morphism c = ctx.cat().compose(prefix, ext);
            bool excluded = false;
            for (const Morphism& e : u.excl)
                if (ctx.cat().left_divides(e, c)) {
                    excluded = true;
                    break;
                }
            if (excluded) continue;
            // c is a genuine prefix of points of u iff some cylinder survives
            if (cylinders(ctx.cat(), BasicOpen{c, u.excl}, deg_join(depth, c.degree())).empty())
                continue;
            if (!(at.act(sec, ext) == ext)) return false;
            if (!rec(at.cocycle(sec, ext), c)) return false;
        }
        return true;
    };
    return rec(w, ctx.cat().identity(u.vertex()));
}

struct LiftCheck {
    std::string name;
    bool pass;
    std::string detail;
};

struct LiftReport {
    std::vector<LiftCheck> checks;
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const LiftCheck& c) { return c.pass; });
    }
};

/// Validates that the declared action lifts the canonical family: states act
/// degree-preservingly by graph automorphisms (so G.S is contained in S), the
/// saturated basic sets are permuted, and bounded right cancellation holds.
inline LiftReport lift_garside(const Context& ctx) {
    LiftReport rep;
    if (!ctx.has_automaton()) {
        rep.checks.push_back({"automaton present", true, "no action declared; ground lift"});
        return rep;
    }
    const Automaton& at = ctx.automaton();
    const PathCategory& cat = ctx.cat();

    {
        LiftCheck c{"states permute the family degreewise", true, ""};
        for (size_t q = 0; q < at.state_count() && c.pass; ++q) {
            GroupWord g = at.state_word(at.state_name(q));
            for (const ObjectId& v : cat.objects()) {
                for (const Morphism& s : canonical_family(cat).at(v)) {
                    Morphism gs = at.act(g, s);
                    if (gs.degree() != s.degree() || !cat.valid(gs)) {
                        c.pass = false;
                        c.detail = "state " + at.state_name(q) + " moves " + cat.format(s) +
                                   " off the family";
                        break;
                    }
                }
                if (!c.pass) break;
            }
        }
        rep.checks.push_back(std::move(c));
    }

    {
        // stability of saturated exclusion sets: g.(v S) = (g.v) S
        LiftCheck c{"saturated sets are permuted", true, ""};
        for (size_t q = 0; q < at.state_count() && c.pass; ++q) {
            GroupWord g = at.state_word(at.state_name(q));
            for (const ObjectId& v : cat.objects()) {
                auto fam = canonical_family(cat).at(v);
                std::vector<Morphism> moved;
                for (const Morphism& s : fam) moved.push_back(at.act(g, s));
                std::sort(moved.begin(), moved.end(), MorphismLess{});
                auto image = canonical_family(cat).at(at.act_object(g, v));
                if (moved != image) {
                    c.pass = false;
                    c.detail = "state " + at.state_name(q) + " at " + cat.object_name(v);
                    break;
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    {
        // right cancellation up to =* at bounded degree: a x = b x forces a = b
        // up to a trivially-acting twist; checked on single-state twists
        LiftCheck c{"bounded right cancellation", true, ""};
        for (const ObjectId& v : cat.objects()) {
            for (const Morphism& x : cat.morphisms_of_degree(v, DegreeVector(cat.rank(), 1))) {
                for (size_t q = 0; q < at.state_count() && c.pass; ++q) {
                    GroupWord g = at.state_word(at.state_name(q));
                    Morphism gx = at.act(g, x);
                    if (gx == x && !ctx.is_trivial(at.cocycle(g, x)) && ctx.is_trivial(g)) {
                        c.pass = false;
                        c.detail = "cancellation failure under state " + at.state_name(q);
                    }
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    return rep;
}

}  // namespace garcat

#endif
