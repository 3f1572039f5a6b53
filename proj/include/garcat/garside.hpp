#ifndef GARCAT_GARSIDE_HPP
#define GARCAT_GARSIDE_HPP

#include <optional>
#include <sstream>

#include "garcat/category.hpp"

namespace garcat {

/// The canonical Garside family of a product path category: all morphisms
/// whose degree lies in S_P = {0,1}^k \ {0}. `family_up_to_norm(L)` widens to
/// everything of norm between 1 and L.
class GarsideFamily {
public:
    GarsideFamily(const PathCategory& cat, uint32_t level = 1) : cat_(&cat), level_(level) {
        if (level < 1) throw error(errc::parameter, "family level must be >= 1");
    }

    const PathCategory& category() const { return *cat_; }
    uint32_t level() const { return level_; }

    bool contains(const Morphism& m) const {
        DegreeVector d = m.degree();
        return !deg_is_zero(d) && deg_max(d) <= level_;
    }

    /// v S for this family: elements with target v, canonical order.
    std::vector<Morphism> at(const ObjectId& v) const {
        std::vector<Morphism> out;
        DegreeVector p(cat_->rank(), 0);
        collect(v, p, 0, out);
        std::sort(out.begin(), out.end(), MorphismLess{});
        return out;
    }

private:
    const PathCategory* cat_;
    uint32_t level_;

    void collect(const ObjectId& v, DegreeVector& p, size_t j, std::vector<Morphism>& out) const {
        if (j == cat_->rank()) {
            if (!deg_is_zero(p))
                for (const Morphism& m : cat_->morphisms_of_degree(v, p)) out.push_back(m);
            return;
        }
        for (uint32_t x = 0; x <= level_; ++x) {
            p[j] = x;
            collect(v, p, j + 1, out);
        }
        p[j] = 0;
    }
};

inline GarsideFamily canonical_family(const PathCategory& cat) { return GarsideFamily(cat, 1); }

inline GarsideFamily family_up_to_norm(const PathCategory& cat, uint32_t L) {
    return GarsideFamily(cat, L);
}

/// Greedy head: the maximal family element left-dividing a. For the canonical
/// family this is the degree-min(d(a), (1,...,1)) prefix.
inline Morphism head(const PathCategory& cat, const Morphism& a) {
    DegreeVector d = a.degree();
    if (deg_is_zero(d)) throw error(errc::head, "head: morphism is a unit");
    DegreeVector p(d.size());
    for (size_t j = 0; j < d.size(); ++j) p[j] = std::min<uint32_t>(d[j], 1);
    return cat.factorize_at_degree(a, p).first;
}

struct NormalForm {
    std::vector<Morphism> factors;
    size_t norm() const { return factors.size(); }
};

inline NormalForm normal_form(const PathCategory& cat, const Morphism& a) {
    NormalForm nf;
    Morphism rest = a;
    while (!rest.is_identity()) {
        Morphism h = head(cat, rest);
        rest = cat.left_quotient(h, rest);
        nf.factors.push_back(std::move(h));
    }
    return nf;
}

inline size_t norm(const PathCategory& cat, const Morphism& a) { return normal_form(cat, a).norm(); }

/// The =*-map on the ground family: units are trivial here, so it is defined
/// exactly on equal arguments. The Zappa-Szep layer supplies the genuine one.
inline std::optional<Morphism> star_map(const PathCategory& cat, const Morphism& s, const Morphism& t) {
    if (s == t) return cat.identity(s.dom);
    return std::nullopt;
}

struct AxiomCheck {
    std::string name;
    bool pass;
    std::string counterexample;  // empty when pass
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.pass; });
    }
};

namespace detail {

inline std::vector<Morphism> all_morphisms_up_to(const PathCategory& cat, const ObjectId& v,
                                                 const DegreeVector& max_degree) {
    std::vector<Morphism> out;
    DegreeVector p(cat.rank(), 0);
    std::function<void(size_t)> go = [&](size_t j) {
        if (j == cat.rank()) {
            for (const Morphism& m : cat.morphisms_of_degree(v, p)) out.push_back(m);
            return;
        }
        for (uint32_t x = 0; x <= max_degree[j]; ++x) {
            p[j] = x;
            go(j + 1);
        }
        p[j] = 0;
    };
    go(0);
    return out;
}

inline std::vector<std::pair<Morphism, Morphism>> all_factorizations(const PathCategory& cat,
                                                                     const Morphism& c) {
    std::vector<std::pair<Morphism, Morphism>> out;
    DegreeVector d = c.degree();
    DegreeVector p(d.size(), 0);
    std::function<void(size_t)> go = [&](size_t j) {
        if (j == d.size()) {
            out.push_back(cat.factorize_at_degree(c, p));
            return;
        }
        for (uint32_t x = 0; x <= d[j]; ++x) {
            p[j] = x;
            go(j + 1);
        }
        p[j] = 0;
    };
    go(0);
    return out;
}

}  // namespace detail

/// Exhaustively checks the defining closure properties of a family over all
/// morphisms of degree <= max_degree. `elements` overrides the canonical
/// family (restricted to the probed degree window) for use as a checker.
inline AxiomReport verify_garside_axioms(const PathCategory& cat, const DegreeVector& max_degree,
                                         const std::optional<std::vector<Morphism>>& elements = {}) {
    AxiomReport rep;
    auto in_family = [&](const Morphism& m) {
        if (elements) return std::find(elements->begin(), elements->end(), m) != elements->end();
        return GarsideFamily(cat, 1).contains(m);
    };

    std::vector<Morphism> all;
    for (const ObjectId& v : cat.objects())
        for (Morphism& m : detail::all_morphisms_up_to(cat, v, max_degree)) all.push_back(std::move(m));

    // generation: every non-unit is family-element * rest, recursively
    {
        AxiomCheck c{"generates", true, ""};
        for (const Morphism& m : all) {
            if (m.is_identity()) continue;
            Morphism rest = m;
            bool ok = true;
            while (!rest.is_identity()) {
                bool stepped = false;
                for (const auto& [a, b] : detail::all_factorizations(cat, rest)) {
                    if (!a.is_identity() && in_family(a)) {
                        rest = b;
                        stepped = true;
                        break;
                    }
                }
                if (!stepped) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                c.pass = false;
                c.counterexample = "not generating: " + cat.format(m);
                break;
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // closure of the sharp family under right divisors
    {
        AxiomCheck c{"sharp closed under right divisors", true, ""};
        for (const Morphism& s : all) {
            if (!in_family(s)) continue;
            for (const auto& [a, b] : detail::all_factorizations(cat, s)) {
                if (!b.is_identity() && !in_family(b)) {
                    c.pass = false;
                    c.counterexample = cat.format(b) + " right-divides " + cat.format(s);
                    break;
                }
            }
            if (!c.pass) break;
        }
        rep.checks.push_back(std::move(c));
    }

    // closure under right comultiples, probed within the degree window
    {
        AxiomCheck c{"closed under right comultiples", true, ""};
        for (const Morphism& a : all) {
            for (const Morphism& r : all) {
                if (!in_family(r) || !cat.left_divides(r, a)) continue;
                for (const Morphism& s : all) {
                    if (!in_family(s) || !cat.left_divides(s, a)) continue;
                    bool found = false;
                    for (const Morphism& t : all) {
                        if (in_family(t) && cat.left_divides(r, t) && cat.left_divides(s, t) &&
                            cat.left_divides(t, a)) {
                            found = true;
                            break;
                        }
                    }
                    if (!found) {
                        c.pass = false;
                        c.counterexample = "r=" + cat.format(r) + " s=" + cat.format(s) +
                                           " below a=" + cat.format(a);
                        break;
                    }
                }
                if (!c.pass) break;
            }
            if (!c.pass) break;
        }
        rep.checks.push_back(std::move(c));
    }

    // left-divisor closure of the level-L families (canonical family only)
    if (!elements) {
        AxiomCheck c{"level families closed under left divisors", true, ""};
        for (uint32_t L = 1; L <= deg_max(max_degree) && c.pass; ++L) {
            GarsideFamily fam(cat, L);
            for (const Morphism& s : all) {
                if (!(fam.contains(s) || s.is_identity())) continue;
                for (const auto& [a, b] : detail::all_factorizations(cat, s)) {
                    if (!a.is_identity() && !fam.contains(a)) {
                        c.pass = false;
                        std::ostringstream os;
                        os << cat.format(a) << " left-divides " << cat.format(s) << " at level " << L;
                        c.counterexample = os.str();
                        break;
                    }
                }
                if (!c.pass) break;
            }
        }
        rep.checks.push_back(std::move(c));
    }

    return rep;
}

}  // namespace garcat

#endif
