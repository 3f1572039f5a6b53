#ifndef GARCAT_CATEGORY_HPP
#define GARCAT_CATEGORY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace garcat {

enum class errc {
    composition,
    divisibility,
    degree,
    domain,
    parameter,
    head,
    emptiness,
    norm_bound,
    word,
    parse,
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

/// Declarative description of one directed graph factor.
struct GraphSpec {
    std::vector<std::string> vertices;
    // (edge id, source vertex, target vertex)
    std::vector<std::array<std::string, 3>> edges;
};

/// A product of graph path categories; rank = number of factors.
struct CategorySpec {
    std::vector<GraphSpec> factors;
};

using DegreeVector = std::vector<uint32_t>;

/// Object of the product category: one vertex id per factor.
using ObjectId = std::vector<uint32_t>;

inline DegreeVector deg_add(const DegreeVector& a, const DegreeVector& b) {
    DegreeVector r(a.size());
    for (size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
    return r;
}

inline DegreeVector deg_join(const DegreeVector& a, const DegreeVector& b) {
    DegreeVector r(a.size());
    for (size_t j = 0; j < a.size(); ++j) r[j] = std::max(a[j], b[j]);
    return r;
}

inline bool deg_leq(const DegreeVector& a, const DegreeVector& b) {
    for (size_t j = 0; j < a.size(); ++j)
        if (a[j] > b[j]) return false;
    return true;
}

inline bool deg_is_zero(const DegreeVector& a) {
    return std::all_of(a.begin(), a.end(), [](uint32_t x) { return x == 0; });
}

inline uint32_t deg_max(const DegreeVector& a) {
    uint32_t m = 0;
    for (uint32_t x : a) m = std::max(m, x);
    return m;
}

/// Arrow of the product path category. Each factor carries an edge word read
/// from the target end, so consecutive edges e, e' satisfy src(e) = dst(e').
/// Left divisors are word prefixes; extending a path appends edges at the
/// domain end.
struct Morphism {
    ObjectId tgt;
    ObjectId dom;
    std::vector<std::vector<uint32_t>> paths;  // one edge word per factor

    DegreeVector degree() const {
        DegreeVector d(paths.size());
        for (size_t j = 0; j < paths.size(); ++j) d[j] = static_cast<uint32_t>(paths[j].size());
        return d;
    }

    bool is_identity() const {
        return std::all_of(paths.begin(), paths.end(),
                           [](const std::vector<uint32_t>& p) { return p.empty(); });
    }

    friend bool operator==(const Morphism& a, const Morphism& b) {
        return a.tgt == b.tgt && a.dom == b.dom && a.paths == b.paths;
    }
};

/// Deterministic ordering: degree first, then factor words, then endpoints.
inline bool morphism_less(const Morphism& a, const Morphism& b) {
    DegreeVector da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    if (a.paths != b.paths) return a.paths < b.paths;
    if (a.tgt != b.tgt) return a.tgt < b.tgt;
    return a.dom < b.dom;
}

struct MorphismLess {
    bool operator()(const Morphism& a, const Morphism& b) const { return morphism_less(a, b); }
};

struct FactorGraph {
    std::vector<std::string> vertex_names;
    std::vector<std::string> edge_names;
    std::vector<uint32_t> edge_src;
    std::vector<uint32_t> edge_dst;
    std::map<std::string, uint32_t> vertex_index;
    std::map<std::string, uint32_t> edge_index;
    // edges e with dst(e) = v, i.e. the edges that can extend a path whose
    // domain is v; listed in declaration order.
    std::vector<std::vector<uint32_t>> extensions;
};

struct DegreeHypothesisEntry {
    size_t factor;
    std::string vertex;
    uint32_t loop_count;   // edges v -> v in this factor
    uint32_t in_count;     // edges into v in this factor
};

struct DegreeHypothesisReport {
    std::vector<DegreeHypothesisEntry> entries;
    bool loops_ok = true;    // every count >= 2
    bool no_sources = true;  // every vertex receives an edge in every factor
    bool pass() const { return loops_ok && no_sources; }
};

/// The ground left cancellative small category: a finite product of path
/// categories of finite graphs, with its canonical degree map to Z_{>=0}^k.
class PathCategory {
public:
    explicit PathCategory(const CategorySpec& spec) {
        if (spec.factors.empty()) throw error(errc::parameter, "category needs at least one factor");
        for (const GraphSpec& g : spec.factors) {
            if (g.vertices.empty()) throw error(errc::parameter, "factor graph has no vertices");
            FactorGraph f;
            for (const std::string& v : g.vertices) {
                if (f.vertex_index.count(v)) throw error(errc::parameter, "duplicate vertex id: " + v);
                f.vertex_index[v] = static_cast<uint32_t>(f.vertex_names.size());
                f.vertex_names.push_back(v);
            }
            for (const auto& e : g.edges) {
                if (f.edge_index.count(e[0])) throw error(errc::parameter, "duplicate edge id: " + e[0]);
                auto si = f.vertex_index.find(e[1]);
                auto di = f.vertex_index.find(e[2]);
                if (si == f.vertex_index.end() || di == f.vertex_index.end())
                    throw error(errc::parameter, "edge " + e[0] + " references undeclared vertex");
                f.edge_index[e[0]] = static_cast<uint32_t>(f.edge_names.size());
                f.edge_names.push_back(e[0]);
                f.edge_src.push_back(si->second);
                f.edge_dst.push_back(di->second);
            }
            f.extensions.assign(f.vertex_names.size(), {});
            for (uint32_t e = 0; e < f.edge_names.size(); ++e) f.extensions[f.edge_dst[e]].push_back(e);
            factors_.push_back(std::move(f));
        }
    }

    size_t rank() const { return factors_.size(); }
    const FactorGraph& factor(size_t j) const { return factors_[j]; }

    /// Content fingerprint; distinguishes categories in process-wide caches.
    const std::string& fingerprint() const {
        if (fingerprint_.empty()) {
            std::string s;
            for (const FactorGraph& f : factors_) {
                for (const std::string& v : f.vertex_names) s += v + ";";
                for (size_t e = 0; e < f.edge_names.size(); ++e)
                    s += f.edge_names[e] + ":" + std::to_string(f.edge_src[e]) + ">" +
                         std::to_string(f.edge_dst[e]) + ";";
                s += "/";
            }
            fingerprint_ = std::move(s);
        }
        return fingerprint_;
    }

    std::vector<ObjectId> objects() const {
        std::vector<ObjectId> out;
        ObjectId cur(rank(), 0);
        enumerate_objects(0, cur, out);
        return out;
    }

    bool valid_object(const ObjectId& v) const {
        if (v.size() != rank()) return false;
        for (size_t j = 0; j < rank(); ++j)
            if (v[j] >= factors_[j].vertex_names.size()) return false;
        return true;
    }

    Morphism identity(const ObjectId& v) const {
        if (!valid_object(v)) throw error(errc::domain, "identity: unknown object");
        return Morphism{v, v, std::vector<std::vector<uint32_t>>(rank())};
    }

    /// Checks endpoint/word consistency of a candidate morphism.
    bool valid(const Morphism& m) const {
        if (!valid_object(m.tgt) || !valid_object(m.dom) || m.paths.size() != rank()) return false;
        for (size_t j = 0; j < rank(); ++j) {
            const FactorGraph& f = factors_[j];
            uint32_t at = m.tgt[j];
            for (uint32_t e : m.paths[j]) {
                if (e >= f.edge_names.size() || f.edge_dst[e] != at) return false;
                at = f.edge_src[e];
            }
            if (at != m.dom[j]) return false;
        }
        return true;
    }

    Morphism compose(const Morphism& a, const Morphism& b) const {
        if (a.dom != b.tgt) throw error(errc::composition, "compose: domain/target mismatch");
        Morphism r;
        r.tgt = a.tgt;
        r.dom = b.dom;
        r.paths.resize(rank());
        for (size_t j = 0; j < rank(); ++j) {
            r.paths[j] = a.paths[j];
            r.paths[j].insert(r.paths[j].end(), b.paths[j].begin(), b.paths[j].end());
        }
        return r;
    }

    bool left_divides(const Morphism& a, const Morphism& b) const {
        if (a.tgt != b.tgt) return false;
        for (size_t j = 0; j < rank(); ++j) {
            if (a.paths[j].size() > b.paths[j].size()) return false;
            if (!std::equal(a.paths[j].begin(), a.paths[j].end(), b.paths[j].begin())) return false;
        }
        return true;
    }

    bool properly_left_divides(const Morphism& a, const Morphism& b) const {
        return left_divides(a, b) && !(a == b);
    }

    Morphism left_quotient(const Morphism& a, const Morphism& b) const {
        if (!left_divides(a, b)) throw error(errc::divisibility, "left_quotient: not a left divisor");
        Morphism r;
        r.tgt = a.dom;
        r.dom = b.dom;
        r.paths.resize(rank());
        for (size_t j = 0; j < rank(); ++j)
            r.paths[j].assign(b.paths[j].begin() + a.paths[j].size(), b.paths[j].end());
        return r;
    }

    std::pair<Morphism, Morphism> factorize_at_degree(const Morphism& c, const DegreeVector& p) const {
        if (p.size() != rank() || !deg_leq(p, c.degree()))
            throw error(errc::degree, "factorize_at_degree: degree out of range");
        Morphism a, b;
        a.tgt = c.tgt;
        b.dom = c.dom;
        a.paths.resize(rank());
        b.paths.resize(rank());
        a.dom.resize(rank());
        for (size_t j = 0; j < rank(); ++j) {
            a.paths[j].assign(c.paths[j].begin(), c.paths[j].begin() + p[j]);
            b.paths[j].assign(c.paths[j].begin() + p[j], c.paths[j].end());
            a.dom[j] = p[j] == 0 ? c.tgt[j] : factors_[j].edge_src[c.paths[j][p[j] - 1]];
        }
        b.tgt = a.dom;
        return {a, b};
    }

    /// Minimal common right multiples. For product path categories the result
    /// has at most one element: the factorwise merge at degree d(a) v d(b).
    std::vector<Morphism> mcm(const Morphism& a, const Morphism& b) const {
        if (a.tgt != b.tgt) throw error(errc::domain, "mcm: targets differ");
        Morphism c;
        c.tgt = a.tgt;
        c.paths.resize(rank());
        c.dom.resize(rank());
        for (size_t j = 0; j < rank(); ++j) {
            const auto& pa = a.paths[j];
            const auto& pb = b.paths[j];
            const auto& longer = pa.size() >= pb.size() ? pa : pb;
            const auto& shorter = pa.size() >= pb.size() ? pb : pa;
            if (!std::equal(shorter.begin(), shorter.end(), longer.begin())) return {};
            c.paths[j] = longer;
            c.dom[j] = longer.empty() ? a.tgt[j] : factors_[j].edge_src[longer.back()];
        }
        return {c};
    }

    std::vector<Morphism> mcm_set(const Morphism& a, const std::vector<Morphism>& bs) const {
        std::vector<Morphism> out;
        for (const Morphism& b : bs)
            for (Morphism& m : mcm(a, b)) {
                if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
            }
        std::sort(out.begin(), out.end(), MorphismLess{});
        return out;
    }

    /// All morphisms with target v and degree p, in canonical order.
    std::vector<Morphism> morphisms_of_degree(const ObjectId& v, const DegreeVector& p) const {
        if (!valid_object(v)) throw error(errc::domain, "morphisms_of_degree: unknown object");
        if (p.size() != rank()) throw error(errc::degree, "morphisms_of_degree: bad degree rank");
        std::vector<Morphism> out{identity(v)};
        for (size_t j = 0; j < rank(); ++j) {
            std::vector<Morphism> next;
            for (const Morphism& m : out)
                for (auto& word : factor_words(j, v[j], p[j])) {
                    Morphism e = m;
                    e.paths[j] = word.first;
                    e.dom[j] = word.second;
                    next.push_back(std::move(e));
                }
            out = std::move(next);
        }
        std::sort(out.begin(), out.end(), MorphismLess{});
        return out;
    }

    /// Extensions c = a x with degree(c) = degree(a) + extra, canonical order.
    std::vector<Morphism> extensions_of(const Morphism& a, const DegreeVector& extra) const {
        std::vector<Morphism> out;
        for (const Morphism& x : morphisms_of_degree(a.dom, extra)) out.push_back(compose(a, x));
        return out;
    }

    DegreeHypothesisReport check_degree_hypotheses() const {
        DegreeHypothesisReport rep;
        for (size_t j = 0; j < rank(); ++j) {
            const FactorGraph& f = factors_[j];
            for (uint32_t v = 0; v < f.vertex_names.size(); ++v) {
                uint32_t loops = 0;
                for (uint32_t e = 0; e < f.edge_names.size(); ++e)
                    if (f.edge_src[e] == v && f.edge_dst[e] == v) ++loops;
                uint32_t in = static_cast<uint32_t>(f.extensions[v].size());
                rep.entries.push_back({j, f.vertex_names[v], loops, in});
                if (loops < 2) rep.loops_ok = false;
                if (in < 1) rep.no_sources = false;
            }
        }
        return rep;
    }

    // --- string round trips -------------------------------------------------

    std::string object_name(const ObjectId& v) const {
        std::string s;
        for (size_t j = 0; j < rank(); ++j) {
            if (j) s += '|';
            s += factors_[j].vertex_names[v[j]];
        }
        return s;
    }

    std::optional<ObjectId> object_by_name(const std::string& name) const {
        std::vector<std::string> parts = split_bar(name);
        if (parts.size() != rank()) return std::nullopt;
        ObjectId v(rank());
        for (size_t j = 0; j < rank(); ++j) {
            auto it = factors_[j].vertex_index.find(parts[j]);
            if (it == factors_[j].vertex_index.end()) return std::nullopt;
            v[j] = it->second;
        }
        return v;
    }

    /// Per-factor edge words joined by '|', e.g. "e0e1|f0". The empty word in
    /// a factor is written as "" (so "|" alone is a rank-2 identity); the
    /// target object disambiguates identities when parsing.
    std::string format(const Morphism& m) const {
        std::string s;
        for (size_t j = 0; j < rank(); ++j) {
            if (j) s += '|';
            for (uint32_t e : m.paths[j]) s += factors_[j].edge_names[e];
        }
        return s;
    }

    /// Parses a morphism string. If tgt is given, empty factor words anchor
    /// there; otherwise every factor word must be nonempty.
    std::optional<Morphism> parse(const std::string& text, const std::optional<ObjectId>& tgt = {}) const {
        std::vector<std::string> parts = split_bar(text);
        if (parts.size() == 1 && rank() > 1 && parts[0].empty()) parts.assign(rank(), "");
        if (parts.size() != rank()) return std::nullopt;
        Morphism m;
        m.paths.resize(rank());
        m.tgt.resize(rank());
        m.dom.resize(rank());
        for (size_t j = 0; j < rank(); ++j) {
            auto word = parse_factor_word(j, parts[j]);
            if (!word) return std::nullopt;
            m.paths[j] = std::move(*word);
            if (m.paths[j].empty()) {
                if (!tgt) return std::nullopt;
                m.tgt[j] = (*tgt)[j];
                m.dom[j] = (*tgt)[j];
            } else {
                m.tgt[j] = factors_[j].edge_dst[m.paths[j].front()];
                m.dom[j] = factors_[j].edge_src[m.paths[j].back()];
                if (tgt && m.tgt[j] != (*tgt)[j]) return std::nullopt;
            }
        }
        if (!valid(m)) return std::nullopt;
        return m;
    }

private:
    std::vector<FactorGraph> factors_;
    mutable std::string fingerprint_;

    void enumerate_objects(size_t j, ObjectId& cur, std::vector<ObjectId>& out) const {
        if (j == rank()) {
            out.push_back(cur);
            return;
        }
        for (uint32_t v = 0; v < factors_[j].vertex_names.size(); ++v) {
            cur[j] = v;
            enumerate_objects(j + 1, cur, out);
        }
    }

    // all edge words of given length with target v in factor j, plus domain
    std::vector<std::pair<std::vector<uint32_t>, uint32_t>> factor_words(size_t j, uint32_t v,
                                                                         uint32_t len) const {
        std::vector<std::pair<std::vector<uint32_t>, uint32_t>> out{{{}, v}};
        const FactorGraph& f = factors_[j];
        for (uint32_t step = 0; step < len; ++step) {
            std::vector<std::pair<std::vector<uint32_t>, uint32_t>> next;
            for (auto& [word, at] : out)
                for (uint32_t e : f.extensions[at]) {
                    auto w = word;
                    w.push_back(e);
                    next.emplace_back(std::move(w), f.edge_src[e]);
                }
            out = std::move(next);
        }
        return out;
    }

    // Tokenizes a factor word by edge ids, longest-match with backtracking.
    std::optional<std::vector<uint32_t>> parse_factor_word(size_t j, const std::string& s) const {
        const FactorGraph& f = factors_[j];
        std::vector<uint32_t> word;
        std::function<bool(size_t)> go = [&](size_t pos) -> bool {
            if (pos == s.size()) return true;
            // try longer edge ids first so maximal munch wins, but backtrack
            std::vector<std::pair<size_t, uint32_t>> fits;
            for (uint32_t e = 0; e < f.edge_names.size(); ++e) {
                const std::string& id = f.edge_names[e];
                if (s.compare(pos, id.size(), id) == 0) fits.emplace_back(id.size(), e);
            }
            std::sort(fits.begin(), fits.end(),
                      [](const auto& x, const auto& y) { return x.first > y.first; });
            for (auto& [len, e] : fits) {
                word.push_back(e);
                if (go(pos + len)) return true;
                word.pop_back();
            }
            return false;
        };
        if (!go(0)) return std::nullopt;
        // composability is checked by valid() later
        return word;
    }

    static std::vector<std::string> split_bar(const std::string& s) {
        std::vector<std::string> parts{""};
        for (char c : s) {
            if (c == '|')
                parts.emplace_back();
            else
                parts.back() += c;
        }
        return parts;
    }
};

}  // namespace garcat

#endif
