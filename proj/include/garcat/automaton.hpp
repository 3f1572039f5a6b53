#ifndef GARCAT_AUTOMATON_HPP
#define GARCAT_AUTOMATON_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "garcat/category.hpp"

namespace garcat {

/// Declarative automaton block: states, per-state edge permutation (keyed by
/// the vertex the edges extend), and per-(state, edge) transition state. The
/// reserved state name "id" may be used in transitions for the identity.
struct AutomatonSpec {
    std::vector<std::string> states;
    // state -> vertex -> (edge -> edge)
    std::map<std::string, std::map<std::string, std::map<std::string, std::string>>> perm;
    // state -> edge -> state
    std::map<std::string, std::map<std::string, std::string>> trans;
};

/// Word in the automaton group: letters are +-(state+1). Equality of group
/// elements is never decided syntactically; it always routes through
/// is_trivial.
struct GroupWord {
    std::vector<int32_t> letters;

    bool empty() const { return letters.empty(); }

    GroupWord inverse() const {
        GroupWord r;
        r.letters.reserve(letters.size());
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back(-*it);
        return r;
    }

    /// Concatenation with free reduction at the seam.
    GroupWord then(const GroupWord& other) const {
        GroupWord r = *this;
        for (int32_t l : other.letters) {
            if (!r.letters.empty() && r.letters.back() == -l)
                r.letters.pop_back();
            else
                r.letters.push_back(l);
        }
        return r;
    }

    friend bool operator==(const GroupWord& a, const GroupWord& b) { return a.letters == b.letters; }
    friend bool operator<(const GroupWord& a, const GroupWord& b) { return a.letters < b.letters; }
};

/// A self-similar action of a group on a rank-1 path category, given by a
/// finite automaton. States act by graph automorphisms (edge permutations
/// compatible with a vertex permutation); the cocycle is read off the
/// transition table and extended along paths and words.
class Automaton {
public:
    Automaton(const PathCategory& cat, const AutomatonSpec& spec) : cat_(&cat) {
        if (cat.rank() != 1)
            throw error(errc::parameter, "automaton actions are supported on rank-1 categories only");
        const FactorGraph& g = cat.factor(0);
        size_t ne = g.edge_names.size(), nv = g.vertex_names.size();
        for (const std::string& s : spec.states) {
            if (s == "id") throw error(errc::parameter, "state name 'id' is reserved");
            if (state_index_.count(s)) throw error(errc::parameter, "duplicate state: " + s);
            state_index_[s] = static_cast<uint32_t>(state_names_.size());
            state_names_.push_back(s);
        }
        edge_map_.assign(state_names_.size(), std::vector<uint32_t>(ne));
        edge_inv_.assign(state_names_.size(), std::vector<uint32_t>(ne));
        vertex_map_.assign(state_names_.size(), std::vector<uint32_t>(nv));
        vertex_inv_.assign(state_names_.size(), std::vector<uint32_t>(nv));
        trans_.assign(state_names_.size(), std::vector<int32_t>(ne, 0));

        for (uint32_t q = 0; q < state_names_.size(); ++q) {
            const std::string& qs = state_names_[q];
            auto pit = spec.perm.find(qs);
            if (pit == spec.perm.end()) throw error(errc::parameter, "missing perm for state " + qs);
            std::vector<bool> edge_seen(ne, false), edge_hit(ne, false);
            std::vector<int64_t> vmap(nv, -1);
            for (const auto& [vname, emap] : pit->second) {
                auto vit = g.vertex_index.find(vname);
                if (vit == g.vertex_index.end())
                    throw error(errc::parameter, "perm for " + qs + " names unknown vertex " + vname);
                for (const auto& [from, to] : emap) {
                    auto fit = g.edge_index.find(from);
                    auto tit = g.edge_index.find(to);
                    if (fit == g.edge_index.end() || tit == g.edge_index.end())
                        throw error(errc::parameter, "perm for " + qs + " names unknown edge");
                    uint32_t fe = fit->second, te = tit->second;
                    if (g.edge_dst[fe] != vit->second)
                        throw error(errc::parameter,
                                    "perm for " + qs + ": edge " + from + " is not at vertex " + vname);
                    if (edge_seen[fe] || edge_hit[te])
                        throw error(errc::parameter, "perm for " + qs + " is not a bijection");
                    edge_seen[fe] = true;
                    edge_hit[te] = true;
                    edge_map_[q][fe] = te;
                    edge_inv_[q][te] = fe;
                    // vertex action induced on both endpoints
                    for (auto [vf, vt] : {std::pair{g.edge_dst[fe], g.edge_dst[te]},
                                          std::pair{g.edge_src[fe], g.edge_src[te]}}) {
                        if (vmap[vf] >= 0 && vmap[vf] != vt)
                            throw error(errc::parameter,
                                        "perm for " + qs + " induces an inconsistent vertex action");
                        vmap[vf] = vt;
                    }
                }
            }
            for (uint32_t e = 0; e < ne; ++e)
                if (!edge_seen[e]) throw error(errc::parameter, "perm for " + qs + " misses an edge");
            for (uint32_t v = 0; v < nv; ++v) {
                if (vmap[v] < 0) vmap[v] = v;  // isolated vertex
                vertex_map_[q][v] = static_cast<uint32_t>(vmap[v]);
            }
            std::vector<bool> vhit(nv, false);
            for (uint32_t v = 0; v < nv; ++v) {
                if (vhit[vertex_map_[q][v]])
                    throw error(errc::parameter, "perm for " + qs + ": vertex action not bijective");
                vhit[vertex_map_[q][v]] = true;
                vertex_inv_[q][vertex_map_[q][v]] = v;
            }

            auto tit = spec.trans.find(qs);
            if (tit == spec.trans.end()) throw error(errc::parameter, "missing trans for state " + qs);
            for (uint32_t e = 0; e < ne; ++e) {
                auto eit = tit->second.find(g.edge_names[e]);
                if (eit == tit->second.end())
                    throw error(errc::parameter, "trans for " + qs + " misses edge " + g.edge_names[e]);
                if (eit->second == "id") {
                    trans_[q][e] = 0;
                } else {
                    auto sit = state_index_.find(eit->second);
                    if (sit == state_index_.end())
                        throw error(errc::parameter, "trans for " + qs + " names unknown state");
                    trans_[q][e] = static_cast<int32_t>(sit->second) + 1;
                }
            }
        }

        // cocycle compatibility at the domain end: d(q.e) = trans(q,e).d(e)
        for (uint32_t q = 0; q < state_names_.size(); ++q)
            for (uint32_t e = 0; e < ne; ++e) {
                uint32_t want = g.edge_src[edge_map_[q][e]];
                uint32_t got = trans_[q][e] == 0 ? g.edge_src[e]
                                                 : vertex_map_[trans_[q][e] - 1][g.edge_src[e]];
                if (want != got)
                    throw error(errc::parameter, "automaton violates the domain cocycle axiom at state " +
                                                     state_names_[q] + ", edge " + g.edge_names[e]);
            }
    }

    const PathCategory& category() const { return *cat_; }
    size_t state_count() const { return state_names_.size(); }
    const std::string& state_name(size_t i) const { return state_names_[i]; }

    GroupWord state_word(const std::string& name) const {
        auto it = state_index_.find(name);
        if (it == state_index_.end()) throw error(errc::parameter, "unknown state: " + name);
        return GroupWord{{static_cast<int32_t>(it->second) + 1}};
    }

    std::string format(const GroupWord& w) const {
        if (w.empty()) return "id";
        std::string s;
        for (int32_t l : w.letters) {
            if (!s.empty()) s += '.';
            s += state_names_[std::abs(l) - 1];
            if (l < 0) s += "^-1";
        }
        return s;
    }

    uint32_t act_vertex(const GroupWord& w, uint32_t v) const {
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
            v = *it > 0 ? vertex_map_[*it - 1][v] : vertex_inv_[-*it - 1][v];
        return v;
    }

    ObjectId act_object(const GroupWord& w, const ObjectId& v) const {
        return ObjectId{act_vertex(w, v[0])};
    }

    /// Single-letter action and cocycle on one edge.
    uint32_t act_edge(int32_t letter, uint32_t e) const {
        return letter > 0 ? edge_map_[letter - 1][e] : edge_inv_[-letter - 1][e];
    }

    GroupWord cocycle_edge(int32_t letter, uint32_t e) const {
        if (letter > 0) {
            int32_t t = trans_[letter - 1][e];
            return t == 0 ? GroupWord{} : GroupWord{{t}};
        }
        uint32_t pre = edge_inv_[-letter - 1][e];
        int32_t t = trans_[-letter - 1][pre];
        return t == 0 ? GroupWord{} : GroupWord{{-t}};
    }

    /// Word action on one edge together with the section there.
    std::pair<uint32_t, GroupWord> act_and_section(const GroupWord& w, uint32_t e) const {
        GroupWord section;
        uint32_t cur = e;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
            section = cocycle_edge(*it, cur).then(section);
            cur = act_edge(*it, cur);
        }
        return {cur, section};
    }

    /// Action on a morphism (rank 1): g.(e1 e2 ...) peels edges from the
    /// target end, twisting the tail by the running section.
    Morphism act(const GroupWord& w, const Morphism& a) const {
        Morphism r = a;
        r.tgt[0] = act_vertex(w, a.tgt[0]);
        GroupWord cur = w;
        uint32_t at = r.tgt[0];
        for (size_t i = 0; i < a.paths[0].size(); ++i) {
            auto [e, sec] = act_and_section(cur, a.paths[0][i]);
            r.paths[0][i] = e;
            cur = sec;
            at = cat_->factor(0).edge_src[e];
        }
        r.dom[0] = at;
        return r;
    }

    GroupWord cocycle(const GroupWord& w, const Morphism& a) const {
        GroupWord cur = w;
        for (uint32_t e : a.paths[0]) cur = act_and_section(cur, e).second;
        return cur;
    }

    /// Decides whether the word acts trivially on the whole path category:
    /// every section reachable from w must fix all vertices and all edges.
    /// The cache carries verdicts across queries within one solver run.
    bool is_trivial(const GroupWord& w, std::map<GroupWord, bool>* cache = nullptr) const {
        std::map<GroupWord, bool> local;
        std::map<GroupWord, bool>& memo = cache ? *cache : local;
        if (auto it = memo.find(w); it != memo.end()) return it->second;
        // reachable-section closure; the closure is forward-closed, so on
        // success every member is itself trivial
        std::set<GroupWord> seen{w};
        std::vector<GroupWord> frontier{w};
        const FactorGraph& g = cat_->factor(0);
        while (!frontier.empty()) {
            GroupWord cur = frontier.back();
            frontier.pop_back();
            if (!top_identity(cur)) {
                memo[w] = false;
                memo[cur] = false;
                return false;
            }
            for (uint32_t e = 0; e < g.edge_names.size(); ++e) {
                GroupWord sec = act_and_section(cur, e).second;
                if (seen.insert(sec).second) frontier.push_back(sec);
            }
        }
        for (const GroupWord& u : seen) memo[u] = true;
        return true;
    }

private:
    const PathCategory* cat_;
    std::vector<std::string> state_names_;
    std::map<std::string, uint32_t> state_index_;
    std::vector<std::vector<uint32_t>> edge_map_, edge_inv_;
    std::vector<std::vector<uint32_t>> vertex_map_, vertex_inv_;
    std::vector<std::vector<int32_t>> trans_;  // 0 = identity

    bool top_identity(const GroupWord& w) const {
        const FactorGraph& g = cat_->factor(0);
        for (uint32_t v = 0; v < g.vertex_names.size(); ++v)
            if (act_vertex(w, v) != v) return false;
        for (uint32_t e = 0; e < g.edge_names.size(); ++e)
            if (act_and_section(w, e).first != e) return false;
        return true;
    }
};

}  // namespace garcat

#endif
