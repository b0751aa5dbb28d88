#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fraisse/partite.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

inline Signature labelled_partite_signature(int n) {
    std::vector<RelationSymbol> rels = {{kEdgeRel, 2}};
    for (int i = 0; i < n; ++i) rels.push_back({"chi" + std::to_string(i), 1});
    return Signature(rels);
}

/// A labelled n-partite tournament: parts are exactly the nonempty colour
/// classes, with distinct parts carrying distinct colours.
struct LabelledPartite {
    PartiteTournament pt;
    std::map<ElemId, int> colour;
};

/// Validity check for the labelled n-partite class over {->, chi_0..chi_{n-1}}.
inline std::variant<LabelledPartite, PartiteViolation> check_dn(const FiniteStructure& s, int n) {
    auto base = check_partite(s);
    if (std::holds_alternative<PartiteViolation>(base)) return std::get<PartiteViolation>(base);
    LabelledPartite out;
    out.pt = std::get<PartiteTournament>(base);
    for (ElemId v : s.universe()) {
        int found = -1;
        for (int i = 0; i < n; ++i)
            if (s.has_tuple("chi" + std::to_string(i), {v})) {
                if (found != -1) return PartiteViolation{"element carries two colours", {v}};
                found = i;
            }
        if (found == -1) return PartiteViolation{"element carries no colour", {v}};
        out.colour[v] = found;
    }
    for (const auto& P : out.pt.parts)
        for (ElemId v : P)
            if (out.colour[v] != out.colour[P[0]])
                return PartiteViolation{"part is not monochromatic", {P[0], v}};
    std::map<int, std::size_t> colour_part;
    for (std::size_t k = 0; k < out.pt.parts.size(); ++k) {
        int c = out.colour[out.pt.parts[k][0]];
        auto it = colour_part.find(c);
        if (it != colour_part.end())
            return PartiteViolation{"two parts share a colour", {out.pt.parts[it->second][0], out.pt.parts[k][0]}};
        colour_part[c] = k;
    }
    return out;
}

/// Independence for the labelled partite class: new points of B and C are
/// disjoint, and cross pairs in different parts point left to right.
inline bool dn_independent(const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
    IdSet bOnly = set_minus(set_union(B, A), A), cOnly = set_minus(set_union(C, A), A);
    if (!set_disjoint(bOnly, cOnly)) return false;
    for (ElemId b : bOnly)
        for (ElemId c : cOnly) {
            if (orthogonal(s, b, c)) continue;  // same part: unconstrained
            if (!has_edge(s, b, c)) return false;
        }
    return true;
}

/// The label permutation induced by a colour-class-coherent partial iso.
inline std::map<int, int> label_permutation(const FiniteStructure& src, const FiniteStructure& tgt,
                                            const std::map<ElemId, ElemId>& f, int n) {
    auto colour_of = [&](const FiniteStructure& s, ElemId v) {
        for (int i = 0; i < n; ++i)
            if (s.has_tuple("chi" + std::to_string(i), {v})) return i;
        throw StructureError("element carries no colour");
    };
    std::map<int, int> pi;
    for (auto& [v, w] : f) {
        int ci = colour_of(src, v), cj = colour_of(tgt, w);
        auto it = pi.find(ci);
        if (it != pi.end() && it->second != cj)
            throw StructureError("map is not colour-class-coherent");
        pi[ci] = cj;
    }
    // injectivity of the partial label map
    std::map<int, int> seen;
    for (auto& [i, j] : pi) {
        if (seen.count(j)) throw StructureError("map is not colour-class-coherent");
        seen[j] = i;
    }
    return pi;
}

// --------------------------------------------------------------------------
// The omega-partite C4-tournament class
// --------------------------------------------------------------------------

/// A partite tournament with parts of size at most two satisfying
/// u -> v  iff  u <- v' for partners v bot v'.
struct DoublePartite {
    PartiteTournament pt;
    std::map<ElemId, ElemId> partner;  // defined on points in full parts
};

inline std::variant<DoublePartite, PartiteViolation> check_f_class(const FiniteStructure& s) {
    auto base = check_partite(s);
    if (std::holds_alternative<PartiteViolation>(base)) return std::get<PartiteViolation>(base);
    DoublePartite out;
    out.pt = std::get<PartiteTournament>(base);
    for (const auto& P : out.pt.parts) {
        if (P.size() > 2) return PartiteViolation{"part larger than two", P};
        if (P.size() == 2) {
            out.partner[P[0]] = P[1];
            out.partner[P[1]] = P[0];
        }
    }
    for (const auto& P : out.pt.parts) {
        if (P.size() != 2) continue;
        for (ElemId u : s.universe()) {
            if (set_contains(P, u)) continue;
            if (edge_dir(s, u, P[0]) == edge_dir(s, u, P[1]))
                return PartiteViolation{"partner edges not alternating", {u, P[0], P[1]}};
        }
    }
    return out;
}

/// The involution swapping the two points of every part; requires all parts
/// full. Returns the verified PartialIso map.
inline std::map<ElemId, ElemId> sigma_involution(const FiniteStructure& s) {
    auto res = check_f_class(s);
    if (std::holds_alternative<PartiteViolation>(res))
        throw StructureError("not in the doubled-part class: " + std::get<PartiteViolation>(res).reason);
    auto& dp = std::get<DoublePartite>(res);
    for (const auto& P : dp.pt.parts)
        if (P.size() != 2) throw StructureError("sigma requires all parts full");
    PartialIso iso{&s, &s, {}};
    for (auto& [v, w] : dp.partner) iso.map[v] = w;
    if (!iso.valid()) throw StructureError("partner involution is not an automorphism");
    return std::map<ElemId, ElemId>(iso.map.begin(), iso.map.end());
}

// --------------------------------------------------------------------------
// The twisted partial order
// --------------------------------------------------------------------------

/// tau coding of an oriented-graph pair: 0 for non-adjacent, 1 for a <- b,
/// -1 (stored as 2 mod 3) for a -> b. The explicit table avoids sign drift.
inline int tau_of(const FiniteStructure& s, ElemId a, ElemId b) {
    if (has_edge(s, a, b)) return -1;
    if (has_edge(s, b, a)) return 1;
    return 0;
}

inline void add_tau(FiniteStructure& s, ElemId a, ElemId b, int tau) {
    int t = ((tau % 3) + 3) % 3;  // representatives {0, 1, 2}, 2 meaning -1
    if (t == 1) s.add_tuple(kEdgeRel, {b, a});
    else if (t == 2) s.add_tuple(kEdgeRel, {a, b});
}

struct ColouredPosetViolation {
    std::string reason;
    IdSet witness;
};

/// Checks that s (over {->, chi_0, chi_1, chi_2}) is a 3-coloured strict
/// partial order.
inline std::optional<ColouredPosetViolation> check_coloured_poset(const FiniteStructure& s) {
    for (ElemId v : s.universe()) {
        int found = -1;
        for (int i = 0; i < 3; ++i)
            if (s.has_tuple("chi" + std::to_string(i), {v})) {
                if (found != -1) return ColouredPosetViolation{"two colours", {v}};
                found = i;
            }
        if (found == -1) return ColouredPosetViolation{"no colour", {v}};
    }
    for (const auto& t : s.tuples(kEdgeRel)) {
        if (t[0] == t[1]) return ColouredPosetViolation{"not irreflexive", {t[0]}};
        if (s.has_tuple(kEdgeRel, {t[1], t[0]})) return ColouredPosetViolation{"not antisymmetric", {t[0], t[1]}};
    }
    for (const auto& t : s.tuples(kEdgeRel))
        for (ElemId w : s.universe())
            if (s.has_tuple(kEdgeRel, {t[1], w}) && !s.has_tuple(kEdgeRel, {t[0], w}))
                return ColouredPosetViolation{"not transitive", {t[0], t[1], w}};
    return std::nullopt;
}

inline int colour3_of(const FiniteStructure& s, ElemId v) {
    for (int i = 0; i < 3; ++i)
        if (s.has_tuple("chi" + std::to_string(i), {v})) return i;
    throw StructureError("element carries no colour");
}

/// The twist: cross-colour pairs are recoded by tau <- tau + j - i (mod 3);
/// within-colour structure is unchanged.
inline FiniteStructure p3_twist(const FiniteStructure& o) {
    if (auto bad = check_coloured_poset(o))
        throw StructureError("not a 3-coloured poset: " + bad->reason);
    FiniteStructure h(o.signature());
    for (ElemId v : o.universe()) h.add_element(v);
    for (int i = 0; i < 3; ++i)
        for (const auto& t : o.tuples("chi" + std::to_string(i))) h.add_tuple("chi" + std::to_string(i), t);
    const IdSet& u = o.universe();
    for (std::size_t x = 0; x < u.size(); ++x)
        for (std::size_t y = x + 1; y < u.size(); ++y) {
            ElemId a = u[x], b = u[y];
            int i = colour3_of(o, a), j = colour3_of(o, b);
            int tau = tau_of(o, a, b);
            if (i == j) add_tau(h, a, b, tau);
            else add_tau(h, a, b, tau + j - i);
        }
    return h;
}

/// Inverse of the twist; reports a violation when the untwisted relation is
/// not a partial order.
inline std::variant<FiniteStructure, ColouredPosetViolation> p3_untwist(const FiniteStructure& h) {
    FiniteStructure o(h.signature());
    for (ElemId v : h.universe()) o.add_element(v);
    for (int i = 0; i < 3; ++i)
        for (const auto& t : h.tuples("chi" + std::to_string(i))) o.add_tuple("chi" + std::to_string(i), t);
    const IdSet& u = h.universe();
    for (std::size_t x = 0; x < u.size(); ++x)
        for (std::size_t y = x + 1; y < u.size(); ++y) {
            ElemId a = u[x], b = u[y];
            int i = colour3_of(h, a), j = colour3_of(h, b);
            int tau = tau_of(h, a, b);
            if (i == j) add_tau(o, a, b, tau);
            else add_tau(o, a, b, tau - (j - i));
        }
    if (auto bad = check_coloured_poset(o)) return *bad;
    return o;
}

/// Attaches the apex: a fresh vertex v with tau(v, b) = i for b of colour i.
/// The output drops the colours (it is a plain oriented graph).
inline FiniteStructure p3_attach_apex(const FiniteStructure& h) {
    FiniteStructure out(oriented_graph_signature());
    for (ElemId v : h.universe()) out.add_element(v);
    ElemId apex = out.fresh_id();
    out.add_element(apex);
    for (const auto& t : h.tuples(kEdgeRel)) out.add_tuple(kEdgeRel, t);
    for (ElemId b : h.universe()) add_tau(out, apex, b, colour3_of(h, b));
    return out;
}

}  // namespace fraisse
