#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fraisse/structure.hpp"

namespace fraisse {

inline const std::string kEdgeRel = "->";

inline Signature oriented_graph_signature() { return Signature({{kEdgeRel, 2}}); }
inline Signature srho_signature() { return Signature({{kEdgeRel, 2}}, {{"rho"}}); }
inline Signature srhosigma_signature() { return Signature({{kEdgeRel, 2}}, {{"rho"}, {"sigma"}}); }

inline Signature coloured_order_signature(int n) {
    std::vector<RelationSymbol> rels = {{"<", 2}};
    for (int i = 0; i < n; ++i) rels.push_back({"chi" + std::to_string(i), 1});
    return Signature(rels);
}

struct PartiteViolation {
    std::string reason;
    IdSet witness;
};

/// An oriented graph whose non-adjacency is an equivalence relation, with the
/// derived part partition.
struct PartiteTournament {
    FiniteStructure s;
    std::vector<IdSet> parts;                 // sorted by least element
    std::map<ElemId, std::size_t> part_of;    // element -> index into parts

    const IdSet& part(ElemId v) const { return parts[part_of.at(v)]; }
    bool same_part(ElemId u, ElemId v) const { return part_of.at(u) == part_of.at(v); }
};

inline bool has_edge(const FiniteStructure& s, ElemId u, ElemId v) {
    return s.has_tuple(kEdgeRel, {u, v});
}

/// d(uv) = 1 iff u -> v; requires u ~ v.
inline int edge_dir(const FiniteStructure& s, ElemId u, ElemId v) {
    if (has_edge(s, u, v)) return 1;
    if (has_edge(s, v, u)) return 0;
    throw StructureError("no edge between " + std::to_string(u) + " and " + std::to_string(v));
}

inline bool orthogonal(const FiniteStructure& s, ElemId u, ElemId v) {
    return !has_edge(s, u, v) && !has_edge(s, v, u);
}

/// Checks that s is an oriented graph (irreflexive, antisymmetric) whose
/// non-adjacency relation is an equivalence; returns the derived parts.
inline std::variant<PartiteTournament, PartiteViolation> check_partite(const FiniteStructure& s) {
    int r = s.signature().relation_index(kEdgeRel);
    for (const auto& t : s.tuples(r)) {
        if (t[0] == t[1]) return PartiteViolation{"edge relation not irreflexive", {t[0]}};
        if (s.has_tuple(r, {t[1], t[0]}))
            return PartiteViolation{"edge relation not antisymmetric", {t[0], t[1]}};
    }
    // parts = connected components of the non-adjacency graph; then verify
    // every within-component pair is actually non-adjacent (transitivity)
    PartiteTournament pt;
    pt.s = s;
    std::map<ElemId, ElemId> root;
    std::function<ElemId(ElemId)> find = [&](ElemId v) -> ElemId {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    for (ElemId v : s.universe()) root[v] = v;
    const auto& u = s.universe();
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
            if (orthogonal(s, u[i], u[j])) root[find(u[i])] = find(u[j]);
    std::map<ElemId, IdSet> classes;
    for (ElemId v : u) classes[find(v)].push_back(v);
    for (auto& [rep, members] : classes) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                if (!orthogonal(s, members[i], members[j]))
                    return PartiteViolation{"non-adjacency is not transitive", {members[i], members[j]}};
        pt.parts.push_back(make_set(members));
    }
    std::sort(pt.parts.begin(), pt.parts.end(),
              [](const IdSet& a, const IdSet& b) { return a.front() < b.front(); });
    for (std::size_t k = 0; k < pt.parts.size(); ++k)
        for (ElemId v : pt.parts[k]) pt.part_of[v] = k;
    return pt;
}

/// A partite tournament satisfying the parity condition.
struct SemigenericStructure {
    PartiteTournament pt;
    const FiniteStructure& structure() const { return pt.s; }
};

/// Checks the parity condition: for all separated pairs {u,u'}, {v,v'} the
/// number of out-edges from one pair to the other is even. Returns the
/// structure with derived parts, or a violating quadruple.
inline std::variant<SemigenericStructure, PartiteViolation> check_semigeneric(const FiniteStructure& s) {
    auto base = check_partite(s);
    if (std::holds_alternative<PartiteViolation>(base)) return std::get<PartiteViolation>(base);
    auto pt = std::get<PartiteTournament>(base);
    for (std::size_t pi = 0; pi < pt.parts.size(); ++pi) {
        const IdSet& P = pt.parts[pi];
        if (P.size() < 2) continue;
        for (std::size_t qi = pi + 1; qi < pt.parts.size(); ++qi) {
            const IdSet& Q = pt.parts[qi];
            if (Q.size() < 2) continue;
            for (std::size_t i = 0; i < P.size(); ++i)
                for (std::size_t j = i + 1; j < P.size(); ++j)
                    for (std::size_t k = 0; k < Q.size(); ++k)
                        for (std::size_t l = k + 1; l < Q.size(); ++l) {
                            int total = edge_dir(s, P[i], Q[k]) + edge_dir(s, P[i], Q[l]) +
                                        edge_dir(s, P[j], Q[k]) + edge_dir(s, P[j], Q[l]);
                            if (total % 2 != 0)
                                return PartiteViolation{"parity violation",
                                                        {P[i], P[j], Q[k], Q[l]}};
                        }
        }
    }
    return SemigenericStructure{std::move(pt)};
}

/// The equivalence relation ~_{P,v} on a part P induced by an outside vertex:
/// u ~ u' iff d(uv) = d(u'v). Returns the 1- or 2-block partition.
inline std::vector<IdSet> part_equiv(const SemigenericStructure& sg, const IdSet& P, ElemId v) {
    if (set_contains(P, v)) throw StructureError("v must lie outside P");
    IdSet in, out;
    for (ElemId u : P) (edge_dir(sg.structure(), u, v) ? out : in).push_back(u);
    std::vector<IdSet> blocks;
    if (!out.empty()) blocks.push_back(out);
    if (!in.empty()) blocks.push_back(in);
    return blocks;
}

/// Unique amalgam orientation for the three-in-four configuration: A has
/// exactly parts P, Q; b joins P (b is orthogonal to P), c joins Q; edges
/// b-Q and P-c are given in s; the orientation of bc is forced by parity.
/// Returns d(bc) (1 means b -> c) and verifies the completed structure.
inline int amalgam_3in4(const FiniteStructure& s, ElemId b, ElemId c) {
    IdSet rest = set_minus(s.universe(), make_set({b, c}));
    auto sub = check_semigeneric(s.induced(rest));
    if (std::holds_alternative<PartiteViolation>(sub))
        throw StructureError("base is not semigeneric: " + std::get<PartiteViolation>(sub).reason);
    auto& A = std::get<SemigenericStructure>(sub);
    if (A.pt.parts.size() != 2) throw StructureError("base must have exactly two parts");
    // identify the parts b and c join
    auto joins = [&](ElemId x, const IdSet& part) {
        for (ElemId u : part)
            if (!orthogonal(s, x, u)) return false;
        return true;
    };
    const IdSet *P = nullptr, *Q = nullptr;
    if (joins(b, A.pt.parts[0]) && joins(c, A.pt.parts[1])) {
        P = &A.pt.parts[0];
        Q = &A.pt.parts[1];
    } else if (joins(b, A.pt.parts[1]) && joins(c, A.pt.parts[0])) {
        P = &A.pt.parts[1];
        Q = &A.pt.parts[0];
    } else {
        throw StructureError("b and c must join the two parts of the base");
    }
    {
        auto whole_b = check_semigeneric(s.induced(set_minus(s.universe(), {c})));
        auto whole_c = check_semigeneric(s.induced(set_minus(s.universe(), {b})));
        if (std::holds_alternative<PartiteViolation>(whole_b) ||
            std::holds_alternative<PartiteViolation>(whole_c))
            throw StructureError("inputs are parity-invalid");
    }
    ElemId u = (*P)[0], v = (*Q)[0];
    int d = (edge_dir(s, u, v) + edge_dir(s, u, c) + edge_dir(s, b, v)) % 2;
    // verify: the completed structure is semigeneric
    FiniteStructure done = s;
    done.add_tuple(kEdgeRel, d ? Tuple{b, c} : Tuple{c, b});
    auto res = check_semigeneric(done);
    if (std::holds_alternative<PartiteViolation>(res))
        throw StructureError("inputs are parity-invalid: " + std::get<PartiteViolation>(res).reason);
    return d;
}

namespace detail {

/// Decide one new cross pair (b, c) given that the edges between either of
/// them and `known` are all present in s. Implements the three-case rule:
/// orthogonality witness, forced three-in-four orientation, default b -> c.
/// Returns -1 for "orthogonal", else d(bc).
inline int semigeneric_cross_rule(const FiniteStructure& s, ElemId b, ElemId c, const IdSet& known) {
    for (ElemId w : known)
        if (orthogonal(s, w, b) && orthogonal(s, w, c)) return -1;
    for (ElemId u : known) {
        if (!orthogonal(s, u, b)) continue;
        for (ElemId w : known) {
            if (w == u || !orthogonal(s, w, c)) continue;
            if (orthogonal(s, u, w)) continue;  // same part: handled above
            // parity on pairs {b,u}, {c,w}
            return (edge_dir(s, u, w) + edge_dir(s, u, c) + edge_dir(s, b, w)) % 2;
        }
    }
    return 1;  // default orientation b -> c
}

}  // namespace detail

/// Strong amalgamation for the semigeneric class: B and C agree on A; the
/// result extends both, deciding each new cross pair by the three-case rule
/// over the part of the structure already known (base plus earlier points).
inline FiniteStructure strong_amalgam_semigeneric(const FiniteStructure& A, const FiniteStructure& B,
                                                  const FiniteStructure& C) {
    const IdSet& a = A.universe();
    if (set_intersect(B.universe(), C.universe()) != a)
        throw StructureError("B and C must intersect exactly in A");
    if (!B.induced(a).equals(A) || !C.induced(a).equals(A))
        throw StructureError("B and C disagree on A");
    IdSet bOnly = set_minus(B.universe(), a);
    IdSet cOnly = set_minus(C.universe(), a);

    FiniteStructure out(B.signature());
    for (ElemId v : set_union(B.universe(), C.universe())) out.add_element(v);
    int r = out.signature().relation_index(kEdgeRel);
    for (const auto& t : B.tuples(r)) out.add_tuple(r, t);
    for (const auto& t : C.tuples(r)) if (!out.has_tuple(r, t)) out.add_tuple(r, t);
    for (std::size_t f = 0; f < out.signature().functions().size(); ++f) {
        for (ElemId v : B.universe()) out.set_function(static_cast<int>(f), v, B.function_value(static_cast<int>(f), v));
        for (ElemId v : cOnly) out.set_function(static_cast<int>(f), v, C.function_value(static_cast<int>(f), v));
    }

    IdSet known = a;
    for (ElemId c : cOnly) {
        IdSet known_b;  // left-side points already connected to c
        for (ElemId b : bOnly) {
            int d = detail::semigeneric_cross_rule(out, b, c, set_union(known, known_b));
            if (d == 1) out.add_tuple(r, {b, c});
            else if (d == 0) out.add_tuple(r, {c, b});
            known_b.push_back(b);
        }
        known.push_back(c);  // ids ascend, so push keeps it sorted? not necessarily
        known = make_set(known);
    }
    return out;
}

// --------------------------------------------------------------------------
// The rho expansion
// --------------------------------------------------------------------------

/// Validity of an S_rho (or S_rho,sigma) structure: the oriented-graph reduct
/// is semigeneric, rho is constant on each part with value in the part, and
/// when sigma is present it is likewise constant with a value distinct from
/// rho's.
inline std::variant<SemigenericStructure, PartiteViolation> check_srho(const FiniteStructure& s) {
    auto res = check_semigeneric(s);
    if (std::holds_alternative<PartiteViolation>(res)) return res;
    auto& sg = std::get<SemigenericStructure>(res);
    bool has_sigma = !s.signature().functions().empty() &&
                     s.signature().functions().size() > 1;
    int frho = s.signature().function_index("rho");
    for (const auto& P : sg.pt.parts) {
        ElemId red = s.function_value(frho, P[0]);
        if (!set_contains(P, red)) return PartiteViolation{"rho value outside its part", {P[0], red}};
        for (ElemId v : P)
            if (s.function_value(frho, v) != red)
                return PartiteViolation{"rho not constant on part", {v, red}};
        if (has_sigma) {
            int fsig = s.signature().function_index("sigma");
            ElemId blue = s.function_value(fsig, P[0]);
            if (!set_contains(P, blue)) return PartiteViolation{"sigma value outside its part", {P[0], blue}};
            if (blue == red) return PartiteViolation{"sigma value equals rho value", {red}};
            for (ElemId v : P)
                if (s.function_value(fsig, v) != blue)
                    return PartiteViolation{"sigma not constant on part", {v, blue}};
        }
    }
    return res;
}

/// The S_rho independence predicate: B and C are independent over A when
/// B\A and C\A are disjoint and each cross pair satisfies the case rule of
/// the expansion (fresh-fresh pairs point left to right; pairs anchored in an
/// A-part copy the red point's edge).
inline bool srho_independent(const FiniteStructure& s, const IdSet& A_in, const IdSet& B_in,
                             const IdSet& C_in) {
    IdSet A = s.function_closure(A_in);
    IdSet B = set_union(s.function_closure(B_in), A);
    IdSet C = set_union(s.function_closure(C_in), A);
    IdSet bOnly = set_minus(B, A), cOnly = set_minus(C, A);
    if (!set_disjoint(bOnly, cOnly)) return false;
    int frho = s.signature().function_index("rho");
    auto part_meets = [&](ElemId v) {
        // P_v meets A iff rho(v) lies in A (A is rho-closed)
        return set_contains(A, s.function_value(frho, v));
    };
    for (ElemId b : bOnly)
        for (ElemId c : cOnly) {
            bool bin = part_meets(b), cin = part_meets(c);
            if (!bin && !cin) {
                if (!has_edge(s, b, c)) return false;
            } else if (bin && !cin) {
                if (orthogonal(s, b, c) || edge_dir(s, b, c) != edge_dir(s, s.function_value(frho, b), c))
                    return false;
            } else if (!bin && cin) {
                if (orthogonal(s, b, c) || edge_dir(s, b, c) != edge_dir(s, b, s.function_value(frho, c)))
                    return false;
            }
            // both parts meeting A: no constraint
        }
    return true;
}

/// Canonical amalgam realizing the S_rho independence: all cross pairs are
/// forced (fresh-fresh: left to right; one anchored part: copy the red row;
/// both anchored: the parity condition on {b, rho(b), rho(c), c} decides).
inline FiniteStructure srho_canonical_amalgam(const FiniteStructure& A, const FiniteStructure& B,
                                              const FiniteStructure& C) {
    const IdSet& a = A.universe();
    if (set_intersect(B.universe(), C.universe()) != a)
        throw StructureError("B and C must intersect exactly in A");
    if (!B.induced(a).equals(A) || !C.induced(a).equals(A))
        throw StructureError("B and C disagree on A");
    IdSet bOnly = set_minus(B.universe(), a);
    IdSet cOnly = set_minus(C.universe(), a);

    FiniteStructure out(B.signature());
    for (ElemId v : set_union(B.universe(), C.universe())) out.add_element(v);
    int r = out.signature().relation_index(kEdgeRel);
    for (const auto& t : B.tuples(r)) out.add_tuple(r, t);
    for (const auto& t : C.tuples(r)) if (!out.has_tuple(r, t)) out.add_tuple(r, t);
    int frho = out.signature().function_index("rho");
    for (ElemId v : B.universe()) out.set_function(frho, v, B.function_value(frho, v));
    for (ElemId v : cOnly) out.set_function(frho, v, C.function_value(frho, v));

    auto anchored = [&](ElemId v) { return set_contains(a, out.function_value(frho, v)); };
    for (ElemId b : bOnly)
        for (ElemId c : cOnly) {
            bool bin = anchored(b), cin = anchored(c);
            if (!bin && !cin) {
                out.add_tuple(r, {b, c});
            } else if (bin && !cin) {
                int d = edge_dir(out, out.function_value(frho, b), c);
                out.add_tuple(r, d ? Tuple{b, c} : Tuple{c, b});
            } else if (!bin && cin) {
                int d = edge_dir(out, b, out.function_value(frho, c));
                out.add_tuple(r, d ? Tuple{b, c} : Tuple{c, b});
            } else {
                ElemId rb = out.function_value(frho, b), rc = out.function_value(frho, c);
                if (rb == rc) continue;  // same part: orthogonal
                int d = (edge_dir(out, b, rc) + edge_dir(out, rb, c) + edge_dir(out, rb, rc)) % 2;
                out.add_tuple(r, d ? Tuple{b, c} : Tuple{c, b});
            }
        }
    return out;
}

// --------------------------------------------------------------------------
// Stationarity obstruction search
// --------------------------------------------------------------------------

struct ObstructionCertificate {
    std::vector<QfType> candidates;                  // class-valid completions over base u right
    std::vector<std::map<ElemId, ElemId>> movers;    // per candidate, a symmetry moving it
};

/// Searches for an obstruction to a stationary choice of amalgam: enumerates
/// all class-valid completions of the 1-point `left` type against `right`
/// over `base`, and all symmetries of the (base, left, right) configuration.
/// Reports an obstruction when every candidate is moved by some symmetry.
/// Oriented-graph classes only (completions range over ->, <- and bot).
inline std::optional<ObstructionCertificate> stationarity_obstruction_search(
    const std::function<bool(const FiniteStructure&)>& in_class, const FiniteStructure& common,
    const IdSet& base, const QfType& left, const IdSet& right) {
    if (left.tuple_len != 1 || !left.exterior()) throw StructureError("left must be an exterior 1-type");
    IdSet ctx = set_union(base, right);
    FiniteStructure window = common.induced(ctx);
    IdSet rOnly = set_minus(window.universe(), base);

    // candidates: add x with relations to base from `left`, then all
    // three-state patterns against right \ base, filtered by class validity
    std::vector<QfType> candidates;
    std::vector<std::string> seen;
    std::size_t npairs = rOnly.size();
    std::vector<int> pattern(npairs, 0);
    std::function<void(std::size_t)> enumerate = [&](std::size_t i) {
        if (i == npairs) {
            FiniteStructure cand = window;
            ElemId x = cand.fresh_id();
            cand.add_element(x);
            int p = static_cast<int>(left.params.size());
            for (const auto& enc : left.rel_content[static_cast<std::size_t>(
                     cand.signature().relation_index(kEdgeRel))]) {
                Tuple t(enc.size());
                bool uses_new = false;
                for (std::size_t k = 0; k < enc.size(); ++k) {
                    t[k] = enc[k] < p ? left.params[static_cast<std::size_t>(enc[k])] : x;
                    if (enc[k] >= p) uses_new = true;
                }
                if (uses_new) cand.add_tuple(kEdgeRel, t);
            }
            for (std::size_t k = 0; k < npairs; ++k) {
                if (pattern[k] == 1) cand.add_tuple(kEdgeRel, {x, rOnly[k]});
                else if (pattern[k] == 2) cand.add_tuple(kEdgeRel, {rOnly[k], x});
            }
            if (!in_class(cand)) return;
            auto t = qftp(cand, {x}, ctx);
            auto key = t.full_key();
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                candidates.push_back(t);
            }
            return;
        }
        for (int v = 0; v < 3; ++v) {
            pattern[i] = v;
            enumerate(i + 1);
        }
    };
    enumerate(0);

    // symmetries: automorphisms of the window fixing base setwise and left
    std::vector<std::map<ElemId, ElemId>> symmetries;
    for (const auto& emb : enumerate_embeddings(window, window)) {
        bool base_ok = true;
        for (ElemId v : base)
            if (!set_contains(base, emb.map.at(v))) base_ok = false;
        if (!base_ok) continue;
        std::map<ElemId, ElemId> base_map;
        for (ElemId v : base) base_map[v] = emb.map.at(v);
        if (left.transport(base_map) != left) continue;
        symmetries.push_back(emb.map);
    }

    ObstructionCertificate cert;
    for (const auto& cand : candidates) {
        std::optional<std::map<ElemId, ElemId>> mover;
        for (const auto& g : symmetries) {
            if (cand.transport(g) != cand) {
                mover = g;
                break;
            }
        }
        if (!mover) return std::nullopt;  // a symmetry-fixed candidate exists
        cert.candidates.push_back(cand);
        cert.movers.push_back(*mover);
    }
    if (cert.candidates.empty()) return std::nullopt;  // vacuous: no completion at all
    return cert;
}

// --------------------------------------------------------------------------
// Transversals and red-blue extension problems
// --------------------------------------------------------------------------

/// A semigeneric structure with two transversal subsets. For S_++ use the
/// transversals must be disjoint.
struct TransversalTriple {
    FiniteStructure C;
    IdSet T;
    IdSet U;

    /// Validates: C semigeneric, T and U meet every part exactly once, and
    /// (when required) T and U are disjoint.
    void validate(bool require_disjoint = true) const {
        auto res = check_semigeneric(C);
        if (std::holds_alternative<PartiteViolation>(res))
            throw StructureError("triple carrier not semigeneric: " +
                                 std::get<PartiteViolation>(res).reason);
        auto& sg = std::get<SemigenericStructure>(res);
        for (const auto& P : sg.pt.parts) {
            if (set_intersect(P, T).size() != 1) throw StructureError("T is not a transversal");
            if (set_intersect(P, U).size() != 1) throw StructureError("U is not a transversal");
        }
        if (require_disjoint && !set_disjoint(T, U)) throw StructureError("transversals not disjoint");
    }
};

/// A red-blue extension problem: a subobject (B, T|B, U|B) together with one
/// new part {r, b}, r joining the red transversal and b the blue one.
struct RedBlueProblem {
    FiniteStructure base;   // marked structure over {->, Tm, Um}; the subobject
    IdSet baseT, baseU;
    // extension: edge patterns of r and b against base (d=1 means out-edge)
    std::map<ElemId, int> r_edges, b_edges;
    std::string canon;     // canonical code for isomorphism dedup

    /// The target structure: base plus the new part {r, b}.
    FiniteStructure target(ElemId* r_out = nullptr, ElemId* b_out = nullptr) const {
        FiniteStructure t = base;
        ElemId r = t.fresh_id();
        t.add_element(r);
        ElemId b = r + 1;
        t.add_element(b);
        for (auto& [v, d] : r_edges) t.add_tuple(kEdgeRel, d ? Tuple{r, v} : Tuple{v, r});
        for (auto& [v, d] : b_edges) t.add_tuple(kEdgeRel, d ? Tuple{b, v} : Tuple{v, b});
        if (r_out) *r_out = r;
        if (b_out) *b_out = b;
        return t;
    }
};

namespace detail {

/// Canonical code of a marked red-blue problem, for dedup up to isomorphism.
inline std::string red_blue_canon(const FiniteStructure& base, const IdSet& baseT, const IdSet& baseU,
                                  const std::map<ElemId, int>& re, const std::map<ElemId, int>& be) {
    Signature sig({{kEdgeRel, 2}, {"Tm", 1}, {"Um", 1}, {"Nm", 1}});
    FiniteStructure m(sig);
    for (ElemId v : base.universe()) m.add_element(v);
    ElemId r = m.fresh_id();
    m.add_element(r);
    ElemId b = r + 1;
    m.add_element(b);
    for (const auto& t : base.tuples(kEdgeRel)) m.add_tuple(kEdgeRel, t);
    for (ElemId v : baseT) m.add_tuple("Tm", {v});
    for (ElemId v : baseU) m.add_tuple("Um", {v});
    m.add_tuple("Tm", {r});
    m.add_tuple("Um", {b});
    m.add_tuple("Nm", {r});
    m.add_tuple("Nm", {b});
    for (auto& [v, d] : re) m.add_tuple(kEdgeRel, d ? Tuple{r, v} : Tuple{v, r});
    for (auto& [v, d] : be) m.add_tuple(kEdgeRel, d ? Tuple{b, v} : Tuple{v, b});
    return m.canonical_code();
}

}  // namespace detail

/// Enumerates, deterministically and up to isomorphism, the red-blue
/// extensions of subobjects of (C, T, U) with at most `max_base_points`
/// points in the subobject. When `must_touch` is nonempty, only subobjects
/// meeting it are enumerated (incremental rescans skip old subobjects).
inline std::vector<RedBlueProblem> red_blue_enumerate(const TransversalTriple& t,
                                                      std::size_t max_base_points = 4,
                                                      const IdSet& must_touch = {}) {
    t.validate();
    auto sgres = check_semigeneric(t.C);
    auto& sg = std::get<SemigenericStructure>(sgres);
    std::vector<RedBlueProblem> out;
    std::vector<std::string> seen;

    // enumerate subobjects: a set of parts, each contributing its T- and
    // U-point plus any subset of its remaining points
    std::vector<IdSet> part_choices;  // flattened enumeration below
    std::size_t nparts = sg.pt.parts.size();

    std::vector<IdSet> chosen;  // current members per chosen part
    std::function<void(std::size_t, std::size_t, IdSet)> rec = [&](std::size_t pi, std::size_t count,
                                                                   IdSet members) {
        if (pi == nparts) {
            if (!must_touch.empty() && set_disjoint(members, must_touch)) return;
            if (members.empty() && !must_touch.empty()) return;
            // members = the subobject; enumerate extensions
            FiniteStructure base = t.C.induced(members);
            IdSet bt = set_intersect(members, t.T), bu = set_intersect(members, t.U);
            std::size_t n = members.size();
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * n)); ++mask) {
                std::map<ElemId, int> re, be;
                for (std::size_t i = 0; i < n; ++i) {
                    re[members[i]] = (mask >> (2 * i)) & 1;
                    be[members[i]] = (mask >> (2 * i + 1)) & 1;
                }
                // parity filter: new pair {r,b} against orthogonal pairs of base
                bool ok = true;
                for (std::size_t i = 0; i < n && ok; ++i)
                    for (std::size_t j = i + 1; j < n && ok; ++j) {
                        if (!orthogonal(base, members[i], members[j])) continue;
                        int sum = re[members[i]] + re[members[j]] + be[members[i]] + be[members[j]];
                        if (sum % 2 != 0) ok = false;
                    }
                if (!ok) continue;
                RedBlueProblem prob{base, bt, bu, re, be, ""};
                // full validity check of the target
                auto chk = check_semigeneric(prob.target());
                if (std::holds_alternative<PartiteViolation>(chk)) continue;
                prob.canon = detail::red_blue_canon(base, bt, bu, re, be);
                if (std::find(seen.begin(), seen.end(), prob.canon) == seen.end()) {
                    seen.push_back(prob.canon);
                    out.push_back(std::move(prob));
                }
            }
            return;
        }
        // skip this part
        rec(pi + 1, count, members);
        // or include it: T-point, U-point, plus subsets of the rest
        const IdSet& P = sg.pt.parts[pi];
        ElemId tp = set_intersect(P, t.T)[0], up = set_intersect(P, t.U)[0];
        IdSet rest = set_minus(P, make_set({tp, up}));
        for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << rest.size()); ++sub) {
            IdSet add = {tp, up};
            for (std::size_t i = 0; i < rest.size(); ++i)
                if ((sub >> i) & 1) add.push_back(rest[i]);
            add = make_set(add);
            if (members.size() + add.size() > max_base_points) continue;
            rec(pi + 1, count + 1, set_union(members, add));
        }
    };
    rec(0, 0, {});
    return out;
}

}  // namespace fraisse
