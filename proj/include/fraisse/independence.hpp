#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/classes.hpp"
#include "fraisse/hypertournament.hpp"
#include "fraisse/partite.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

/// An executable ternary independence relation: eval(window, A, B, C) decides
/// B independent from C over A inside the window structure. Deterministic and
/// total on substructure triples of a class-valid window.
struct IndependencePredicate {
    std::string kind;
    ClassSpecPtr cls;  // the class whose limits this predicate lives on
    std::function<bool(const FiniteStructure&, const IdSet&, const IdSet&, const IdSet&)> eval;
};

/// The canonical-amalgamation form of an independence relation: amalgamate
/// (A, B, C) into a structure where the B-side is independent from the
/// C-side over A.
struct AmalgamOperator {
    std::string kind;
    std::function<FiniteStructure(const FiniteStructure&, const FiniteStructure&, const FiniteStructure&)>
        amalgamate;
};

namespace detail {

inline IdSet closed(const FiniteStructure& s, const IdSet& xs) { return s.function_closure(xs); }

/// no relation tuple touches both B \ A and C \ A
inline bool free_amalgam_eval(const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
    IdSet a = closed(s, A);
    IdSet bOnly = set_minus(closed(s, set_union(B, a)), a);
    IdSet cOnly = set_minus(closed(s, set_union(C, a)), a);
    if (!set_disjoint(bOnly, cOnly)) return false;
    IdSet all = set_union(set_union(a, bOnly), cOnly);
    for (std::size_t r = 0; r < s.signature().relations().size(); ++r)
        for (const auto& t : s.tuples_within(static_cast<int>(r), all)) {
            bool hitB = false, hitC = false;
            for (ElemId v : t) {
                if (set_contains(bOnly, v)) hitB = true;
                if (set_contains(cOnly, v)) hitC = true;
            }
            if (hitB && hitC) return false;
        }
    return true;
}

inline bool rationals_eval(const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
    IdSet a = closed(s, A);
    IdSet bOnly = set_minus(closed(s, set_union(B, a)), a);
    IdSet cOnly = set_minus(closed(s, set_union(C, a)), a);
    if (!set_disjoint(bOnly, cOnly)) return false;
    for (ElemId b : bOnly)
        for (ElemId c : cOnly) {
            bool separated = false;
            for (ElemId x : a)
                if ((s.has_tuple("<", {b, x}) && s.has_tuple("<", {x, c})) ||
                    (s.has_tuple("<", {c, x}) && s.has_tuple("<", {x, b})))
                    separated = true;
            if (!separated && !s.has_tuple("<", {b, c})) return false;
        }
    return true;
}

inline bool tournament_eval(const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
    IdSet a = closed(s, A);
    IdSet bOnly = set_minus(closed(s, set_union(B, a)), a);
    IdSet cOnly = set_minus(closed(s, set_union(C, a)), a);
    if (!set_disjoint(bOnly, cOnly)) return false;
    for (ElemId b : bOnly)
        for (ElemId c : cOnly)
            if (!s.has_tuple("R", {b, c})) return false;
    return true;
}

inline bool delta_eval(const MultiHypertournamentSpec& spec, const FiniteStructure& s, const IdSet& A,
                       const IdSet& B, const IdSet& C) {
    if (!spec.delta) throw StructureError("delta predicate needs a distinguished binary index");
    IdSet a = closed(s, A);
    IdSet bOnly = set_minus(closed(s, set_union(B, a)), a);
    IdSet cOnly = set_minus(closed(s, set_union(C, a)), a);
    if (!set_disjoint(bOnly, cOnly)) return false;
    int rd = s.signature().relation_index(*spec.delta);
    for (ElemId b : bOnly)
        for (ElemId c : cOnly)
            if (!s.has_tuple(rd, {b, c})) return false;
    auto dsign = [&](ElemId u, ElemId v) -> int {
        if (s.has_tuple(rd, {u, v})) return 1;
        if (s.has_tuple(rd, {v, u})) return -1;
        throw StructureError("delta reduct not total on the window");
    };
    // mixed tuples only: at least one point from each side, the rest from
    // anywhere in A u B u C (enumerated directly to stay cheap on big bases)
    IdSet all = set_union(set_union(a, bOnly), cOnly);
    for (auto& [rel, n] : spec.arities) {
        int r = s.signature().relation_index(rel);
        for (ElemId b : bOnly)
            for (ElemId c : cOnly) {
                Tuple rest;
                bool bad = false;
                std::function<void(std::size_t)> rec = [&](std::size_t start) {
                    if (bad) return;
                    if (static_cast<int>(rest.size()) == n - 2) {
                        Tuple subset = rest;
                        subset.push_back(b);
                        subset.push_back(c);
                        subset = make_set(subset);
                        if (static_cast<int>(subset.size()) != n) return;
                        // avoid double counting: b must be the least B-point,
                        // c the least C-point of the subset
                        for (ElemId v : subset) {
                            if (set_contains(bOnly, v) && v < b) return;
                            if (set_contains(cOnly, v) && v < c) return;
                        }
                        int prod = 1;
                        for (std::size_t i = 0; i < subset.size(); ++i)
                            for (std::size_t j = i + 1; j < subset.size(); ++j)
                                prod *= dsign(subset[i], subset[j]);
                        if ((prod == 1) != s.has_tuple(r, subset)) bad = true;
                        return;
                    }
                    for (std::size_t i = start; i < all.size(); ++i) {
                        if (all[i] == b || all[i] == c) continue;
                        rest.push_back(all[i]);
                        rec(i + 1);
                        rest.pop_back();
                    }
                };
                rec(0);
                if (bad) return false;
            }
    }
    return true;
}

}  // namespace detail

/// The predicate catalogue. Kinds: free-amalgam, rationals-order,
/// random-tournament, multi-hypertournament-delta, srho, labelled-partite.
inline IndependencePredicate make_predicate(const std::string& kind) {
    IndependencePredicate p;
    p.kind = kind;
    if (kind == "free-amalgam") {
        p.cls = make_class("graph");
        p.eval = detail::free_amalgam_eval;
    } else if (kind == "rationals-order") {
        p.cls = make_class("q1");
        p.eval = detail::rationals_eval;
    } else if (kind == "random-tournament") {
        p.cls = make_class("t2");
        p.eval = detail::tournament_eval;
    } else if (kind == "multi-hypertournament-delta") {
        auto cls = std::make_shared<MultiTnClass>(MultiHypertournamentSpec({{"R2", 2}, {"R3", 3}}, "R2"));
        p.cls = cls;
        auto spec = cls->spec();
        p.eval = [spec](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            return detail::delta_eval(spec, s, A, B, C);
        };
    } else if (kind == "srho") {
        p.cls = make_class("srho");
        p.eval = [](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            return srho_independent(s, A, B, C);
        };
    } else if (kind == "labelled-partite") {
        p.cls = make_class("d3");
        p.eval = [](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            IdSet a = detail::closed(s, A);
            return dn_independent(s, a, set_union(B, a), set_union(C, a));
        };
    } else {
        throw StructureError("unknown predicate kind: " + kind);
    }
    return p;
}

/// A deliberately broken variant of a predicate (one clause flipped or
/// weakened), for mutation testing of the axiom auditor.
inline IndependencePredicate make_mutant_predicate(const std::string& kind) {
    IndependencePredicate p = make_predicate(kind);
    p.kind = kind + "-mutant";
    if (kind == "rationals-order") {
        // flipped guard: pairs with a separator must satisfy b < c; pairs
        // without one are unconstrained
        p.eval = [](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            IdSet a = detail::closed(s, A);
            IdSet bOnly = set_minus(detail::closed(s, set_union(B, a)), a);
            IdSet cOnly = set_minus(detail::closed(s, set_union(C, a)), a);
            if (!set_disjoint(bOnly, cOnly)) return false;
            for (ElemId b : bOnly)
                for (ElemId c : cOnly) {
                    bool separated = false;
                    for (ElemId x : a)
                        if ((s.has_tuple("<", {b, x}) && s.has_tuple("<", {x, c})) ||
                            (s.has_tuple("<", {c, x}) && s.has_tuple("<", {x, b})))
                            separated = true;
                    if (separated && !s.has_tuple("<", {b, c})) return false;
                }
            return true;
        };
    } else if (kind == "random-tournament") {
        // edge clause weakened to a tautology
        p.eval = [](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            IdSet a = detail::closed(s, A);
            IdSet bOnly = set_minus(detail::closed(s, set_union(B, a)), a);
            IdSet cOnly = set_minus(detail::closed(s, set_union(C, a)), a);
            return set_disjoint(bOnly, cOnly);
        };
    } else if (kind == "multi-hypertournament-delta") {
        // the cross-orientation clause is weakened to a tautology (the
        // product clause alone no longer pins the binary reduct)
        auto spec = MultiHypertournamentSpec({{"R2", 2}, {"R3", 3}}, "R2");
        p.eval = [spec](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            IdSet a = detail::closed(s, A);
            IdSet bOnly = set_minus(detail::closed(s, set_union(B, a)), a);
            IdSet cOnly = set_minus(detail::closed(s, set_union(C, a)), a);
            if (!set_disjoint(bOnly, cOnly)) return false;
            // the product clause, without the delta orientation requirement
            auto dsign = [&](ElemId u, ElemId v) -> int {
                if (s.has_tuple("R2", {u, v})) return 1;
                if (s.has_tuple("R2", {v, u})) return -1;
                throw StructureError("delta reduct not total on the window");
            };
            IdSet all = set_union(set_union(a, bOnly), cOnly);
            for (ElemId b : bOnly)
                for (ElemId c : cOnly)
                    for (ElemId x : all) {
                        IdSet subset = make_set({b, c, x});
                        if (subset.size() != 3) continue;
                        int prod = 1;
                        for (std::size_t i = 0; i < 3; ++i)
                            for (std::size_t j = i + 1; j < 3; ++j)
                                prod *= dsign(subset[i], subset[j]);
                        if ((prod == 1) != s.has_tuple("R3", subset)) return false;
                    }
            return true;
        };
    } else if (kind == "srho") {
        // case (ii) flipped: anchored-left pairs must disagree with the red row
        p.eval = [](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            IdSet a = detail::closed(s, A);
            IdSet bOnly = set_minus(detail::closed(s, set_union(B, a)), a);
            IdSet cOnly = set_minus(detail::closed(s, set_union(C, a)), a);
            if (!set_disjoint(bOnly, cOnly)) return false;
            int frho = s.signature().function_index("rho");
            auto anchored = [&](ElemId v) { return set_contains(a, s.function_value(frho, v)); };
            for (ElemId b : bOnly)
                for (ElemId c : cOnly) {
                    bool bin = anchored(b), cin = anchored(c);
                    if (!bin && !cin) {
                        if (!has_edge(s, b, c)) return false;
                    } else if (bin && !cin) {
                        if (orthogonal(s, b, c) ||
                            edge_dir(s, b, c) == edge_dir(s, s.function_value(frho, b), c))
                            return false;
                    } else if (!bin && cin) {
                        if (orthogonal(s, b, c) ||
                            edge_dir(s, b, c) != edge_dir(s, b, s.function_value(frho, c)))
                            return false;
                    }
                }
            return true;
        };
    } else if (kind == "free-amalgam" || kind == "labelled-partite") {
        // cross clause weakened to a tautology
        p.eval = [](const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
            IdSet a = detail::closed(s, A);
            IdSet bOnly = set_minus(detail::closed(s, set_union(B, a)), a);
            IdSet cOnly = set_minus(detail::closed(s, set_union(C, a)), a);
            return set_disjoint(bOnly, cOnly);
        };
    }
    return p;
}

/// Canonical amalgam operators matching the predicate catalogue. Each output
/// restricts to its inputs and satisfies eval(B-side, A, C-side).
inline AmalgamOperator make_operator(const std::string& kind) {
    AmalgamOperator op;
    op.kind = kind;
    if (kind == "multi-hypertournament-delta") {
        MultiHypertournamentSpec spec({{"R2", 2}, {"R3", 3}}, "R2");
        op.amalgamate = [spec](const FiniteStructure& A, const FiniteStructure& B, const FiniteStructure& C) {
            return canonical_amalgam_delta(spec, A, B, C);
        };
        return op;
    }
    if (kind == "srho") {
        op.amalgamate = [](const FiniteStructure& A, const FiniteStructure& B, const FiniteStructure& C) {
            return srho_canonical_amalgam(A, B, C);
        };
        return op;
    }
    // the remaining canonical amalgams are the class completions with the
    // B-side as the left factor
    ClassSpecPtr cls = make_predicate(kind).cls;
    op.amalgamate = [cls](const FiniteStructure& A, const FiniteStructure& B, const FiniteStructure& C) {
        return cls->amalgam(A, B, C);
    };
    return op;
}

}  // namespace fraisse
