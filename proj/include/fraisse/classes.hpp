#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fraisse/graphzoo.hpp"
#include "fraisse/hypertournament.hpp"
#include "fraisse/partite.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

/// A finite-structure class with the machinery a lazy limit needs:
/// membership, the one-point extension enumerator, and the completion rule
/// that turns a realized extension into a total class-valid structure.
class ClassSpec {
public:
    virtual ~ClassSpec() = default;

    virtual std::string name() const = 0;
    virtual Signature signature() const = 0;
    virtual bool member(const FiniteStructure& s, std::string* why = nullptr) const = 0;

    /// All class-valid one-point extension types over the (function-closed)
    /// base inside s. The new point is exterior.
    virtual std::vector<QfType> one_point_extensions(const FiniteStructure& s,
                                                     const IdSet& base) const = 0;

    /// Completes the fresh point x (already inserted, with relations to
    /// `base` only) against the rest of s. `x_left` fixes the orientation of
    /// the default/free choices: the new point acts as the left factor.
    virtual void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base,
                                    bool x_left) const = 0;

    /// Initial structure for limit building.
    virtual FiniteStructure bootstrap() const { return FiniteStructure(signature()); }

    /// Strong amalgam over A of structures agreeing on A, by adding the
    /// points of C \ A one at a time and completing each against B. For
    /// classes whose completion realizes a canonical (stationary) amalgam
    /// this is the canonical amalgam; for the others it is some class-valid
    /// strong amalgam.
    FiniteStructure amalgam(const FiniteStructure& A, const FiniteStructure& B,
                            const FiniteStructure& C) const {
        const IdSet& a = A.universe();
        if (set_intersect(B.universe(), C.universe()) != a)
            throw StructureError("B and C must intersect exactly in A");
        if (!B.induced(a).equals(A) || !C.induced(a).equals(A))
            throw StructureError("B and C disagree on A");
        FiniteStructure out = B;
        IdSet placed = a;
        for (ElemId c : set_minus(C.universe(), a)) {
            out.add_element(c);
            // relations of c to A and to earlier C-points, from C
            IdSet ctx = set_union(placed, {c});
            for (std::size_t r = 0; r < C.signature().relations().size(); ++r)
                for (const auto& t : C.tuples_within(static_cast<int>(r), ctx)) {
                    bool has_c = false;
                    for (ElemId v : t)
                        if (v == c) has_c = true;
                    if (has_c) out.add_tuple(static_cast<int>(r), t);
                }
            for (std::size_t f = 0; f < C.signature().functions().size(); ++f)
                out.set_function(static_cast<int>(f), c, C.function_value(static_cast<int>(f), c));
            complete_new_point(out, c, placed, /*x_left=*/false);
            placed = set_union(placed, {c});
        }
        return out;
    }
};

using ClassSpecPtr = std::shared_ptr<const ClassSpec>;

namespace detail {

/// Extension type from a scratch construction: the scratch holds base plus
/// the one new point x.
inline QfType extension_type(const FiniteStructure& scratch, ElemId x, const IdSet& base) {
    return qftp(scratch, {x}, base);
}

/// Enumerates 3-state edge patterns (out, in, none) of a new point against
/// base for oriented-graph signatures, filtered by `keep`.
template <typename Keep>
void oriented_patterns(const FiniteStructure& s, const IdSet& base, bool allow_bot, Keep&& keep) {
    std::vector<int> pattern(base.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == base.size()) {
            keep(pattern);
            return;
        }
        for (int v = 0; v < (allow_bot ? 3 : 2); ++v) {
            pattern[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
}

}  // namespace detail

// --------------------------------------------------------------------------
// Random graph (free amalgamation reference class)
// --------------------------------------------------------------------------

class RandomGraphClass final : public ClassSpec {
public:
    std::string name() const override { return "graph"; }
    Signature signature() const override { return Signature({{"E", 2}}); }

    bool member(const FiniteStructure& s, std::string* why) const override {
        for (const auto& t : s.tuples("E")) {
            if (t[0] == t[1]) {
                if (why) *why = "loop";
                return false;
            }
            if (!s.has_tuple("E", {t[1], t[0]})) {
                if (why) *why = "asymmetric edge";
                return false;
            }
        }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        std::vector<QfType> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << base.size()); ++mask) {
            FiniteStructure scratch = s.induced(base);
            ElemId x = scratch.fresh_id();
            scratch.add_element(x);
            for (std::size_t i = 0; i < base.size(); ++i)
                if ((mask >> i) & 1) {
                    scratch.add_tuple("E", {x, base[i]});
                    scratch.add_tuple("E", {base[i], x});
                }
            out.push_back(detail::extension_type(scratch, x, base));
        }
        return out;
    }

    void complete_new_point(FiniteStructure&, ElemId, const IdSet&, bool) const override {
        // free amalgam: no edges beyond the base
    }
};

// --------------------------------------------------------------------------
// n-hypertournaments (single relation)
// --------------------------------------------------------------------------

class TnClass final : public ClassSpec {
public:
    explicit TnClass(int n) : n_(n) {
        if (n < 2) throw StructureError("hypertournament arity must be >= 2");
    }

    std::string name() const override { return "t" + std::to_string(n_); }
    Signature signature() const override { return Signature({{"R", n_}}); }

    bool member(const FiniteStructure& s, std::string* why) const override {
        auto res = check_hypertournament(s, "R", n_);
        if (std::holds_alternative<HypertournamentViolation>(res)) {
            if (why) *why = std::get<HypertournamentViolation>(res).reason;
            return false;
        }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        std::vector<QfType> out;
        // one sign per (n-1)-subset of the base
        std::vector<Tuple> subsets;
        detail::for_each_subset(base, n_ - 1, [&](const Tuple& t) { subsets.push_back(t); });
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << subsets.size()); ++mask) {
            FiniteStructure scratch = s.induced(base);
            ElemId x = scratch.fresh_id();
            scratch.add_element(x);
            for (std::size_t i = 0; i < subsets.size(); ++i) {
                Tuple t = subsets[i];
                t.push_back(x);
                int sign = (mask >> i) & 1 ? 1 : -1;
                detail::for_each_permutation(t, [&](const Tuple& perm) {
                    auto [rep, psign] = ascending_rep(perm);
                    if (psign == sign) scratch.add_tuple("R", perm);
                });
            }
            out.push_back(detail::extension_type(scratch, x, base));
        }
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        if (others.empty()) return;
        if (n_ == 2) {
            // the canonical tournament amalgam: left factor beats right factor
            for (ElemId c : others)
                if (!s.has_tuple("R", {x, c}) && !s.has_tuple("R", {c, x}))
                    s.add_tuple("R", x_left ? Tuple{x, c} : Tuple{c, x});
            return;
        }
        // n >= 3: no canonical choice; free +1 completion on ascending
        // representatives of every subset that touches x and a point outside
        // the base
        IdSet pool = set_minus(s.universe(), {x});
        detail::for_each_subset(pool, n_ - 1, [&](const Tuple& rest) {
            bool outside = false;
            for (ElemId v : rest)
                if (set_contains(others, v)) outside = true;
            if (!outside) return;
            Tuple t = rest;
            t.push_back(x);
            auto [asc, sign0] = ascending_rep(t);
            Tuple swapped = asc;
            std::swap(swapped[0], swapped[1]);
            if (s.has_tuple("R", asc) || s.has_tuple("R", swapped)) return;  // already oriented
            detail::for_each_permutation(t, [&](const Tuple& perm) {
                auto [rep, psign] = ascending_rep(perm);
                if (psign == 1) s.add_tuple("R", perm);
            });
        });
    }

private:
    int n_;
};

// --------------------------------------------------------------------------
// Multi-hypertournaments with a distinguished binary relation
// --------------------------------------------------------------------------

class MultiTnClass final : public ClassSpec {
public:
    explicit MultiTnClass(MultiHypertournamentSpec spec) : spec_(std::move(spec)) {}

    std::string name() const override {
        std::string out = "t(";
        for (std::size_t i = 0; i < spec_.arities.size(); ++i)
            out += (i ? "," : "") + std::to_string(spec_.arities[i].second);
        return out + ")";
    }
    Signature signature() const override { return spec_.signature(); }
    const MultiHypertournamentSpec& spec() const { return spec_; }

    bool member(const FiniteStructure& s, std::string* why) const override {
        auto res = check_multi(s, spec_);
        if (std::holds_alternative<HypertournamentViolation>(res)) {
            if (why) *why = std::get<HypertournamentViolation>(res).reason;
            return false;
        }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        // per relation, one sign per (n_i - 1)-subset; combine componentwise
        struct Choice {
            std::string rel;
            Tuple subset;
        };
        std::vector<Choice> choices;
        for (auto& [rel, n] : spec_.arities)
            detail::for_each_subset(base, n - 1, [&](const Tuple& t) { choices.push_back({rel, t}); });
        std::vector<QfType> out;
        if (choices.size() > 20) throw StructureError("base too large for extension enumeration");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << choices.size()); ++mask) {
            FiniteStructure scratch = s.induced(base);
            ElemId x = scratch.fresh_id();
            scratch.add_element(x);
            for (std::size_t i = 0; i < choices.size(); ++i) {
                Tuple t = choices[i].subset;
                t.push_back(x);
                int sign = (mask >> i) & 1 ? 1 : -1;
                detail::for_each_permutation(t, [&](const Tuple& perm) {
                    auto [rep, psign] = ascending_rep(perm);
                    if (psign == sign) scratch.add_tuple(choices[i].rel, perm);
                });
            }
            out.push_back(detail::extension_type(scratch, x, base));
        }
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        if (others.empty()) return;
        if (!spec_.delta) {
            // no canonical choice: free +1 completion per relation
            for (auto& [rel, n] : spec_.arities) complete_free(s, rel, n, x, base, others);
            return;
        }
        const std::string& delta = *spec_.delta;
        int rd = s.signature().relation_index(delta);
        for (ElemId c : others)
            if (!s.has_tuple(rd, {x, c}) && !s.has_tuple(rd, {c, x}))
                s.add_tuple(rd, x_left ? Tuple{x, c} : Tuple{c, x});
        auto dsign = [&](ElemId u, ElemId v) -> int {
            if (s.has_tuple(rd, {u, v})) return 1;
            if (s.has_tuple(rd, {v, u})) return -1;
            throw StructureError("delta reduct not total during completion");
        };
        IdSet pool = set_minus(s.universe(), {x});
        for (auto& [rel, n] : spec_.arities) {
            if (rel == delta) continue;
            int r = s.signature().relation_index(rel);
            detail::for_each_subset(pool, n - 1, [&](const Tuple& rest) {
                bool outside = false;
                for (ElemId v : rest)
                    if (set_contains(others, v)) outside = true;
                if (!outside) return;
                Tuple t = rest;
                t.push_back(x);
                auto [asc, sign0] = ascending_rep(t);
                Tuple swapped = asc;
                std::swap(swapped[0], swapped[1]);
                if (s.has_tuple(r, asc) || s.has_tuple(r, swapped)) return;  // already oriented
                int prod = 1;
                for (std::size_t i = 0; i < t.size(); ++i)
                    for (std::size_t j = i + 1; j < t.size(); ++j) prod *= dsign(t[i], t[j]);
                detail::for_each_permutation(t, [&](const Tuple& perm) {
                    auto [rep, psign] = ascending_rep(perm);
                    if (psign == prod) s.add_tuple(r, perm);
                });
            });
        }
    }

private:
    static void complete_free(FiniteStructure& s, const std::string& rel, int n, ElemId x,
                              const IdSet& base, const IdSet& others) {
        IdSet pool = set_minus(s.universe(), {x});
        int r = s.signature().relation_index(rel);
        detail::for_each_subset(pool, n - 1, [&](const Tuple& rest) {
            bool outside = false;
            for (ElemId v : rest)
                if (set_contains(others, v)) outside = true;
            if (!outside) return;
            Tuple t = rest;
            t.push_back(x);
            detail::for_each_permutation(t, [&](const Tuple& perm) {
                auto [rep, psign] = ascending_rep(perm);
                if (psign == 1) s.add_tuple(r, perm);
            });
        });
        (void)base;
    }

    MultiHypertournamentSpec spec_;
};

// --------------------------------------------------------------------------
// n-coloured dense linear orders
// --------------------------------------------------------------------------

class QnClass final : public ClassSpec {
public:
    explicit QnClass(int n) : n_(n) {
        if (n < 1) throw StructureError("colour count must be >= 1");
    }

    std::string name() const override { return "q" + std::to_string(n_); }
    Signature signature() const override { return coloured_order_signature(n_); }

    bool member(const FiniteStructure& s, std::string* why) const override {
        const IdSet& u = s.universe();
        for (ElemId v : u) {
            int found = -1;
            for (int i = 0; i < n_; ++i)
                if (s.has_tuple("chi" + std::to_string(i), {v})) {
                    if (found != -1) {
                        if (why) *why = "two colours";
                        return false;
                    }
                    found = i;
                }
            if (found == -1) {
                if (why) *why = "missing colour";
                return false;
            }
            if (s.has_tuple("<", {v, v})) {
                if (why) *why = "reflexive order";
                return false;
            }
        }
        for (ElemId a : u)
            for (ElemId b : u) {
                if (a == b) continue;
                bool ab = s.has_tuple("<", {a, b}), ba = s.has_tuple("<", {b, a});
                if (ab == ba) {
                    if (why) *why = "order not total/antisymmetric";
                    return false;
                }
                for (ElemId c : u)
                    if (ab && s.has_tuple("<", {b, c}) && !s.has_tuple("<", {a, c})) {
                        if (why) *why = "order not transitive";
                        return false;
                    }
            }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        // positions: one per gap in the base order; colours: all n
        std::vector<ElemId> sorted(base.begin(), base.end());
        std::sort(sorted.begin(), sorted.end(), [&](ElemId a, ElemId b) { return s.has_tuple("<", {a, b}); });
        std::vector<QfType> out;
        for (std::size_t gap = 0; gap <= sorted.size(); ++gap)
            for (int colour = 0; colour < n_; ++colour) {
                FiniteStructure scratch = s.induced(base);
                ElemId x = scratch.fresh_id();
                scratch.add_element(x);
                scratch.add_tuple("chi" + std::to_string(colour), {x});
                for (std::size_t i = 0; i < sorted.size(); ++i) {
                    if (i < gap) scratch.add_tuple("<", {sorted[i], x});
                    else scratch.add_tuple("<", {x, sorted[i]});
                }
                out.push_back(detail::extension_type(scratch, x, base));
            }
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        // canonical order merge: a separator among the already-decided
        // comparisons forces the answer, otherwise the left factor precedes
        // the right one
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        for (ElemId c : others) {
            if (s.has_tuple("<", {x, c}) || s.has_tuple("<", {c, x})) continue;  // pinned
            bool forced_lt = false, forced_gt = false;
            for (ElemId a : s.universe()) {
                if (a == x || a == c) continue;
                if (s.has_tuple("<", {x, a}) && s.has_tuple("<", {a, c})) forced_lt = true;
                if (s.has_tuple("<", {c, a}) && s.has_tuple("<", {a, x})) forced_gt = true;
            }
            if (forced_lt && forced_gt) throw StructureError("inconsistent order data");
            if (forced_lt) s.add_tuple("<", {x, c});
            else if (forced_gt) s.add_tuple("<", {c, x});
            else s.add_tuple("<", x_left ? Tuple{x, c} : Tuple{c, x});
        }
    }

private:
    int n_;
};

// --------------------------------------------------------------------------
// Semigeneric tournaments, optionally with rho / rho+sigma expansions
// --------------------------------------------------------------------------

class SemigenericClass : public ClassSpec {
public:
    enum class Expansion { None, Rho, RhoSigma };

    explicit SemigenericClass(Expansion exp = Expansion::None) : exp_(exp) {}

    std::string name() const override {
        switch (exp_) {
            case Expansion::None: return "semigeneric";
            case Expansion::Rho: return "srho";
            default: return "srhosigma";
        }
    }
    Signature signature() const override {
        switch (exp_) {
            case Expansion::None: return oriented_graph_signature();
            case Expansion::Rho: return srho_signature();
            default: return srhosigma_signature();
        }
    }

    bool member(const FiniteStructure& s, std::string* why) const override {
        auto res = exp_ == Expansion::None ? check_semigeneric(s) : check_srho(s);
        if (std::holds_alternative<PartiteViolation>(res)) {
            if (why) *why = std::get<PartiteViolation>(res).reason;
            return false;
        }
        return true;
    }

    FiniteStructure bootstrap() const override {
        FiniteStructure s(signature());
        if (exp_ == Expansion::RhoSigma) {
            // the smallest structure: one part with a red and a blue point
            s.add_element(0);
            s.add_element(1);
            s.set_function("rho", 0, 0);
            s.set_function("rho", 1, 0);
            s.set_function("sigma", 0, 1);
            s.set_function("sigma", 1, 1);
        }
        return s;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base_in) const override {
        IdSet base = s.function_closure(base_in);
        FiniteStructure window = s.induced(base);
        std::vector<QfType> out;
        std::vector<std::string> seen;
        detail::oriented_patterns(window, base, /*allow_bot=*/true, [&](const std::vector<int>& pattern) {
            FiniteStructure scratch = window;
            ElemId x = scratch.fresh_id();
            scratch.add_element(x);
            IdSet bots;
            for (std::size_t i = 0; i < base.size(); ++i) {
                if (pattern[i] == 1) scratch.add_tuple(kEdgeRel, {x, base[i]});
                else if (pattern[i] == 2) scratch.add_tuple(kEdgeRel, {base[i], x});
                else bots.push_back(base[i]);
            }
            if (exp_ != Expansion::None) {
                int frho = scratch.signature().function_index("rho");
                if (bots.empty()) {
                    if (exp_ == Expansion::RhoSigma) return;  // a new part needs red and blue at once
                    scratch.set_function(frho, x, x);
                } else {
                    scratch.set_function(frho, x, scratch.function_value(frho, bots[0]));
                    if (exp_ == Expansion::RhoSigma) {
                        int fsig = scratch.signature().function_index("sigma");
                        scratch.set_function(fsig, x, scratch.function_value(fsig, bots[0]));
                    }
                }
            }
            std::string why;
            if (!member(scratch, &why)) return;
            auto t = detail::extension_type(scratch, x, base);
            auto key = t.full_key();
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                out.push_back(std::move(t));
            }
        });
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        if (exp_ == Expansion::Rho) {
            complete_srho_canonical(s, x, base, x_left);
            return;
        }
        complete_class_rule(s, x, base, x_left);
    }

private:
    /// Canonical S_rho completion: the case rule of the expansion.
    static void complete_srho_canonical(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) {
        int frho = s.signature().function_index("rho");
        int r = s.signature().relation_index(kEdgeRel);
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        auto anchored = [&](ElemId v) { return set_contains(base, s.function_value(frho, v)); };
        for (ElemId c : others) {
            if (has_edge(s, x, c) || has_edge(s, c, x)) continue;  // pinned
            ElemId rx = s.function_value(frho, x), rc = s.function_value(frho, c);
            if (rx == rc) continue;  // same part: orthogonal
            bool xin = anchored(x), cin = anchored(c);
            if (!xin && !cin) {
                s.add_tuple(r, x_left ? Tuple{x, c} : Tuple{c, x});
            } else if (xin && !cin) {
                int d = edge_dir(s, rx, c);
                s.add_tuple(r, d ? Tuple{x, c} : Tuple{c, x});
            } else if (!xin && cin) {
                int d = edge_dir(s, x, rc);
                s.add_tuple(r, d ? Tuple{x, c} : Tuple{c, x});
            } else {
                int d = (edge_dir(s, x, rc) + edge_dir(s, rx, c) + edge_dir(s, rx, rc)) % 2;
                s.add_tuple(r, d ? Tuple{x, c} : Tuple{c, x});
            }
        }
    }

    /// Class completion by the three-case strong amalgamation rule, with the
    /// growing known set tracked through part representatives.
    static void complete_class_rule(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) {
        int r = s.signature().relation_index(kEdgeRel);
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        if (others.empty()) return;
        // parts of the old structure (everything except x)
        IdSet old = set_minus(s.universe(), {x});
        auto res = check_partite(s.induced(old));
        if (std::holds_alternative<PartiteViolation>(res))
            throw StructureError("completion host is not partite: " + std::get<PartiteViolation>(res).reason);
        auto pt = std::get<PartiteTournament>(res);
        // x's part: the part of a base point orthogonal to x, if any
        int x_part = -1;
        for (ElemId a : base)
            if (orthogonal(s, x, a)) x_part = static_cast<int>(pt.part_of.at(a));
        // known representative per part (from the base initially)
        std::vector<ElemId> rep(pt.parts.size(), static_cast<ElemId>(-1));
        auto known_rep = [&](std::size_t p) -> std::optional<ElemId> {
            if (rep[p] != static_cast<ElemId>(-1)) return rep[p];
            return std::nullopt;
        };
        for (ElemId a : base) {
            auto p = pt.part_of.at(a);
            if (rep[p] == static_cast<ElemId>(-1)) rep[p] = a;
        }
        for (ElemId c : others) {
            std::size_t cp = pt.part_of.at(c);
            if (has_edge(s, x, c) || has_edge(s, c, x)) {
                if (rep[cp] == static_cast<ElemId>(-1)) rep[cp] = c;
                continue;  // pinned
            }
            if (x_part >= 0 && cp == static_cast<std::size_t>(x_part)) {
                // common orthogonality witness: same part, no edge
            } else if (x_part >= 0 && known_rep(static_cast<std::size_t>(x_part)) && known_rep(cp)) {
                ElemId u = *known_rep(static_cast<std::size_t>(x_part));
                ElemId w = *known_rep(cp);
                int d = (edge_dir(s, u, w) + edge_dir(s, u, c) + edge_dir(s, x, w)) % 2;
                s.add_tuple(r, d ? Tuple{x, c} : Tuple{c, x});
            } else {
                s.add_tuple(r, x_left ? Tuple{x, c} : Tuple{c, x});
            }
            if (rep[cp] == static_cast<ElemId>(-1)) rep[cp] = c;
        }
    }

    Expansion exp_;
};

// --------------------------------------------------------------------------
// Labelled n-partite tournaments
// --------------------------------------------------------------------------

class DnClass final : public ClassSpec {
public:
    explicit DnClass(int n) : n_(n) {
        if (n < 2) throw StructureError("label count must be >= 2");
    }

    std::string name() const override { return "d" + std::to_string(n_); }
    Signature signature() const override { return labelled_partite_signature(n_); }

    bool member(const FiniteStructure& s, std::string* why) const override {
        auto res = check_dn(s, n_);
        if (std::holds_alternative<PartiteViolation>(res)) {
            if (why) *why = std::get<PartiteViolation>(res).reason;
            return false;
        }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        std::vector<QfType> out;
        FiniteStructure window = s.induced(base);
        auto colour_of = [&](ElemId v) {
            for (int i = 0; i < n_; ++i)
                if (window.has_tuple("chi" + std::to_string(i), {v})) return i;
            throw StructureError("uncoloured element");
        };
        for (int colour = 0; colour < n_; ++colour) {
            // edges to same-colour base points are forbidden; to others free
            IdSet cross;
            for (ElemId v : base)
                if (colour_of(v) != colour) cross.push_back(v);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cross.size()); ++mask) {
                FiniteStructure scratch = window;
                ElemId x = scratch.fresh_id();
                scratch.add_element(x);
                scratch.add_tuple("chi" + std::to_string(colour), {x});
                for (std::size_t i = 0; i < cross.size(); ++i)
                    scratch.add_tuple(kEdgeRel, (mask >> i) & 1 ? Tuple{x, cross[i]} : Tuple{cross[i], x});
                out.push_back(detail::extension_type(scratch, x, base));
            }
        }
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        auto colour_of = [&](ElemId v) {
            for (int i = 0; i < n_; ++i)
                if (s.has_tuple("chi" + std::to_string(i), {v})) return i;
            throw StructureError("uncoloured element");
        };
        int cx = colour_of(x);
        for (ElemId c : set_minus(s.universe(), set_union(base, {x}))) {
            if (colour_of(c) == cx) continue;  // same part
            if (!has_edge(s, x, c) && !has_edge(s, c, x))
                s.add_tuple(kEdgeRel, x_left ? Tuple{x, c} : Tuple{c, x});
        }
    }

private:
    int n_;
};

// --------------------------------------------------------------------------
// The omega-partite C4-tournament class
// --------------------------------------------------------------------------

class FClass final : public ClassSpec {
public:
    std::string name() const override { return "f"; }
    Signature signature() const override { return oriented_graph_signature(); }

    bool member(const FiniteStructure& s, std::string* why) const override {
        auto res = check_f_class(s);
        if (std::holds_alternative<PartiteViolation>(res)) {
            if (why) *why = std::get<PartiteViolation>(res).reason;
            return false;
        }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        std::vector<QfType> out;
        std::vector<std::string> seen;
        FiniteStructure window = s.induced(base);
        detail::oriented_patterns(window, base, /*allow_bot=*/true, [&](const std::vector<int>& pattern) {
            FiniteStructure scratch = window;
            ElemId x = scratch.fresh_id();
            scratch.add_element(x);
            for (std::size_t i = 0; i < base.size(); ++i) {
                if (pattern[i] == 1) scratch.add_tuple(kEdgeRel, {x, base[i]});
                else if (pattern[i] == 2) scratch.add_tuple(kEdgeRel, {base[i], x});
            }
            std::string why;
            if (!member(scratch, &why)) return;
            auto t = detail::extension_type(scratch, x, base);
            auto key = t.full_key();
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                out.push_back(std::move(t));
            }
        });
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        int r = s.signature().relation_index(kEdgeRel);
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        // partner of x within the base, if any
        std::optional<ElemId> x_partner;
        for (ElemId a : base)
            if (orthogonal(s, x, a)) x_partner = a;
        for (ElemId c : others) {
            if (has_edge(s, x, c) || has_edge(s, c, x)) continue;  // pinned
            // partner of c among points whose edge to x is known
            std::optional<int> forced;
            for (ElemId w : s.universe()) {
                if (w == c || w == x) continue;
                if (!orthogonal(s, w, c)) continue;
                if (has_edge(s, x, w)) forced = 0;       // x -> w, so c -> x ... x <- c
                else if (has_edge(s, w, x)) forced = 1;  // w -> x, so x ... alternation
            }
            int d;
            if (forced) {
                // u -> v iff u <- v' with v bot v': d(x,c) = 1 - d(x,partner(c))
                d = *forced;
            } else if (x_partner && (has_edge(s, *x_partner, c) || has_edge(s, c, *x_partner))) {
                d = 1 - edge_dir(s, *x_partner, c);
            } else {
                d = x_left ? 1 : 0;
            }
            s.add_tuple(r, d ? Tuple{x, c} : Tuple{c, x});
        }
    }
};

// --------------------------------------------------------------------------
// H4-free 3-hypertournaments
// --------------------------------------------------------------------------

class WClass final : public ClassSpec {
public:
    std::string name() const override { return "w"; }
    Signature signature() const override { return Signature({{"R", 3}}); }

    bool member(const FiniteStructure& s, std::string* why) const override {
        auto res = check_hypertournament(s, "R", 3);
        if (std::holds_alternative<HypertournamentViolation>(res)) {
            if (why) *why = std::get<HypertournamentViolation>(res).reason;
            return false;
        }
        if (check_h4_free(s).has_value()) {
            if (why) *why = "contains a copy of the 4-point obstruction";
            return false;
        }
        return true;
    }

    std::vector<QfType> one_point_extensions(const FiniteStructure& s, const IdSet& base) const override {
        std::vector<QfType> out;
        std::vector<Tuple> subsets;
        detail::for_each_subset(base, 2, [&](const Tuple& t) { subsets.push_back(t); });
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << subsets.size()); ++mask) {
            FiniteStructure scratch = s.induced(base);
            ElemId x = scratch.fresh_id();
            scratch.add_element(x);
            for (std::size_t i = 0; i < subsets.size(); ++i) {
                Tuple t = subsets[i];
                t.push_back(x);
                int sign = (mask >> i) & 1 ? 1 : -1;
                detail::for_each_permutation(t, [&](const Tuple& perm) {
                    auto [rep, psign] = ascending_rep(perm);
                    if (psign == sign) scratch.add_tuple("R", perm);
                });
            }
            if (!check_h4_free(scratch).has_value())
                out.push_back(detail::extension_type(scratch, x, base));
        }
        return out;
    }

    void complete_new_point(FiniteStructure& s, ElemId x, const IdSet& base, bool x_left) const override {
        // amalgamation rule: for the new cross pair {x, c}, add the triples
        // (a, x, c) for every a already known, one old point at a time
        IdSet known = base;
        IdSet others = set_minus(s.universe(), set_union(base, {x}));
        for (ElemId c : others) {
            for (ElemId a : known) {
                Tuple t = x_left ? Tuple{a, x, c} : Tuple{a, c, x};
                detail::for_each_permutation(t, [&](const Tuple& perm) {
                    auto [rep, psign] = ascending_rep(perm);
                    auto [rep2, psign2] = ascending_rep(t);
                    if (psign == psign2) s.add_tuple("R", perm);
                });
            }
            known = set_union(known, {c});
        }
    }
};

// --------------------------------------------------------------------------
// Factory
// --------------------------------------------------------------------------

inline ClassSpecPtr make_class(const std::string& kind) {
    if (kind == "graph") return std::make_shared<RandomGraphClass>();
    if (kind == "t2" || kind == "tournament") return std::make_shared<TnClass>(2);
    if (kind == "t3") return std::make_shared<TnClass>(3);
    if (kind == "t4") return std::make_shared<TnClass>(4);
    if (kind == "t23")
        return std::make_shared<MultiTnClass>(MultiHypertournamentSpec({{"R2", 2}, {"R3", 3}}, "R2"));
    if (kind == "q1") return std::make_shared<QnClass>(1);
    if (kind == "q2") return std::make_shared<QnClass>(2);
    if (kind == "q3") return std::make_shared<QnClass>(3);
    if (kind == "semigeneric") return std::make_shared<SemigenericClass>(SemigenericClass::Expansion::None);
    if (kind == "srho") return std::make_shared<SemigenericClass>(SemigenericClass::Expansion::Rho);
    if (kind == "srhosigma")
        return std::make_shared<SemigenericClass>(SemigenericClass::Expansion::RhoSigma);
    if (kind == "d2") return std::make_shared<DnClass>(2);
    if (kind == "d3") return std::make_shared<DnClass>(3);
    if (kind == "d4") return std::make_shared<DnClass>(4);
    if (kind == "f") return std::make_shared<FClass>();
    if (kind == "w") return std::make_shared<WClass>();
    throw StructureError("unknown class kind: " + kind);
}

}  // namespace fraisse
