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

/// Sign of a permutation of {0..n-1}, given as the image sequence.
inline int perm_sign(const std::vector<int>& sigma) {
    std::vector<bool> seen(sigma.size(), false);
    for (int v : sigma) {
        if (v < 0 || v >= static_cast<int>(sigma.size()) || seen[static_cast<std::size_t>(v)])
            throw StructureError("malformed permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
    int inversions = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

/// Sorts a copy of the tuple ascending and returns (sorted tuple, sign of the
/// sorting permutation). Entries must be distinct.
inline std::pair<Tuple, int> ascending_rep(const Tuple& t) {
    Tuple s = t;
    int sign = 1;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (s[i] == s[j]) throw StructureError("tuple has repeated entries");
            if (s[i] > s[j]) {
                std::swap(s[i], s[j]);
                sign = -sign;
            }
        }
    return {s, sign};
}

/// Alternating {+1,-1}-valued map on distinct tuples. Values are stored on
/// ascending-identifier representatives only; queries on arbitrary orderings
/// multiply by the sign of the sorting permutation, so the alternation
/// identity holds by construction.
class SignMap {
public:
    explicit SignMap(int arity = 2) : arity_(arity) {
        if (arity < 2) throw StructureError("sign map arity must be >= 2");
    }

    int arity() const { return arity_; }

    void set(const Tuple& t, int value) {
        if (value != 1 && value != -1) throw StructureError("sign must be +1 or -1");
        auto [rep, sign] = ascending_rep(t);
        values_[rep] = value * sign;
    }

    int value(const Tuple& t) const {
        auto [rep, sign] = ascending_rep(t);
        auto it = values_.find(rep);
        if (it == values_.end()) throw StructureError("sign map undefined on tuple");
        return it->second * sign;
    }

    bool defined(const Tuple& t) const {
        auto [rep, sign] = ascending_rep(t);
        (void)sign;
        return values_.count(rep) > 0;
    }

    const std::map<Tuple, int>& representatives() const { return values_; }

private:
    int arity_;
    std::map<Tuple, int> values_;  // ascending representatives
};

/// Specification of an n_I-hypertournament: arities per index, optionally a
/// distinguished binary index delta.
struct MultiHypertournamentSpec {
    std::vector<std::pair<std::string, int>> arities;  // (relation name, n_i)
    std::optional<std::string> delta;

    MultiHypertournamentSpec() = default;
    MultiHypertournamentSpec(std::vector<std::pair<std::string, int>> as, std::optional<std::string> d = {})
        : arities(std::move(as)), delta(std::move(d)) {
        for (auto& [name, n] : arities)
            if (n < 2) throw StructureError("hypertournament arity must be >= 2");
        if (delta) {
            bool ok = false;
            for (auto& [name, n] : arities)
                if (name == *delta) ok = (n == 2);
            if (!ok) throw StructureError("delta must name a binary relation of the spec");
        }
    }

    Signature signature() const {
        std::vector<RelationSymbol> rels;
        for (auto& [name, n] : arities) rels.push_back({name, n});
        return Signature(rels);
    }
};

struct HypertournamentViolation {
    IdSet offending_subset;
    std::string reason;
};

template <typename T>
using CheckResult = std::variant<T, HypertournamentViolation>;

namespace detail {

template <typename F>
void for_each_subset(const IdSet& universe, int k, F&& fn) {
    Tuple cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(cur.size()) == k) {
            fn(cur);
            return;
        }
        for (std::size_t i = start; i < universe.size(); ++i) {
            cur.push_back(universe[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

template <typename F>
void for_each_permutation(Tuple base, F&& fn) {
    std::sort(base.begin(), base.end());
    do {
        fn(base);
    } while (std::next_permutation(base.begin(), base.end()));
}

}  // namespace detail

/// Verifies that the named relation of `s` is an n-hypertournament relation:
/// on every n-subset the relation holds on exactly one Alt_n-orbit of
/// orderings. Returns the sign map, or the first offending subset.
inline CheckResult<SignMap> check_hypertournament(const FiniteStructure& s, const std::string& rel, int n) {
    int r = s.signature().relation_index(rel);
    if (s.signature().relations()[static_cast<std::size_t>(r)].arity != n)
        throw StructureError("relation arity does not match n");
    for (const auto& t : s.tuples(r)) {
        IdSet st = make_set(t);
        if (static_cast<int>(st.size()) != n)
            throw StructureError("relation contains tuples with repeated entries");
    }
    SignMap sm(n);
    std::optional<HypertournamentViolation> bad;
    detail::for_each_subset(s.universe(), n, [&](const Tuple& subset) {
        if (bad) return;
        // The ascending ordering has a definite sign; every other ordering
        // must hold exactly when its permutation parity matches.
        bool asc_in = s.has_tuple(r, subset);
        bool ok = true;
        detail::for_each_permutation(subset, [&](const Tuple& perm) {
            if (!ok) return;
            auto [rep, sign] = ascending_rep(perm);
            bool expect = (sign > 0) == asc_in;
            if (s.has_tuple(r, perm) != expect) ok = false;
        });
        if (!ok) {
            bad = HypertournamentViolation{make_set(subset), "orientations on subset are not one Alt_n-orbit"};
            return;
        }
        sm.set(subset, asc_in ? 1 : -1);
    });
    if (bad) return *bad;
    return sm;
}

/// Builds the n-hypertournament on `universe` whose sign map is the
/// alternating extension of `f` (f is evaluated on ascending tuples).
inline FiniteStructure hypertournament_from_sign_fn(const IdSet& universe, int n,
                                                    const std::function<int(const Tuple&)>& f,
                                                    const std::string& rel = "R") {
    FiniteStructure s(Signature({{rel, n}}));
    for (ElemId v : universe) s.add_element(v);
    detail::for_each_subset(s.universe(), n, [&](const Tuple& subset) {
        int sign = f(subset);
        if (sign != 1 && sign != -1) throw StructureError("sign function must return +1 or -1");
        detail::for_each_permutation(subset, [&](const Tuple& perm) {
            auto [rep, psign] = ascending_rep(perm);
            if (psign == sign) s.add_tuple(rel, perm);
        });
    });
    return s;
}

/// Componentwise hypertournament check for a multi spec.
inline CheckResult<std::map<std::string, SignMap>> check_multi(const FiniteStructure& s,
                                                               const MultiHypertournamentSpec& spec) {
    std::map<std::string, SignMap> out;
    for (auto& [name, n] : spec.arities) {
        auto res = check_hypertournament(s, name, n);
        if (std::holds_alternative<HypertournamentViolation>(res)) {
            auto v = std::get<HypertournamentViolation>(res);
            v.reason = name + ": " + v.reason;
            return v;
        }
        out.emplace(name, std::get<SignMap>(res));
    }
    return out;
}

/// The canonical strong amalgam for n_I-hypertournaments with a distinguished
/// binary index delta: new cross pairs get delta-sign +1 (left-to-right), and
/// every mixed tuple's i-sign is the product of its pairwise delta-signs.
/// Tuples lying entirely within B or within C are never recomputed.
inline FiniteStructure canonical_amalgam_delta(const MultiHypertournamentSpec& spec,
                                               const FiniteStructure& A, const FiniteStructure& B,
                                               const FiniteStructure& C) {
    if (!spec.delta) throw StructureError("spec has no distinguished delta index");
    const std::string& delta = *spec.delta;
    Signature sig = spec.signature();
    if (B.signature() != sig || C.signature() != sig) throw StructureError("signature mismatch");
    const IdSet& a = A.universe();
    if (set_intersect(B.universe(), C.universe()) != a)
        throw StructureError("B and C must intersect exactly in A");
    if (!B.induced(a).equals(C.induced(a)) || !B.induced(a).equals(A))
        throw StructureError("B and C disagree on A");

    IdSet bOnly = set_minus(B.universe(), a);
    IdSet cOnly = set_minus(C.universe(), a);

    FiniteStructure out(sig);
    for (ElemId v : set_union(B.universe(), C.universe())) out.add_element(v);
    for (auto& [name, n] : spec.arities) {
        int r = sig.relation_index(name);
        for (const auto& t : B.tuples(r)) out.add_tuple(r, t);
        for (const auto& t : C.tuples(r)) out.add_tuple(r, t);
    }
    // delta on new cross pairs: b -> c, i.e. sign +1 on (b, c)
    int rd = sig.relation_index(delta);
    for (ElemId b : bOnly)
        for (ElemId c : cOnly) out.add_tuple(rd, {b, c});

    auto delta_sign = [&](ElemId u, ElemId v) -> int {
        if (out.has_tuple(rd, {u, v})) return 1;
        if (out.has_tuple(rd, {v, u})) return -1;
        throw StructureError("delta reduct not total");
    };

    for (auto& [name, n] : spec.arities) {
        int r = sig.relation_index(name);
        if (n == 2 && name == delta) continue;
        detail::for_each_subset(out.universe(), n, [&](const Tuple& subset) {
            bool hitsB = false, hitsC = false;
            for (ElemId v : subset) {
                if (set_contains(bOnly, v)) hitsB = true;
                if (set_contains(cOnly, v)) hitsC = true;
            }
            if (!hitsB || !hitsC) return;  // lives inside B or inside C
            int prod = 1;
            for (std::size_t i = 0; i < subset.size(); ++i)
                for (std::size_t j = i + 1; j < subset.size(); ++j)
                    prod *= delta_sign(subset[i], subset[j]);
            detail::for_each_permutation(subset, [&](const Tuple& perm) {
                auto [rep, psign] = ascending_rep(perm);
                if (psign == prod) out.add_tuple(r, perm);
            });
        });
    }
    return out;
}

/// Stabiliser construction: given an n-hypertournament and a tuple A of n-2
/// points, produce the structure on universe \ A whose relation R_u (one per
/// subset A' of A, with the caller-supplied or ascending ordering u of A')
/// holds on v exactly when (u, v) holds in the original relation.
inline FiniteStructure stabiliser_reduct(const FiniteStructure& s, const std::string& rel, int n,
                                         const Tuple& A,
                                         const std::map<IdSet, Tuple>* orderings = nullptr) {
    if (static_cast<int>(A.size()) != n - 2) throw StructureError("|A| must be n-2");
    int r0 = s.signature().relation_index(rel);
    for (ElemId v : A) s.require_element(v);
    IdSet aset = make_set(A);
    if (aset.size() != A.size()) throw StructureError("A must consist of distinct points");

    // enumerate subsets of A with their chosen orderings
    std::vector<Tuple> reps;
    detail::for_each_subset(aset, 0, [&](const Tuple& t) { reps.push_back(t); });
    for (int k = 1; k <= static_cast<int>(aset.size()); ++k)
        detail::for_each_subset(aset, k, [&](const Tuple& t) {
            Tuple u = t;
            if (orderings) {
                auto it = orderings->find(make_set(t));
                if (it != orderings->end()) u = it->second;
            }
            reps.push_back(u);
        });

    std::vector<RelationSymbol> rels;
    for (const auto& u : reps) {
        std::string name = "R[";
        for (std::size_t i = 0; i < u.size(); ++i) name += (i ? "," : "") + std::to_string(u[i]);
        name += "]";
        rels.push_back({name, n - static_cast<int>(u.size())});
    }
    FiniteStructure out((Signature(rels)));
    for (ElemId v : set_minus(s.universe(), aset)) out.add_element(v);

    for (std::size_t ri = 0; ri < reps.size(); ++ri) {
        const Tuple& u = reps[ri];
        int m = n - static_cast<int>(u.size());
        std::function<void(Tuple&)> rec_assign = [&](Tuple& v) {
            if (static_cast<int>(v.size()) == m) {
                Tuple uv = u;
                uv.insert(uv.end(), v.begin(), v.end());
                if (s.has_tuple(r0, uv)) out.add_tuple(static_cast<int>(ri), v);
                return;
            }
            for (ElemId w : out.universe()) {
                bool dup = false;
                for (ElemId x : v)
                    if (x == w) dup = true;
                if (dup) continue;
                v.push_back(w);
                rec_assign(v);
                v.pop_back();
            }
        };
        Tuple v;
        rec_assign(v);
    }
    return out;
}

/// The 4-point 3-hypertournament H4: anticlockwise faces (v0,v1,v3),
/// (v1,v2,v3), (v2,v0,v3), (v0,v2,v1) and their cyclic permutations.
inline FiniteStructure h4_structure() {
    FiniteStructure s(Signature({{"R", 3}}));
    for (ElemId v = 0; v < 4; ++v) s.add_element(v);
    const Tuple faces[4] = {{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {0, 2, 1}};
    for (const auto& f : faces) {
        s.add_tuple("R", {f[0], f[1], f[2]});
        s.add_tuple("R", {f[1], f[2], f[0]});
        s.add_tuple("R", {f[2], f[0], f[1]});
    }
    return s;
}

/// H4-freeness: ok (nullopt) iff H4 does not embed; otherwise one embedding.
inline std::optional<PartialIso> check_h4_free(const FiniteStructure& s) {
    static const FiniteStructure h4 = h4_structure();
    auto found = enumerate_embeddings(h4, s, 1);
    if (found.empty()) return std::nullopt;
    return found.front();
}

}  // namespace fraisse
