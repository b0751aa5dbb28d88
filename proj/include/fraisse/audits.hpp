#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/independence.hpp"
#include "fraisse/limits.hpp"

namespace fraisse {

/// One reported axiom: pass/fail with instance count and (for failures) a
/// re-checkable counterexample over concrete element sets.
struct AxiomResult {
    std::string axiom;
    int instances = 0;
    bool vacuous = false;
    bool failed = false;
    std::vector<IdSet> certificate;  // the sets involved; meaning depends on the axiom
    std::string note;
};

struct AuditReport {
    std::string predicate;
    std::uint64_t seed = 0;
    std::size_t window_points = 0;
    int max_a = 0, max_b = 0, max_c = 0;
    int instance_floor = 50;
    std::vector<AxiomResult> axioms;

    bool pass() const {
        for (const auto& a : axioms)
            if (a.failed || a.vacuous) return false;
        return !axioms.empty();
    }
    const AxiomResult* find(const std::string& name) const {
        for (const auto& a : axioms)
            if (a.axiom == name) return &a;
        return nullptr;
    }
    bool any_of_failed(const std::vector<std::string>& names) const {
        for (const auto& n : names) {
            const auto* a = find(n);
            if (a && a->failed) return true;
        }
        return false;
    }
};

namespace detail {

/// The seeded audit window: a point sample, candidate bases A, and per base
/// the candidate side sets (function-closed, inside the window).
struct AuditWindow {
    IdSet points;
    std::vector<IdSet> bases;
    std::vector<std::vector<IdSet>> sides;       // per base: B \ A candidates
    std::vector<std::vector<std::uint32_t>> side_masks;
    std::map<ElemId, int> point_index;

    std::uint32_t mask_of(const IdSet& xs) const {
        std::uint32_t m = 0;
        for (ElemId v : xs) m |= 1u << point_index.at(v);
        return m;
    }
};

inline AuditWindow make_audit_window(const LazyLimit& limit, std::uint64_t seed, std::size_t size,
                                     int max_a, int max_side) {
    AuditWindow w;
    const IdSet& u = limit.current().universe();
    SplitMix64 rng(seed ^ 0xa5a5a5a5ULL);
    if (u.size() <= size) {
        w.points = u;
    } else {
        IdSet sample;
        while (sample.size() < size) {
            ElemId v = u[rng.below(u.size())];
            if (!set_contains(sample, v)) sample = set_union(sample, {v});
        }
        // widen to a function-closed window so side sets close inside it
        w.points = limit.current().function_closure(sample);
    }
    if (w.points.size() > 28) throw StructureError("audit window too large for mask encoding");
    for (std::size_t i = 0; i < w.points.size(); ++i) w.point_index[w.points[i]] = static_cast<int>(i);

    for (int k = 0; k <= max_a; ++k)
        for_each_subset(w.points, k, [&](const Tuple& t) {
            IdSet closed = limit.current().function_closure(make_set(t));
            if (set_subset(closed, w.points)) w.bases.push_back(closed);
        });
    w.sides.resize(w.bases.size());
    w.side_masks.resize(w.bases.size());
    for (std::size_t bi = 0; bi < w.bases.size(); ++bi) {
        const IdSet& A = w.bases[bi];
        IdSet rest = set_minus(w.points, A);
        for (int k = 1; k <= max_side; ++k)
            for_each_subset(rest, k, [&](const Tuple& t) {
                IdSet closed = limit.current().function_closure(make_set(t));
                IdSet side = set_minus(closed, A);
                if (!set_subset(side, rest)) return;
                if (static_cast<int>(side.size()) > max_side) return;
                for (const auto& existing : w.sides[bi])
                    if (existing == side) return;
                w.sides[bi].push_back(side);
                w.side_masks[bi].push_back(w.mask_of(side));
            });
    }
    return w;
}

/// The joint type key of a triple (A, B, C): the canonical code of the
/// induced structure decorated by side membership.
inline std::string triple_code(const FiniteStructure& s, const IdSet& A, const IdSet& B, const IdSet& C) {
    IdSet all = set_union(set_union(A, B), C);
    std::vector<RelationSymbol> rels = s.signature().relations();
    rels.push_back({"inA", 1});
    rels.push_back({"inB", 1});
    rels.push_back({"inC", 1});
    std::vector<FunctionSymbol> funs = s.signature().functions();
    FiniteStructure dec((Signature(rels, funs)));
    for (ElemId v : all) dec.add_element(v);
    for (std::size_t r = 0; r < s.signature().relations().size(); ++r)
        for (const auto& t : s.tuples_within(static_cast<int>(r), all)) dec.add_tuple(static_cast<int>(r), t);
    for (std::size_t f = 0; f < s.signature().functions().size(); ++f)
        for (ElemId v : all) {
            ElemId fv = s.function_value(static_cast<int>(f), v);
            if (set_contains(all, fv)) dec.set_function(static_cast<int>(f), v, fv);
        }
    for (ElemId v : A) dec.add_tuple("inA", {v});
    for (ElemId v : B) dec.add_tuple("inB", {v});
    for (ElemId v : C) dec.add_tuple("inC", {v});
    return dec.canonical_code();
}

/// Type keys of a side set over a base, in both coordinate orders (side sets
/// have at most two elements at desk scale).
inline std::pair<std::string, std::string> side_type_keys(const FiniteStructure& s, const IdSet& side,
                                                          const IdSet& A) {
    Tuple t(side.begin(), side.end());
    std::string k1 = qftp(s, t, A).key();
    if (t.size() == 2) {
        std::swap(t[0], t[1]);
        return {k1, qftp(s, t, A).key()};
    }
    return {k1, k1};
}

}  // namespace detail

/// Exhaustively audits the axioms of a stationary weak independence relation
/// on a window of the limit. Existence is audited constructively (operator
/// plus realization in the limit); stationarity both by window scan and on
/// the constructed instances; invariance as qftp-dependence. Every failure
/// certificate re-validates by re-evaluating the predicate on the recorded
/// sets.
inline AuditReport audit_axioms(const IndependencePredicate& pred, const AmalgamOperator& op,
                                LazyLimit& limit, int max_a = 2, int max_side = 2,
                                std::size_t window_size = 12, int instance_floor = 50) {
    AuditReport rep;
    rep.predicate = pred.kind;
    rep.seed = limit.seed();
    rep.max_a = max_a;
    rep.max_b = max_side;
    rep.max_c = max_side;
    rep.instance_floor = instance_floor;

    auto w = detail::make_audit_window(limit, limit.seed(), window_size, max_a, max_side);
    rep.window_points = w.points.size();
    // the window snapshot: constructed realizations grow the limit, so the
    // scan-based audits work on a frozen copy
    const FiniteStructure snapshot = limit.current();

    AxiomResult inv{"Inv"}, lex{"LEx"}, rex{"REx"}, lsta{"LSta"}, rsta{"RSta"}, lmon{"LMon"},
        rmon{"RMon"}, tr{"Tr"}, base{"BaseTriviality"}, disj{"StrongAmalgDisjoint"};

    // precomputed independence matrix per base
    std::vector<std::vector<std::vector<char>>> indep(w.bases.size());
    for (std::size_t bi = 0; bi < w.bases.size(); ++bi) {
        const auto& A = w.bases[bi];
        auto& m = indep[bi];
        m.assign(w.sides[bi].size(), std::vector<char>(w.sides[bi].size(), 0));
        for (std::size_t i = 0; i < w.sides[bi].size(); ++i)
            for (std::size_t j = 0; j < w.sides[bi].size(); ++j)
                m[i][j] = pred.eval(snapshot, A, set_union(A, w.sides[bi][i]),
                                    set_union(A, w.sides[bi][j]))
                              ? 1
                              : 0;
    }

    // instance caps: the constructive audits stop shortly past the floor,
    // the window scans at a generous multiple (windows are sized so audits
    // complete in seconds)
    const int heavy_cap = instance_floor + 20;
    const int scan_cap = 20 * instance_floor;

    // ---- invariance: eval depends only on the joint type of the triple ----
    {
        std::map<std::string, std::pair<bool, std::vector<IdSet>>> classes;
        for (std::size_t bi = 0; bi < w.bases.size() && !inv.failed && inv.instances < 40 * heavy_cap;
             ++bi) {
            const IdSet& A = w.bases[bi];
            for (std::size_t i = 0; i < w.sides[bi].size() && !inv.failed; ++i)
                for (std::size_t j = 0; j < w.sides[bi].size(); ++j) {
                    if (inv.instances >= 40 * heavy_cap) break;
                    bool val = indep[bi][i][j];
                    auto code = detail::triple_code(snapshot, A, w.sides[bi][i], w.sides[bi][j]);
                    auto it = classes.find(code);
                    ++inv.instances;
                    if (it == classes.end()) {
                        classes[code] = {val, {A, w.sides[bi][i], w.sides[bi][j]}};
                    } else if (it->second.first != val) {
                        inv.failed = true;
                        inv.certificate = {it->second.second[0], it->second.second[1],
                                           it->second.second[2], A, w.sides[bi][i], w.sides[bi][j]};
                        inv.note = "two qftp-equal triples disagree";
                        break;
                    }
                }
        }
    }

    // ---- existence (constructive) + stationarity on constructed copies ----
    auto run_existence = [&](bool left, AxiomResult& ex, AxiomResult& sta) {
        for (std::size_t bi = 0; bi < w.bases.size() && ex.instances < heavy_cap; ++bi) {
            const IdSet& A = w.bases[bi];
            for (std::size_t i = 0; i < w.sides[bi].size() && ex.instances < heavy_cap; ++i)
                for (std::size_t j = 0; j < w.sides[bi].size() && ex.instances < heavy_cap; ++j) {
                    if (w.side_masks[bi][i] & w.side_masks[bi][j]) continue;
                    const IdSet& B = w.sides[bi][i];
                    const IdSet& C = w.sides[bi][j];
                    FiniteStructure sa = snapshot.induced(A);
                    FiniteStructure sb = snapshot.induced(set_union(A, B));
                    FiniteStructure sc = snapshot.induced(set_union(A, C));
                    FiniteStructure E = op.amalgamate(sa, sb, sc);
                    IdSet fixed = left ? set_union(A, C) : set_union(A, B);
                    IdSet moving = left ? B : C;
                    QfType joint = qftp(E, Tuple(moving.begin(), moving.end()), fixed);
                    Tuple realized = limit.realize_tuple(joint);
                    bool ok = left ? pred.eval(limit.current(), A, make_set(realized), set_union(A, C))
                                   : pred.eval(limit.current(), A, set_union(A, B), make_set(realized));
                    ++ex.instances;
                    if (!ok && !ex.failed) {
                        ex.failed = true;
                        ex.certificate = {A, B, C, make_set(realized)};
                        ex.note = "realized amalgam side is not independent";
                    }
                    // a second, disjoint realization gives a stationarity instance
                    Tuple realized2 = limit.realize_tuple(joint, make_set(realized));
                    bool ok2 = left ? pred.eval(limit.current(), A, make_set(realized2), set_union(A, C))
                                    : pred.eval(limit.current(), A, set_union(A, B), make_set(realized2));
                    if (ok && ok2) {
                        ++sta.instances;
                        IdSet over = fixed;
                        if (qftp(limit.current(), realized, over) != qftp(limit.current(), realized2, over) &&
                            !sta.failed) {
                            sta.failed = true;
                            sta.certificate = {A, B, C, make_set(realized), make_set(realized2)};
                            sta.note = "two independent realizations differ over the stationary side";
                        }
                    }
                }
        }
    };
    run_existence(true, lex, lsta);
    run_existence(false, rex, rsta);

    // ---- stationarity, window scan ----
    {
        for (std::size_t bi = 0;
             bi < w.bases.size() && !lsta.failed && !rsta.failed &&
             (lsta.instances < scan_cap || rsta.instances < scan_cap);
             ++bi) {
            const IdSet& A = w.bases[bi];
            std::size_t n = w.sides[bi].size();
            std::vector<std::pair<std::string, std::string>> keys(n);
            for (std::size_t i = 0; i < n; ++i)
                keys[i] = detail::side_type_keys(snapshot, w.sides[bi][i], A);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t i2 = 0; i2 < n; ++i2) {
                    if (w.sides[bi][i].size() != w.sides[bi][i2].size()) continue;
                    bool fwd_match = keys[i].first == keys[i2].first;
                    bool swp_match = keys[i].first == keys[i2].second;
                    if (!fwd_match && !swp_match) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        std::uint32_t mj = w.side_masks[bi][j];
                        if ((w.side_masks[bi][i] & mj) || (w.side_masks[bi][i2] & mj)) continue;
                        // left version
                        if (indep[bi][i][j] && indep[bi][i2][j] && lsta.instances < scan_cap) {
                            ++lsta.instances;
                            Tuple t1(w.sides[bi][i].begin(), w.sides[bi][i].end());
                            Tuple t2(w.sides[bi][i2].begin(), w.sides[bi][i2].end());
                            if (!fwd_match && t2.size() == 2) std::swap(t2[0], t2[1]);
                            IdSet AC = set_union(A, w.sides[bi][j]);
                            if (qftp(snapshot, t1, AC) != qftp(snapshot, t2, AC) && !lsta.failed) {
                                lsta.failed = true;
                                lsta.certificate = {A, w.sides[bi][i], w.sides[bi][i2], w.sides[bi][j]};
                                lsta.note = "equal types over A, both independent from C, differ over AC";
                            }
                        }
                        // right version
                        if (indep[bi][j][i] && indep[bi][j][i2] && rsta.instances < scan_cap) {
                            ++rsta.instances;
                            Tuple t1(w.sides[bi][i].begin(), w.sides[bi][i].end());
                            Tuple t2(w.sides[bi][i2].begin(), w.sides[bi][i2].end());
                            if (!fwd_match && t2.size() == 2) std::swap(t2[0], t2[1]);
                            IdSet AB = set_union(A, w.sides[bi][j]);
                            if (qftp(snapshot, t1, AB) != qftp(snapshot, t2, AB) && !rsta.failed) {
                                rsta.failed = true;
                                rsta.certificate = {A, w.sides[bi][j], w.sides[bi][i], w.sides[bi][i2]};
                                rsta.note = "equal types over A, both independent over B, differ over AB";
                            }
                        }
                    }
                }
        }
    }

    // ---- monotonicity ----
    {
        for (std::size_t bi = 0; bi < w.bases.size(); ++bi) {
            const IdSet& A = w.bases[bi];
            for (std::size_t xi = 0; xi < w.sides[bi].size(); ++xi) {
                const IdSet& X = w.sides[bi][xi];
                if (X.size() < 2) continue;
                std::vector<ElemId> xs(X.begin(), X.end());
                for (std::size_t j = 0; j < w.sides[bi].size(); ++j) {
                    if (w.side_masks[bi][xi] & w.side_masks[bi][j]) continue;
                    const IdSet& C = w.sides[bi][j];
                    // left: X independent from C over A
                    if (indep[bi][xi][j] && !lmon.failed && lmon.instances < scan_cap) {
                        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << xs.size()); ++mask) {
                            IdSet B, D;
                            for (std::size_t q = 0; q < xs.size(); ++q)
                                ((mask >> q) & 1 ? B : D).push_back(xs[q]);
                            ++lmon.instances;
                            if (!pred.eval(snapshot, A, set_union(A, B), set_union(A, C)) ||
                                !pred.eval(snapshot, set_union(A, B), set_union(set_union(A, B), D),
                                           set_union(A, C))) {
                                lmon.failed = true;
                                lmon.certificate = {A, B, D, C};
                                lmon.note = "BD independent from C but a split fails";
                                break;
                            }
                        }
                    }
                    // right: C independent from X over A
                    if (indep[bi][j][xi] && !rmon.failed && rmon.instances < scan_cap) {
                        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << xs.size()); ++mask) {
                            IdSet Cc, D;
                            for (std::size_t q = 0; q < xs.size(); ++q)
                                ((mask >> q) & 1 ? Cc : D).push_back(xs[q]);
                            ++rmon.instances;
                            if (!pred.eval(snapshot, A, set_union(A, C), set_union(A, Cc)) ||
                                !pred.eval(snapshot, set_union(A, Cc), set_union(A, C),
                                           set_union(set_union(A, Cc), D))) {
                                rmon.failed = true;
                                rmon.certificate = {A, C, Cc, D};
                                rmon.note = "B independent from CD but a split fails";
                                break;
                            }
                        }
                    }
                }
            }
        }
    }

    // ---- transitivity (derived) ----
    {
        for (std::size_t bi = 0; bi < w.bases.size() && !tr.failed && tr.instances < scan_cap; ++bi) {
            const IdSet& A = w.bases[bi];
            std::size_t n = w.sides[bi].size();
            for (std::size_t i = 0; i < n && !tr.failed && tr.instances < scan_cap; ++i)
                for (std::size_t j = 0; j < n && !tr.failed && tr.instances < scan_cap; ++j) {
                    if (!indep[bi][i][j]) continue;
                    if (w.side_masks[bi][i] & w.side_masks[bi][j]) continue;
                    const IdSet& B = w.sides[bi][i];
                    const IdSet& C = w.sides[bi][j];
                    IdSet AC = set_union(A, C);
                    IdSet AB = set_union(A, B);
                    for (std::size_t k = 0; k < n; ++k) {
                        std::uint32_t mk = w.side_masks[bi][k];
                        if ((mk & w.side_masks[bi][i]) || (mk & w.side_masks[bi][j])) continue;
                        const IdSet& D = w.sides[bi][k];
                        if (pred.eval(snapshot, AC, set_union(AC, B), set_union(AC, D))) {
                            ++tr.instances;
                            if (!pred.eval(snapshot, A, AB, set_union(AC, D))) {
                                tr.failed = true;
                                tr.certificate = {A, B, C, D};
                                tr.note = "B ind C over A and B ind D over AC, but not B ind CD over A";
                                break;
                            }
                        }
                        if (pred.eval(snapshot, AB, set_union(AB, D), set_union(AB, C))) {
                            ++tr.instances;
                            if (!pred.eval(snapshot, A, set_union(AB, D), AC)) {
                                tr.failed = true;
                                tr.certificate = {A, B, D, C};
                                tr.note = "B ind C over A and D ind C over AB, but not BD ind C over A";
                                break;
                            }
                        }
                    }
                }
        }
    }

    // ---- base triviality ----
    {
        for (std::size_t bi = 0; bi < w.bases.size() && !base.failed; ++bi) {
            const IdSet& A = w.bases[bi];
            for (const IdSet& B : w.sides[bi]) {
                ++base.instances;
                if (!pred.eval(snapshot, A, A, set_union(A, B)) ||
                    !pred.eval(snapshot, A, set_union(A, B), A)) {
                    base.failed = true;
                    base.certificate = {A, B};
                    base.note = "the base itself fails triviality";
                    break;
                }
            }
        }
    }

    // ---- strong-amalgamation disjointness ----
    {
        for (std::size_t bi = 0; bi < w.bases.size() && !disj.failed; ++bi) {
            const IdSet& A = w.bases[bi];
            std::size_t n = w.sides[bi].size();
            for (std::size_t i = 0; i < n && !disj.failed; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (!indep[bi][i][j]) continue;
                    ++disj.instances;
                    if (w.side_masks[bi][i] & w.side_masks[bi][j]) {
                        disj.failed = true;
                        disj.certificate = {A, w.sides[bi][i], w.sides[bi][j]};
                        disj.note = "independent sides overlap outside the base";
                        break;
                    }
                }
        }
    }

    for (AxiomResult* a : {&inv, &lex, &rex, &lsta, &rsta, &lmon, &rmon, &tr, &base, &disj}) {
        a->vacuous = a->instances < instance_floor && !a->failed;
        rep.axioms.push_back(*a);
    }
    return rep;
}

/// Freeness audit: whenever B is independent from C over A, the base may be
/// shrunk to any A' between (B u C) n A and A. Reports the first
/// counterexample with its shrunken base.
struct FreenessResult {
    bool pass = false;
    bool vacuous = true;
    int instances = 0;
    std::optional<std::vector<IdSet>> counterexample;  // A, B, C, A'
};

inline FreenessResult audit_freeness(const IndependencePredicate& pred, LazyLimit& limit, int max_a = 2,
                                     int max_side = 2, std::size_t window_size = 12) {
    FreenessResult res;
    auto w = detail::make_audit_window(limit, limit.seed() ^ 0x5ee3, window_size, max_a, max_side);
    const FiniteStructure& s = limit.current();
    for (std::size_t bi = 0; bi < w.bases.size(); ++bi) {
        const IdSet& A = w.bases[bi];
        if (A.empty()) continue;
        for (const IdSet& B : w.sides[bi])
            for (const IdSet& C : w.sides[bi]) {
                if (!pred.eval(s, A, set_union(A, B), set_union(A, C))) continue;
                IdSet bc_in_a = set_intersect(set_union(B, C), A);
                IdSet rest = set_minus(A, bc_in_a);
                std::vector<ElemId> rs(rest.begin(), rest.end());
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rs.size()); ++mask) {
                    IdSet Ap = bc_in_a;
                    for (std::size_t i = 0; i < rs.size(); ++i)
                        if ((mask >> i) & 1) Ap.push_back(rs[i]);
                    Ap = s.function_closure(make_set(Ap));
                    if (!set_subset(Ap, A)) continue;  // closure escaped: not a legal shrink
                    ++res.instances;
                    res.vacuous = false;
                    if (!pred.eval(s, Ap, set_union(Ap, B), set_union(Ap, C))) {
                        res.counterexample = {{A, B, C, Ap}};
                        res.pass = false;
                        return res;
                    }
                }
            }
    }
    res.pass = !res.vacuous;
    return res;
}

/// Symmetry audit: B independent from C over A iff C independent from B.
struct SymmetryResult {
    bool pass = false;
    bool vacuous = true;
    int instances = 0;
    std::optional<std::vector<IdSet>> counterexample;  // A, B, C
};

inline SymmetryResult audit_symmetry(const IndependencePredicate& pred, LazyLimit& limit, int max_a = 2,
                                     int max_side = 2, std::size_t window_size = 12) {
    SymmetryResult res;
    auto w = detail::make_audit_window(limit, limit.seed() ^ 0x57u, window_size, max_a, max_side);
    const FiniteStructure& s = limit.current();
    for (std::size_t bi = 0; bi < w.bases.size(); ++bi) {
        const IdSet& A = w.bases[bi];
        for (const IdSet& B : w.sides[bi])
            for (const IdSet& C : w.sides[bi]) {
                bool fwd = pred.eval(s, A, set_union(A, B), set_union(A, C));
                bool bwd = pred.eval(s, A, set_union(A, C), set_union(A, B));
                if (fwd || bwd) {
                    ++res.instances;
                    res.vacuous = false;
                }
                if (fwd != bwd) {
                    res.counterexample = {{A, B, C}};
                    res.pass = false;
                    return res;
                }
            }
    }
    res.pass = !res.vacuous;
    return res;
}

}  // namespace fraisse
