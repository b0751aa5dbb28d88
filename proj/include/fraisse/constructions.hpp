#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/independence.hpp"
#include "fraisse/limits.hpp"

namespace fraisse {

/// Raised when the moved-realization hypothesis fails for a specific type
/// (the bounded search could not produce a realization moved by g).
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline int unary_colour(const FiniteStructure& s, ElemId v) {
    for (const auto& rs : s.signature().relations()) {
        if (rs.arity != 1 || rs.name.rfind("chi", 0) != 0) continue;
        if (s.has_tuple(rs.name, {v})) return std::stoi(rs.name.substr(3));
    }
    return -1;
}

/// Rebuilds a 1-point type over params + extra via a scratch structure:
/// materializes x over the original params, then applies `decorate`, which
/// must fully specify x's relations to the extra points.
struct PinBuilder {
    const FiniteStructure& s;
    const QfType& t;

    QfType build(const IdSet& extra, const std::function<void(FiniteStructure&, ElemId)>& decorate) const {
        IdSet params2 = set_union(t.params, extra);
        FiniteStructure scratch = s.induced(params2);
        ElemId x = materialize_extension(scratch, t);
        decorate(scratch, x);
        return qftp(scratch, {x}, params2);
    }
};

}  // namespace detail

/// A class-specific pinned extension of the 1-point type `t`: relations of
/// the new point to u and g(u) are chosen asymmetrically, so that any
/// edge-preserving map sending u to gu must move every realization. Returns
/// nothing when the class has no pin or (u, gu) does not fit the type.
inline std::optional<QfType> pin_moved_extension(const ClassSpec& cls, const FiniteStructure& s,
                                                 const QfType& t, ElemId u, ElemId gu) {
    if (set_contains(t.params, u) || set_contains(t.params, gu) || u == gu) return std::nullopt;
    detail::PinBuilder pb{s, t};
    IdSet extra = make_set({u, gu});

    if (auto* multi = dynamic_cast<const MultiTnClass*>(&cls)) {
        const auto& spec = multi->spec();
        if (!spec.delta) return std::nullopt;
        const std::string delta = *spec.delta;
        return pb.build(extra, [&](FiniteStructure& scratch, ElemId x) {
            scratch.add_tuple(delta, {x, u});
            scratch.add_tuple(delta, {gu, x});
            auto dsign = [&](ElemId a, ElemId b) -> int {
                if (scratch.has_tuple(delta, {a, b})) return 1;
                if (scratch.has_tuple(delta, {b, a})) return -1;
                throw StructureError("delta not total in pin scratch");
            };
            for (auto& [rel, n] : spec.arities) {
                if (rel == delta) continue;
                detail::for_each_subset(scratch.universe(), n, [&](const Tuple& subset) {
                    bool has_x = false, has_extra = false;
                    for (ElemId v : subset) {
                        if (v == x) has_x = true;
                        if (set_contains(extra, v)) has_extra = true;
                    }
                    if (!has_x || !has_extra) return;
                    int prod = 1;
                    for (std::size_t i = 0; i < subset.size(); ++i)
                        for (std::size_t j = i + 1; j < subset.size(); ++j)
                            prod *= dsign(subset[i], subset[j]);
                    detail::for_each_permutation(subset, [&](const Tuple& perm) {
                        auto [rep, psign] = ascending_rep(perm);
                        if (psign == prod) scratch.add_tuple(rel, perm);
                    });
                });
            }
        });
    }
    if (auto* tn = dynamic_cast<const TnClass*>(&cls)) {
        if (tn->signature().relations()[0].arity != 2) return std::nullopt;
        return pb.build(extra, [&](FiniteStructure& scratch, ElemId x) {
            scratch.add_tuple("R", {x, u});
            scratch.add_tuple("R", {gu, x});
        });
    }
    if (dynamic_cast<const RandomGraphClass*>(&cls)) {
        return pb.build(extra, [&](FiniteStructure& scratch, ElemId x) {
            scratch.add_tuple("E", {x, u});
            scratch.add_tuple("E", {u, x});
        });
    }
    if (dynamic_cast<const DnClass*>(&cls)) {
        if (orthogonal(s, u, gu)) return std::nullopt;  // need u, gu in different parts
        QfType out = pb.build(extra, [&](FiniteStructure& scratch, ElemId x) {
            if (detail::unary_colour(scratch, x) == detail::unary_colour(scratch, u) ||
                detail::unary_colour(scratch, x) == detail::unary_colour(scratch, gu))
                throw StructureError("pin incompatible with the colour of the type");
            scratch.add_tuple(kEdgeRel, {x, u});
            scratch.add_tuple(kEdgeRel, {gu, x});
        });
        return out;
    }
    if (dynamic_cast<const QnClass*>(&cls)) {
        ElemId lo = s.has_tuple("<", {u, gu}) ? u : gu;
        ElemId hi = lo == u ? gu : u;
        QfType out = pb.build(extra, [&](FiniteStructure& scratch, ElemId x) {
            scratch.add_tuple("<", {lo, x});
            scratch.add_tuple("<", {x, hi});
        });
        // the pin is only usable when the order stays consistent
        IdSet params2 = set_union(t.params, extra);
        FiniteStructure check = s.induced(params2);
        detail::materialize_extension(check, out);
        std::string why;
        if (!cls.member(check, &why)) return std::nullopt;
        return out;
    }
    return std::nullopt;
}

/// Searches for a realization of the exterior 1-type `t` moved by g: first
/// among existing points, then by realizing a pinned extension against a
/// moved point. Throws HypothesisError when the bounded search fails.
inline ElemId moved_realization(LazyLimit& limit, LazyAutomorphism& g, const QfType& t, Budget& budget) {
    int scanned = 0;
    const IdSet scan = limit.current().universe();  // g.apply grows the universe
    for (ElemId w : scan) {
        if (scanned++ > 4 * budget.per_query) break;
        if (!detail::realizes_point(limit.current(), w, t)) continue;
        budget.charge("moved_realization");
        if (g.apply(w) != w) return w;
    }
    int tried = 0;
    IdSet universe_snapshot = limit.current().universe();
    for (ElemId u : universe_snapshot) {
        if (tried > budget.per_query) break;
        if (set_contains(t.params, u)) continue;
        ++tried;
        budget.charge("moved_realization");
        ElemId gu = g.apply(u);
        if (gu == u || set_contains(t.params, gu)) continue;
        std::optional<QfType> pin;
        try {
            pin = pin_moved_extension(limit.spec(), limit.current(), t, u, gu);
        } catch (const StructureError&) {
            continue;
        }
        if (!pin) continue;
        ElemId w;
        try {
            w = limit.realize(*pin);
        } catch (const StructureError&) {
            continue;
        }
        if (!detail::realizes_point(limit.current(), w, t)) continue;
        if (g.apply(w) != w) return w;
    }
    throw HypothesisError("no realization moved by g found for an exterior 1-type");
}

/// Realizes the exterior type q with the witness disjoint from its g-image
/// and both disjoint from V: realize the prefix inductively, pick a candidate
/// for the last coordinate away from the forbidden sets, then replace it by a
/// moved realization of its full type.
inline Tuple realisation_disjoint(LazyLimit& limit, LazyAutomorphism& g, const IdSet& V, const QfType& q,
                                  Budget& budget) {
    if (!q.exterior()) throw StructureError("realisation_disjoint expects an exterior type");
    int n = q.tuple_len;
    if (n == 0) return {};
    Tuple prefix = n > 1 ? realisation_disjoint(limit, g, V, q.project(n - 1), budget) : Tuple{};

    int code = q.tuple_code[static_cast<std::size_t>(n - 1)];
    for (int i = 0; i < n - 1; ++i)
        if (q.tuple_code[static_cast<std::size_t>(i)] == code) {
            Tuple out = prefix;
            out.push_back(prefix[static_cast<std::size_t>(i)]);
            return out;
        }

    IdSet pref = make_set(prefix);
    IdSet gpref = g.apply_set(pref);
    IdSet ginv = g.apply_inverse_set(set_union(pref, V));
    IdSet big = set_union(set_union(q.params, pref), set_union(set_union(gpref, V), ginv));

    QfType step = LazyLimit::bind_prefix(q, prefix, n - 1);
    ElemId c0 = limit.realize(step, big);
    QfType full = qftp(limit.current(), {c0}, big);
    ElemId c = moved_realization(limit, g, full, budget);

    Tuple out = prefix;
    out.push_back(c);
    IdSet bs = make_set(out);
    IdSet gbs = g.apply_set(bs);
    if (!set_disjoint(bs, gbs) || !set_disjoint(set_union(bs, gbs), V))
        throw StructureError("realisation_disjoint produced a non-disjoint witness");
    return out;
}

// --------------------------------------------------------------------------
// Moved parts and general position (semigeneric hosts)
// --------------------------------------------------------------------------

struct MovedPart {
    ElemId witness;  // w with g(w) outside w's part
    ElemId image;    // g(w)
};

namespace detail {

inline PartiteTournament parts_of(const FiniteStructure& s) {
    auto res = check_partite(s);
    if (std::holds_alternative<PartiteViolation>(res))
        throw StructureError("host is not a partite tournament: " + std::get<PartiteViolation>(res).reason);
    return std::get<PartiteTournament>(res);
}

/// A fresh-part extension type over `params` with prescribed edge directions
/// (+1 means new point -> target); unlisted params get out-edges.
inline QfType fresh_part_type(const FiniteStructure& s, const IdSet& params,
                              const std::map<ElemId, int>& edges) {
    FiniteStructure scratch = s.induced(params);
    ElemId x = scratch.fresh_id();
    scratch.add_element(x);
    for (ElemId v : scratch.universe()) {
        if (v == x) continue;
        auto it = edges.find(v);
        int d = it != edges.end() ? it->second : 1;
        scratch.add_tuple(kEdgeRel, d ? Tuple{x, v} : Tuple{v, x});
    }
    const auto& funs = scratch.signature().functions();
    for (std::size_t f = 0; f < funs.size(); ++f) scratch.set_function(static_cast<int>(f), x, x);
    return qftp(scratch, {x}, scratch.function_closure(params));
}

/// A part-mate extension: a new point orthogonal to `anchor`, with the rest
/// of its row completed by the class rule.
inline ElemId add_part_mate(LazyLimit& limit, ElemId anchor) {
    const FiniteStructure& cur = limit.current();
    IdSet base = cur.function_closure(make_set({anchor}));
    FiniteStructure scratch = cur.induced(base);
    ElemId x = scratch.fresh_id();
    scratch.add_element(x);
    const auto& funs = scratch.signature().functions();
    for (std::size_t f = 0; f < funs.size(); ++f)
        scratch.set_function(static_cast<int>(f), x, scratch.function_value(static_cast<int>(f), anchor));
    return limit.add_point(qftp(scratch, {x}, base));
}

}  // namespace detail

/// Finds `count` parts of the lazy semigeneric (or S_rho) limit moved by g,
/// each certified by a vertex pair (w, g(w)) in different parts, none of the
/// parts touching `avoid`. When the window runs dry, new moved parts are
/// produced by the extension recipe: fresh-part points w with
/// {u, u', g(u)} -> w and g(u') <- w for a doubly-moved pair u, u' in one part.
inline std::vector<MovedPart> find_moved_parts(LazyLimit& limit, LazyAutomorphism& g, int count,
                                               Budget& budget, const IdSet& avoid = {}) {
    std::vector<MovedPart> out;
    auto conflicts_avoid = [&](ElemId x) {
        for (ElemId a : avoid)
            if (a == x || orthogonal(limit.current(), a, x)) return true;
        return false;
    };
    auto try_add = [&](ElemId w, ElemId gw) {
        if (gw == w) return false;
        if (orthogonal(limit.current(), w, gw)) return false;  // image inside the same part
        for (auto& m : out)
            if (m.witness == w || orthogonal(limit.current(), m.witness, w)) return false;
        if (conflicts_avoid(w) || conflicts_avoid(gw)) return false;
        out.push_back({w, gw});
        return true;
    };

    {
        // scan points with pinned images first; applying g to arbitrary
        // points would grow the limit for every candidate
        const IdSet scan = limit.current().universe();
        for (ElemId w : scan) {
            if (static_cast<int>(out.size()) >= count) return out;
            auto gw = g.apply_if_defined(w);
            if (!gw) continue;
            budget.charge("find_moved_parts");
            try_add(w, *gw);
        }
        int fresh_probes = 0;
        for (ElemId w : scan) {
            if (static_cast<int>(out.size()) >= count) return out;
            if (g.apply_if_defined(w)) continue;
            if (++fresh_probes > 8) break;
            budget.charge("find_moved_parts");
            try_add(w, g.apply(w));
        }
    }
    if (static_cast<int>(out.size()) >= count) return out;

    // a doubly-moved pair inside one part, constructed if necessary
    std::optional<std::pair<ElemId, ElemId>> pair;
    auto pt = detail::parts_of(limit.current());
    for (const auto& P : pt.parts) {
        for (std::size_t i = 0; i < P.size() && !pair; ++i)
            for (std::size_t j = i + 1; j < P.size() && !pair; ++j) {
                ElemId u = P[i], u2 = P[j];
                ElemId gu = g.apply(u), gu2 = g.apply(u2);
                if (gu != u && gu2 != u2 && gu != u2 && gu2 != u && gu != gu2)
                    pair = std::make_pair(u, u2);
            }
        if (pair) break;
    }
    if (!pair) {
        std::optional<ElemId> moved;
        const IdSet scan = limit.current().universe();
        for (ElemId v : scan) {
            auto gv = g.apply_if_defined(v);
            if (gv && *gv != v) {
                moved = v;
                break;
            }
        }
        if (!moved) {
            int fresh_probes = 0;
            for (ElemId v : scan) {
                if (++fresh_probes > 8) break;
                budget.charge("find_moved_parts");
                if (g.apply(v) != v) {
                    moved = v;
                    break;
                }
            }
        }
        if (!moved) throw HypothesisError("g is the identity on the reachable window");
        ElemId v = *moved, gv = g.apply(v);
        IdSet params = limit.current().function_closure(make_set({v, gv}));
        // two points of one fresh part, each with x -> v and g(v) -> x; both
        // are then forced to move
        ElemId x1 = limit.add_point(detail::fresh_part_type(limit.current(), params, {{v, 1}, {gv, 0}}));
        FiniteStructure scratch = limit.current().induced(set_union(params, {x1}));
        ElemId xx = scratch.fresh_id();
        scratch.add_element(xx);
        scratch.add_tuple(kEdgeRel, {xx, v});
        scratch.add_tuple(kEdgeRel, {gv, xx});
        for (ElemId other : params)
            if (other != v && other != gv) scratch.add_tuple(kEdgeRel, {xx, other});
        const auto& funs = scratch.signature().functions();
        for (std::size_t f = 0; f < funs.size(); ++f)
            scratch.set_function(static_cast<int>(f), xx,
                                 scratch.function_value(static_cast<int>(f), x1));
        ElemId x2 = limit.add_point(qftp(scratch, {xx}, set_union(params, {x1})));
        ElemId gx1 = g.apply(x1), gx2 = g.apply(x2);
        if (gx1 == x1 || gx2 == x2 || gx1 == x2 || gx2 == x1 || gx1 == gx2)
            throw HypothesisError("forced-moved pair construction failed");
        pair = std::make_pair(x1, x2);
    }

    auto [u, u2] = *pair;
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        budget.charge("find_moved_parts");
        if (++guard > budget.per_query)
            throw BudgetError("find_moved_parts could not produce enough moved parts");
        ElemId gu = g.apply(u), gu2 = g.apply(u2);
        IdSet params = limit.current().function_closure(make_set({u, u2, gu, gu2}));
        auto t = detail::fresh_part_type(limit.current(), params, {{u, 0}, {u2, 0}, {gu, 0}, {gu2, 1}});
        ElemId w = limit.add_point(t);
        try_add(w, g.apply(w));
    }
    return out;
}

/// Support points of g inside the part of `anchor`: new part-mates w with
/// w -> v and w <- g(v) for a point v whose part and image part avoid the
/// anchor's part; each such w satisfies g(w) != w.
inline std::vector<ElemId> part_support_points(LazyLimit& limit, LazyAutomorphism& g, ElemId anchor,
                                               int count, Budget& budget) {
    std::vector<ElemId> out;
    auto parts = find_moved_parts(limit, g, 1, budget, make_set({anchor}));
    if (parts.empty()) throw HypothesisError("no moved part away from the anchor");
    ElemId v = parts[0].witness, gv = parts[0].image;
    while (static_cast<int>(out.size()) < count) {
        budget.charge("part_support_points");
        const FiniteStructure& cur = limit.current();
        IdSet params = cur.function_closure(make_set({anchor, v, gv}));
        FiniteStructure scratch = cur.induced(params);
        ElemId x = scratch.fresh_id();
        scratch.add_element(x);
        // x joins the anchor's part, so its row against each other part must
        // copy or flip the anchor's row as a whole; flips are chosen to force
        // x -> v and g(v) -> x
        int flip_v = 1 - edge_dir(cur, anchor, v);
        int flip_gv = edge_dir(cur, anchor, gv);
        for (ElemId other : params) {
            if (orthogonal(cur, other, anchor) || other == anchor) continue;  // part mates stay orthogonal
            int flip = 0;
            if (!orthogonal(cur, other, v) || other == v) flip = flip_v;
            else if (!orthogonal(cur, other, gv) || other == gv) flip = flip_gv;
            int d = edge_dir(cur, anchor, other) ^ flip;
            scratch.add_tuple(kEdgeRel, d ? Tuple{x, other} : Tuple{other, x});
        }
        const auto& funs = scratch.signature().functions();
        for (std::size_t f = 0; f < funs.size(); ++f)
            scratch.set_function(static_cast<int>(f), x, scratch.function_value(static_cast<int>(f), anchor));
        ElemId w = limit.add_point(qftp(scratch, {x}, params));
        if (g.apply(w) == w) throw StructureError("pinned support point was not moved");
        if (!orthogonal(limit.current(), w, anchor))
            throw StructureError("support point left the anchor part");
        out.push_back(w);
    }
    return out;
}

/// Realizes the exterior type p over U in general position for g: the
/// witness avoids its own g-image and V, and every coordinate adjacent to all
/// of U lands in a fresh part with an edge to its g-image, with both parts
/// away from U, V and the rest of the witness.
inline Tuple realize_in_general_position(LazyLimit& limit, LazyAutomorphism& g, const IdSet& U,
                                         const IdSet& V, const QfType& p, Budget& budget) {
    if (!p.exterior()) throw StructureError("general position expects an exterior type");
    int n = p.tuple_len;
    if (n == 0) return {};
    Tuple prefix = n > 1 ? realize_in_general_position(limit, g, U, V, p.project(n - 1), budget) : Tuple{};

    int code = p.tuple_code[static_cast<std::size_t>(n - 1)];
    for (int i = 0; i < n - 1; ++i)
        if (p.tuple_code[static_cast<std::size_t>(i)] == code) {
            Tuple out = prefix;
            out.push_back(prefix[static_cast<std::size_t>(i)]);
            return out;
        }

    QfType step = LazyLimit::bind_prefix(p, prefix, n - 1);

    // classify the new coordinate: orthogonal to a U-part, orthogonal to a
    // prefix coordinate's part, or adjacent to everything (fresh part)
    std::optional<ElemId> bot_param;
    bool bot_prefix = false;
    {
        const FiniteStructure& cur = limit.current();
        int pcount = static_cast<int>(step.params.size());
        int r = cur.signature().relation_index(kEdgeRel);
        std::vector<bool> adjacent(static_cast<std::size_t>(pcount), false);
        for (const auto& enc : step.rel_content[static_cast<std::size_t>(r)]) {
            if (enc.size() != 2) continue;
            if (enc[0] == pcount && enc[1] < pcount) adjacent[static_cast<std::size_t>(enc[1])] = true;
            if (enc[1] == pcount && enc[0] < pcount) adjacent[static_cast<std::size_t>(enc[0])] = true;
        }
        for (int i = 0; i < pcount; ++i)
            if (!adjacent[static_cast<std::size_t>(i)]) {
                ElemId pr = step.params[static_cast<std::size_t>(i)];
                if (set_contains(U, pr)) bot_param = pr;
                else bot_prefix = true;
            }
    }

    IdSet pref = make_set(prefix);
    auto attempt = [&](const QfType& pinned, bool force_fresh) -> std::optional<ElemId> {
        for (int tries = 0; tries < 8; ++tries) {
            budget.charge("realize_in_general_position");
            ElemId c;
            try {
                c = (tries == 0 && !force_fresh) ? limit.realize(pinned, set_union(pref, V))
                                                 : limit.add_point(pinned);
            } catch (const StructureError&) {
                return std::nullopt;
            }
            ElemId gc = g.apply(c);
            if (gc == c) continue;
            Tuple all = prefix;
            all.push_back(c);
            IdSet bs = make_set(all);
            IdSet gbs = g.apply_set(bs);
            if (!set_disjoint(bs, gbs)) continue;
            if (!set_disjoint(set_union(bs, gbs), V)) continue;
            return c;
        }
        return std::nullopt;
    };

    std::optional<ElemId> chosen;
    if (bot_prefix && !bot_param) {
        chosen = attempt(step, false);
    } else {
        IdSet avoid = set_union(set_union(pref, U), V);
        avoid = set_union(avoid, g.apply_inverse_set(avoid));
        auto parts = find_moved_parts(limit, g, 1, budget, avoid);
        ElemId t = parts[0].witness, gt = parts[0].image;
        if (bot_param) {
            // joins an existing U-part: pin y -> t, y <- g(t)
            detail::PinBuilder pb{limit.current(), step};
            QfType pinned = pb.build(make_set({t, gt}), [&](FiniteStructure& scratch, ElemId x) {
                auto ensure = [&](ElemId a, int d) {
                    if (!scratch.has_tuple(kEdgeRel, {x, a}) && !scratch.has_tuple(kEdgeRel, {a, x}))
                        scratch.add_tuple(kEdgeRel, d ? Tuple{x, a} : Tuple{a, x});
                };
                ensure(t, 1);
                ensure(gt, 0);
            });
            chosen = attempt(pinned, false);
        } else {
            // fresh part: make sure the g-preimages of U, V and the prefix
            // exist (a fresh point is then adjacent to all of them), and pin
            // y -> t, y -> t', y -> g(t), y <- g(t') for a part-mate t' of t
            g.apply_inverse_set(set_union(set_union(U, V), pref));
            ElemId tprime = detail::add_part_mate(limit, t);
            ElemId gtprime = g.apply(tprime);
            if (gtprime == tprime) throw HypothesisError("part mate of a moved part was fixed");
            detail::PinBuilder pb{limit.current(), step};
            QfType pinned =
                pb.build(make_set({t, tprime, gt, gtprime}), [&](FiniteStructure& scratch, ElemId x) {
                    auto ensure = [&](ElemId a, int d) {
                        if (!scratch.has_tuple(kEdgeRel, {x, a}) && !scratch.has_tuple(kEdgeRel, {a, x}))
                            scratch.add_tuple(kEdgeRel, d ? Tuple{x, a} : Tuple{a, x});
                    };
                    ensure(t, 1);
                    ensure(tprime, 1);
                    ensure(gt, 1);
                    ensure(gtprime, 0);
                });
            chosen = attempt(pinned, true);
        }
    }
    if (!chosen) throw HypothesisError("general-position realization not found within budget");
    Tuple out = prefix;
    out.push_back(*chosen);
    return out;
}

/// Re-checks the general-position conditions for a witness: (i) disjointness
/// from the image and V; (ii) adjacency conditions for the coordinates the
/// type makes adjacent to all of U.
inline bool verify_general_position(LazyLimit& limit, LazyAutomorphism& g, const IdSet& U, const IdSet& V,
                                    const QfType& p, const Tuple& b) {
    const FiniteStructure& cur = limit.current();
    if (!realizes(cur, b, p)) return false;
    IdSet bs = make_set(b);
    IdSet gbs = g.apply_set(bs);
    if (!set_disjoint(bs, gbs) || !set_disjoint(set_union(bs, gbs), V)) return false;
    for (std::size_t i = 0; i < b.size(); ++i) {
        bool adj_all = true;
        for (ElemId uu : U)
            if (orthogonal(cur, b[i], uu)) adj_all = false;
        if (!adj_all || U.empty()) continue;
        ElemId gbi = g.apply(b[i]);
        for (ElemId x : b)
            if (x != gbi && orthogonal(cur, x, gbi)) return false;  // b must stay adjacent to g(b_i)
        for (ElemId x : set_union(U, V)) {
            if (orthogonal(cur, b[i], x) || orthogonal(cur, gbi, x)) return false;
        }
    }
    return true;
}

}  // namespace fraisse
