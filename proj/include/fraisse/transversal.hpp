#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/constructions.hpp"
#include "fraisse/limits.hpp"
#include "fraisse/partite.hpp"

namespace fraisse {

/// Per-stage record of a transversal chain construction, with the machine
/// verdicts for the stage invariants.
struct TransversalStageLog {
    int stage = 0;
    ElemId absorbed = 0;
    std::string absorb_case;
    IdSet added;
    bool solved_problem = false;
    std::string problem_canon;
    bool cond_points = false;        // (i) enumerated points absorbed
    bool cond_images = false;        // (ii) image containments
    bool cond_schedule = false;      // (iii) schedule extended consistently
    bool cond_realized = false;      // (iv) scheduled problem realized
    bool triple_valid = false;       // S_++ membership of the stage triple

    bool all_conditions() const {
        return cond_points && cond_images && cond_schedule && cond_realized && triple_valid;
    }
};

namespace detail {

/// Picks the least element of a part satisfying pred, extending the part with
/// fresh mates when the window runs dry.
template <typename Pred>
ElemId pick_in_part(LazyLimit& limit, ElemId anchor, const IdSet& exclude, Budget& budget, Pred&& pred) {
    for (int rounds = 0; rounds < budget.per_query; ++rounds) {
        const IdSet scan = limit.current().universe();  // pred may grow the universe
        for (ElemId w : scan) {
            if (w != anchor && !orthogonal(limit.current(), w, anchor)) continue;
            if (set_contains(exclude, w)) continue;
            if (pred(w)) return w;
        }
        budget.charge("pick_in_part");
        add_part_mate(limit, anchor);
    }
    throw BudgetError("no qualifying vertex in the part within budget");
}

/// Materializes the red-blue extension of `prob` over the full triple base
/// `A`: the two new points take the problem's edges against the stored
/// subobject and class-completed rows elsewhere. Returns the joint 2-type of
/// (r, b) over A.
inline QfType amalgamated_problem_type(const LazyLimit& limit, const RedBlueProblem& prob,
                                       const IdSet& A) {
    const FiniteStructure& cur = limit.current();
    if (!set_subset(prob.base.universe(), A))
        throw StructureError("scheduled problem's subobject is not inside the triple");
    FiniteStructure scratch = cur.induced(A);
    ElemId r = scratch.fresh_id();
    scratch.add_element(r);
    for (auto& [v, d] : prob.r_edges) scratch.add_tuple(kEdgeRel, d ? Tuple{r, v} : Tuple{v, r});
    limit.spec().complete_new_point(scratch, r, prob.base.universe(), /*x_left=*/true);
    ElemId b = scratch.fresh_id();
    scratch.add_element(b);
    for (auto& [v, d] : prob.b_edges) scratch.add_tuple(kEdgeRel, d ? Tuple{b, v} : Tuple{v, b});
    // no edge to r: b joins r's new part; completion respects the decided rows
    IdSet base_b = set_union(prob.base.universe(), {r});
    limit.spec().complete_new_point(scratch, b, base_b, /*x_left=*/true);
    auto chk = check_semigeneric(scratch);
    if (std::holds_alternative<PartiteViolation>(chk))
        throw StructureError("amalgamated red-blue target is not semigeneric: " +
                             std::get<PartiteViolation>(chk).reason);
    return qftp(scratch, {r, b}, A);
}

}  // namespace detail

/// A chain (A_n, T_n, U_n) with its red-blue schedule.
struct TransversalChain {
    IdSet A, T, U;
    IdSet scheduled_over;  // the A for which the schedule is up to date
    std::vector<RedBlueProblem> schedule;
    std::vector<std::string> scheduled_canons;
    std::size_t solved = 0;

    TransversalTriple triple(const FiniteStructure& s) const { return {s.induced(A), T, U}; }
};

namespace detail {

/// Appends the red-blue extensions of subobjects of (A, T|A, U|A) that are
/// not scheduled yet (canonical dedup); only subobjects touching points that
/// are new since the last call are enumerated.
inline void extend_schedule(const FiniteStructure& s, TransversalChain& chain,
                            std::size_t max_base_points) {
    TransversalTriple t{s.induced(chain.A), set_intersect(chain.T, chain.A),
                        set_intersect(chain.U, chain.A)};
    IdSet fresh = set_minus(chain.A, chain.scheduled_over);
    bool first = chain.scheduled_over.empty() && chain.schedule.empty();
    for (auto& prob : red_blue_enumerate(t, max_base_points, first ? IdSet{} : fresh)) {
        bool seen = false;
        for (const auto& c : chain.scheduled_canons)
            if (c == prob.canon) seen = true;
        if (!seen) {
            chain.scheduled_canons.push_back(prob.canon);
            chain.schedule.push_back(std::move(prob));
        }
    }
    chain.scheduled_over = chain.A;
}

/// Checks that (A_n, T_n, U_n) realizes the scheduled problem: the stored
/// witness pair must carry the problem's type over the subobject.
inline bool problem_realized(const FiniteStructure& s, const RedBlueProblem& prob, ElemId r, ElemId b) {
    ElemId pr = 0, pb = 0;
    FiniteStructure target = prob.target(&pr, &pb);
    QfType want = qftp(target, {pr, pb}, prob.base.universe());
    return realizes(s, {r, b}, want);
}

}  // namespace detail

struct TransversalResult {
    TransversalChain chain;          // (A, T, U)
    std::optional<TransversalChain> second;  // (A, T, W) for the double construction
    std::vector<TransversalStageLog> log;
    bool all_stages_pass() const {
        if (log.empty()) return false;
        for (const auto& st : log)
            if (!st.all_conditions()) return false;
        return true;
    }
};

/// The chain construction of a transversal versus its g-image: N stages, each
/// absorbing the next window point, keeping g(T_n) n A_n inside U_n (and the
/// mirror), and solving the next scheduled red-blue problem through a fresh
/// moved part. All stage invariants are machine-checked.
inline TransversalResult generic_transversal_vs_image(LazyLimit& limit, LazyAutomorphism::Ptr g,
                                                      int steps, Budget budget = {},
                                                      std::size_t rb_base_cap = 4) {
    if (limit.spec().name() != "semigeneric")
        throw StructureError("transversal construction runs over the semigeneric limit");
    {
        bool moved = false;
        for (ElemId v : g->probe_points())
            if (g->apply(v) != v) moved = true;
        if (!moved) throw HypothesisError("g acts as the identity on its seeded points");
    }
    g->set_prefer_fresh(true);
    TransversalResult res;
    TransversalChain& ch = res.chain;
    IdSet window = limit.current().universe();  // enumeration snapshot

    // stage 0: empty triple, the schedule holds the single extension of the
    // empty subobject
    detail::extend_schedule(limit.current(), ch, rb_base_cap);

    for (int n = 1; n <= steps; ++n) {
        TransversalStageLog log;
        log.stage = n;
        ElemId v;
        if (static_cast<std::size_t>(n - 1) < window.size()) {
            v = window[static_cast<std::size_t>(n - 1)];
        } else {
            v = limit.add_point(detail::fresh_part_type(limit.current(), ch.A, {}));
            window = set_union(window, {v});
        }
        log.absorbed = v;

        // ---- absorb v ----
        IdSet part_in_A;
        for (ElemId a : ch.A)
            if (a == v || orthogonal(limit.current(), a, v)) part_in_A.push_back(a);
        if (!part_in_A.empty()) {
            ch.A = set_union(ch.A, {v});
            log.absorb_case = "part already met";
        } else {
            // does g fix v's part setwise? test through a witness
            ElemId gv = g->apply(v);
            bool g_fixes_part = gv != v && orthogonal(limit.current(), v, gv);
            if (!g_fixes_part) {
                // scan other part members for a fixed-part witness
                const IdSet scan = limit.current().universe();
                for (ElemId w : scan) {
                    if (w == v || !orthogonal(limit.current(), w, v)) continue;
                    ElemId gw = g->apply(w);
                    if (gw != w && (gw == v || orthogonal(limit.current(), gw, v))) {
                        g_fixes_part = true;
                        break;
                    }
                }
            }
            if (g_fixes_part) {
                ElemId w = detail::pick_in_part(limit, v, {}, budget, [&](ElemId cand) {
                    ElemId gc = g->apply(cand);
                    return gc != cand && (gc == v || orthogonal(limit.current(), gc, cand));
                });
                ElemId gw = g->apply(w);
                ch.A = set_union(ch.A, make_set({v, w, gw}));
                ch.T = set_union(ch.T, {w});
                ch.U = set_union(ch.U, {gw});
                log.absorb_case = "part fixed setwise";
            } else {
                IdSet gT = g->apply_set(ch.T);
                IdSet gInvU = g->apply_inverse_set(ch.U);
                IdSet P;
                for (ElemId w : limit.current().universe())
                    if (w == v || orthogonal(limit.current(), w, v)) P.push_back(w);
                IdSet rs = set_intersect(gInvU, P);
                IdSet bs = set_intersect(gT, P);
                ElemId r, b;
                if (!rs.empty() && !bs.empty()) {
                    r = rs[0];
                    b = bs[0];
                    log.absorb_case = "both intersections";
                } else if (!rs.empty()) {
                    r = rs[0];
                    ElemId rr = r;
                    b = detail::pick_in_part(limit, v, {rr}, budget, [&](ElemId cand) {
                        IdSet avoid = g->apply_set(set_union(ch.T, {rr}));
                        ElemId gib = g->apply_inverse(cand);
                        return !set_contains(avoid, gib) && !set_contains(ch.A, gib);
                    });
                    log.absorb_case = "red intersection";
                } else if (!bs.empty()) {
                    b = bs[0];
                    ElemId bb = b;
                    r = detail::pick_in_part(limit, v, {bb}, budget, [&](ElemId cand) {
                        IdSet avoid = g->apply_inverse_set(set_union(ch.U, {bb}));
                        ElemId gr = g->apply(cand);
                        return !set_contains(avoid, gr) && !set_contains(ch.A, gr);
                    });
                    log.absorb_case = "blue intersection";
                } else {
                    r = detail::pick_in_part(limit, v, {}, budget, [&](ElemId cand) {
                        ElemId gr = g->apply(cand);
                        return !set_contains(g->apply_inverse_set(ch.U), gr) &&
                               !set_contains(ch.A, gr);
                    });
                    ElemId rr = r;
                    b = detail::pick_in_part(limit, v, {rr}, budget, [&](ElemId cand) {
                        IdSet avoid = g->apply_set(set_union(ch.T, {rr}));
                        ElemId gib = g->apply_inverse(cand);
                        return !set_contains(avoid, gib) && !set_contains(ch.A, gib);
                    });
                    log.absorb_case = "fresh part";
                }
                ch.A = set_union(ch.A, make_set({v, r, b}));
                ch.T = set_union(ch.T, {r});
                ch.U = set_union(ch.U, {b});
            }
        }

        // ---- solve the (n-1)th scheduled problem ----
        if (static_cast<std::size_t>(n - 1) < ch.schedule.size()) {
            const RedBlueProblem prob = ch.schedule[static_cast<std::size_t>(n - 1)];
            QfType joint = detail::amalgamated_problem_type(limit, prob, ch.A);
            // realize the red point in general position (a fresh moved part
            // away from the triple and its g-spans)
            QfType rtype = joint.project(1);
            Tuple rt = realize_in_general_position(
                limit, *g, ch.A, set_union(ch.A, set_union(g->apply_set(ch.A), g->apply_inverse_set(ch.A))),
                rtype, budget);
            ElemId rtilde = rt[0];
            // the blue point: a part-mate of rtilde with the problem's edges
            QfType btype = LazyLimit::bind_prefix(joint, rt, 1);
            ElemId btilde = 0;
            bool found = false;
            for (int tries = 0; tries < 8 && !found; ++tries) {
                budget.charge("transversal blue point");
                btilde = limit.add_point(btype);
                if (g->apply(rtilde) != g->apply_inverse(btilde)) found = true;
            }
            if (!found) throw BudgetError("no blue point with distinct g-images");
            ch.A = set_union(ch.A, make_set({rtilde, btilde}));
            ch.T = set_union(ch.T, {rtilde});
            ch.U = set_union(ch.U, {btilde});
            ch.solved++;
            log.solved_problem = true;
            log.problem_canon = prob.canon;
            log.cond_realized = detail::problem_realized(limit.current(), prob, rtilde, btilde);
        } else {
            log.cond_realized = true;  // nothing scheduled yet
        }

        // ---- extend the schedule ----
        std::size_t before = ch.schedule.size();
        detail::extend_schedule(limit.current(), ch, rb_base_cap);
        log.cond_schedule = ch.schedule.size() >= before;

        // ---- verify the stage invariants ----
        log.cond_points = true;
        for (int k = 0; k < n && static_cast<std::size_t>(k) < window.size(); ++k)
            if (!set_contains(ch.A, window[static_cast<std::size_t>(k)])) log.cond_points = false;
        {
            IdSet gT = g->apply_set(ch.T);
            IdSet gInvU = g->apply_inverse_set(ch.U);
            bool ok = set_subset(set_intersect(gT, ch.A), ch.U) &&
                      set_subset(set_intersect(gInvU, ch.A), ch.T) && set_disjoint(gT, gInvU);
            log.cond_images = ok;
        }
        try {
            ch.triple(limit.current()).validate();
            log.triple_valid = true;
        } catch (const StructureError&) {
            log.triple_valid = false;
        }
        res.log.push_back(log);
    }
    return res;
}

/// The double-chain construction: (A_n, T_n, U_n) and (A_n, T_n, W_n) with
/// g(U_n) n A_n inside W_n and the mirror, both schedules advanced per stage.
inline TransversalResult double_transversal(LazyLimit& limit, LazyAutomorphism::Ptr g, int steps,
                                            Budget budget = {}, std::size_t rb_base_cap = 4) {
    if (limit.spec().name() != "semigeneric")
        throw StructureError("transversal construction runs over the semigeneric limit");
    {
        bool moved = false;
        for (ElemId v : g->probe_points())
            if (g->apply(v) != v) moved = true;
        if (!moved) throw HypothesisError("g acts as the identity on its seeded points");
    }
    g->set_prefer_fresh(true);
    TransversalResult res;
    TransversalChain& ch = res.chain;   // (A, T, U)
    res.second = TransversalChain{};    // (A, T, W)
    TransversalChain& ch2 = *res.second;
    IdSet window = limit.current().universe();

    detail::extend_schedule(limit.current(), ch, rb_base_cap);
    detail::extend_schedule(limit.current(), ch2, rb_base_cap);

    auto sync = [&]() {
        ch2.A = ch.A;
        ch2.T = ch.T;
    };

    for (int n = 1; n <= steps; ++n) {
        TransversalStageLog log;
        log.stage = n;
        ElemId v;
        if (static_cast<std::size_t>(n - 1) < window.size()) {
            v = window[static_cast<std::size_t>(n - 1)];
        } else {
            v = limit.add_point(detail::fresh_part_type(limit.current(), ch.A, {}));
            window = set_union(window, {v});
        }
        log.absorbed = v;

        IdSet part_in_A;
        for (ElemId a : ch.A)
            if (a == v || orthogonal(limit.current(), a, v)) part_in_A.push_back(a);
        if (!part_in_A.empty()) {
            ch.A = set_union(ch.A, {v});
            log.absorb_case = "part already met";
        } else {
            ElemId gv = g->apply(v);
            bool g_fixes_part = gv != v && orthogonal(limit.current(), v, gv);
            if (!g_fixes_part) {
                const IdSet scan = limit.current().universe();
                for (ElemId w : scan) {
                    if (w == v || !orthogonal(limit.current(), w, v)) continue;
                    ElemId gw = g->apply(w);
                    if (gw != w && (gw == v || orthogonal(limit.current(), gw, v))) {
                        g_fixes_part = true;
                        break;
                    }
                }
            }
            ElemId b, bp, r;
            if (g_fixes_part) {
                // take b in P, b' = g(b): both inside the part
                b = detail::pick_in_part(limit, v, {}, budget, [&](ElemId cand) {
                    ElemId gc = g->apply(cand);
                    return gc != cand && (gc == v || orthogonal(limit.current(), gc, cand));
                });
                bp = g->apply(b);
                r = detail::pick_in_part(limit, v, make_set({b, bp}), budget, [&](ElemId) { return true; });
                log.absorb_case = "part fixed setwise";
            } else {
                IdSet P;
                for (ElemId w : limit.current().universe())
                    if (w == v || orthogonal(limit.current(), w, v)) P.push_back(w);
                IdSet binvW = set_intersect(g->apply_inverse_set(ch2.U), P);
                IdSet bgU = set_intersect(g->apply_set(ch.U), P);
                b = binvW.empty()
                        ? detail::pick_in_part(limit, v, {}, budget, [&](ElemId) { return true; })
                        : binvW[0];
                bp = bgU.empty() ? detail::pick_in_part(limit, v, {b}, budget,
                                                        [&](ElemId) { return true; })
                                 : bgU[0];
                r = detail::pick_in_part(limit, v, make_set({b, bp}), budget,
                                         [&](ElemId) { return true; });
                log.absorb_case = "fresh part";
            }
            ch.A = set_union(ch.A, make_set({v, r, b, bp}));
            ch.T = set_union(ch.T, {r});
            ch.U = set_union(ch.U, {b});
            ch2.U = set_union(ch2.U, {bp});
        }
        sync();

        // ---- solve the scheduled problems of both chains ----
        bool realized_first = true, realized_second = true;
        if (static_cast<std::size_t>(n - 1) < ch.schedule.size()) {
            const RedBlueProblem prob = ch.schedule[static_cast<std::size_t>(n - 1)];
            QfType joint = detail::amalgamated_problem_type(limit, prob, ch.A);
            QfType rtype = joint.project(1);
            Tuple rt = realize_in_general_position(
                limit, *g, ch.A, set_union(ch.A, set_union(g->apply_set(ch.A), g->apply_inverse_set(ch.A))),
                rtype, budget);
            ElemId rtilde = rt[0];
            QfType btype = LazyLimit::bind_prefix(joint, rt, 1);
            ElemId btilde = limit.add_point(btype);
            // third point of the part for the second chain's transversal
            ElemId bptilde = 0;
            bool ok = false;
            for (int tries = 0; tries < 8 && !ok; ++tries) {
                budget.charge("transversal third point");
                bptilde = detail::add_part_mate(limit, rtilde);
                if (g->apply_inverse(bptilde) != g->apply(btilde)) ok = true;
            }
            if (!ok) throw BudgetError("no third point with distinct g-images");
            ch.A = set_union(ch.A, make_set({rtilde, btilde, bptilde}));
            ch.T = set_union(ch.T, {rtilde});
            ch.U = set_union(ch.U, {btilde});
            ch2.U = set_union(ch2.U, {bptilde});
            ch.solved++;
            log.solved_problem = true;
            log.problem_canon = prob.canon;
            realized_first = detail::problem_realized(limit.current(), prob, rtilde, btilde);
            sync();
        }
        if (static_cast<std::size_t>(n - 1) < ch2.schedule.size()) {
            const RedBlueProblem prob2 = ch2.schedule[static_cast<std::size_t>(n - 1)];
            QfType joint2 = detail::amalgamated_problem_type(limit, prob2, ch2.A);
            QfType rtype2 = joint2.project(1);
            Tuple rt2 = realize_in_general_position(
                limit, *g, ch2.A,
                set_union(ch2.A, set_union(g->apply_set(ch2.A), g->apply_inverse_set(ch2.A))), rtype2,
                budget);
            ElemId rhat = rt2[0];
            QfType bptype = LazyLimit::bind_prefix(joint2, rt2, 1);
            ElemId bphat = limit.add_point(bptype);
            ElemId bhat = 0;
            bool ok = false;
            for (int tries = 0; tries < 8 && !ok; ++tries) {
                budget.charge("transversal third point");
                bhat = detail::add_part_mate(limit, rhat);
                if (g->apply(bhat) != g->apply_inverse(bphat)) ok = true;
            }
            if (!ok) throw BudgetError("no third point with distinct g-images");
            ch.A = set_union(ch.A, make_set({rhat, bhat, bphat}));
            ch.T = set_union(ch.T, {rhat});
            ch.U = set_union(ch.U, {bhat});
            ch2.U = set_union(ch2.U, {bphat});
            ch2.solved++;
            realized_second = detail::problem_realized(limit.current(), prob2, rhat, bphat);
            sync();
        }
        log.cond_realized = realized_first && realized_second;

        std::size_t before = ch.schedule.size() + ch2.schedule.size();
        detail::extend_schedule(limit.current(), ch, rb_base_cap);
        detail::extend_schedule(limit.current(), ch2, rb_base_cap);
        log.cond_schedule = ch.schedule.size() + ch2.schedule.size() >= before;

        log.cond_points = true;
        for (int k = 0; k < n && static_cast<std::size_t>(k) < window.size(); ++k)
            if (!set_contains(ch.A, window[static_cast<std::size_t>(k)])) log.cond_points = false;
        {
            IdSet gU = g->apply_set(ch.U);
            IdSet gInvW = g->apply_inverse_set(ch2.U);
            log.cond_images = set_subset(set_intersect(gU, ch.A), ch2.U) &&
                              set_subset(set_intersect(gInvW, ch.A), ch.U);
        }
        try {
            ch.triple(limit.current()).validate();
            TransversalTriple t2{limit.current().induced(ch2.A), set_intersect(ch2.T, ch2.A),
                                 set_intersect(ch2.U, ch2.A)};
            t2.validate();
            log.triple_valid = true;
        } catch (const StructureError&) {
            log.triple_valid = false;
        }
        res.log.push_back(log);
    }
    return res;
}

}  // namespace fraisse
