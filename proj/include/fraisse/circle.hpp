#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fraisse/partite.hpp"
#include "fraisse/rational.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

inline std::string sj_name(int j) { return "S" + std::to_string(j); }

inline Signature circle_signature(int n) {
    std::vector<RelationSymbol> rels;
    for (int j = 0; j < n; ++j) rels.push_back({sj_name(j), 2});
    return Signature(rels);
}

/// A point q + 2*pi*k/n of the sector-shifted circle. Points with k = 0 are
/// exactly the rational-argument points; distinct (q, k) pairs are distinct
/// points, because a nonzero rational never equals a nonzero rational
/// multiple of pi.
struct CirclePoint {
    Rational q;
    int k = 0;
    int n = 2;

    CirclePoint() = default;
    CirclePoint(Rational q_, int k_, int n_) : q(std::move(q_)), k(k_), n(n_) {
        if (n < 2) throw StructureError("sector count must be >= 2");
        if (k < 0 || k >= n) throw StructureError("sector index out of range");
    }

    bool operator==(const CirclePoint& o) const { return q == o.q && k == o.k && n == o.n; }
    bool operator!=(const CirclePoint& o) const { return !(*this == o); }
    bool operator<(const CirclePoint& o) const {
        if (q != o.q) return q < o.q;
        if (k != o.k) return k < o.k;
        return n < o.n;
    }

    CirclePoint shifted(int m) const {
        int kk = ((k + m) % n + n) % n;
        return CirclePoint(q, kk, n);
    }

    /// Angle normalized into [0, 2*pi).
    QPi angle() const {
        QPi a(q, Rational(2 * k, n));
        while (a.sign() < 0) a = a + QPi(Rational(0), Rational(2));
        while ((a - QPi(Rational(0), Rational(2))).sign() >= 0) a = a - QPi(Rational(0), Rational(2));
        return a;
    }
};

/// Anticlockwise arc angle from u to v, in [0, 2*pi); zero only for u == v.
inline QPi arc_angle(const CirclePoint& u, const CirclePoint& v) {
    if (u.n != v.n) throw StructureError("sector counts differ");
    QPi a = v.angle() - u.angle();
    if (a.sign() < 0) a = a + QPi(Rational(0), Rational(2));
    return a;
}

/// Exact sign of alpha(u, v) - 2*pi*j/n.
inline int angle_compare(const CirclePoint& u, const CirclePoint& v, int j) {
    QPi diff = arc_angle(u, v) - QPi::pi_multiple(Rational(2 * j, u.n));
    if (diff.is_zero()) return 0;
    return diff.sign();
}

/// A finite set of circle points with a common sector count.
struct LocalOrderConfig {
    int n = 2;
    std::vector<CirclePoint> points;

    LocalOrderConfig() = default;
    LocalOrderConfig(int n_, std::vector<CirclePoint> pts) : n(n_), points(std::move(pts)) {
        for (auto& p : points)
            if (p.n != n) throw StructureError("point sector count mismatch");
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                if (points[i] == points[j]) throw StructureError("duplicate points in configuration");
    }

    std::optional<std::size_t> index_of(const CirclePoint& p) const {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i] == p) return i;
        return std::nullopt;
    }
};

/// The induced structure over {S_j}: S_j(u,v) iff 2*pi*j/n < alpha(u,v) <
/// 2*pi*(j+1)/n. Pairs whose arc is an exact multiple of 2*pi/n (distinct
/// sector copies of one base point) carry no S_j.
inline FiniteStructure eval_relation(const LocalOrderConfig& c) {
    FiniteStructure s(circle_signature(c.n));
    for (std::size_t i = 0; i < c.points.size(); ++i) s.add_element(static_cast<ElemId>(i));
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = 0; j < c.points.size(); ++j) {
            if (i == j) continue;
            for (int l = 0; l < c.n; ++l) {
                if (angle_compare(c.points[i], c.points[j], l) > 0 &&
                    angle_compare(c.points[i], c.points[j], l + 1) < 0) {
                    s.add_tuple(sj_name(l), {static_cast<ElemId>(i), static_cast<ElemId>(j)});
                    break;
                }
            }
        }
    return s;
}

/// A cut of the hat: a consecutive pair (u, u') of hat points whose open
/// interval misses the hat; the arc never exceeds 2*pi/n.
struct Cut {
    CirclePoint from, to;
    bool operator==(const Cut& o) const { return from == o.from && to == o.to; }
};

/// The hat: closure of the configuration under all sector shifts, deduped.
inline std::vector<CirclePoint> hat_points(const LocalOrderConfig& c) {
    std::vector<CirclePoint> out;
    for (const auto& p : c.points)
        for (int k = 0; k < c.n; ++k) {
            auto sp = p.shifted(k);
            bool dup = false;
            for (const auto& q : out)
                if (q == sp) dup = true;
            if (!dup) out.push_back(sp);
        }
    return out;
}

inline std::vector<CirclePoint> sort_anticlockwise(std::vector<CirclePoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const CirclePoint& a, const CirclePoint& b) {
        QPi d = a.angle() - b.angle();
        if (d.is_zero()) return false;
        return d.sign() < 0;
    });
    return pts;
}

/// All cuts of the hat of a nonempty configuration, anticlockwise from the
/// least point.
inline std::vector<Cut> cuts_of_hat(const LocalOrderConfig& c) {
    if (c.points.empty()) throw StructureError("configuration is empty");
    auto hat = sort_anticlockwise(hat_points(c));
    std::vector<Cut> cuts;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const auto& u = hat[i];
        const auto& v = hat[(i + 1) % hat.size()];
        QPi a = arc_angle(u, v);
        // consecutive hat points are at most one sector apart
        if ((a - QPi::pi_multiple(Rational(2, c.n))).sign() > 0)
            throw StructureError("hat closure broken: gap exceeds one sector");
        cuts.push_back({u, v});
    }
    return cuts;
}

/// Extension step of the back-and-forth for S(n): given an isomorphism f of
/// configurations (k = 0 points), a cut of the source hat and its image cut,
/// produce concrete rational witness points and certify the extension.
struct CutExtension {
    CirclePoint b0, b1;
    bool verified = false;
};

inline QPi two_pi() { return QPi::pi_multiple(Rational(2)); }

/// A rational-argument point strictly inside the open interval of a cut.
/// The rational is taken against the unnormalized upper end, which is fine:
/// the point's angle is read modulo 2*pi.
inline CirclePoint rational_point_in_cut(const Cut& cut, int n) {
    QPi lo = cut.from.angle();
    QPi hi = lo + arc_angle(cut.from, cut.to);
    Rational q = rational_strictly_between(lo, hi);
    return CirclePoint(q, 0, n);
}

inline CutExtension extend_in_cut(const LocalOrderConfig& c, const std::map<int, int>& f,
                                  const LocalOrderConfig& image, const Cut& cut, const Cut& image_cut) {
    for (const auto& p : c.points)
        if (p.k != 0) throw StructureError("extend_in_cut expects k = 0 configurations");
    auto src = eval_relation(c);
    auto tgt = eval_relation(image);
    PartialIso iso{&src, &tgt, {}};
    for (auto& [a, b] : f) iso.map[static_cast<ElemId>(a)] = static_cast<ElemId>(b);
    std::string why;
    if (!iso.valid(&why)) throw StructureError("f is not an isomorphism: " + why);
    if (iso.map.size() != c.points.size()) throw StructureError("f must be total on the configuration");

    // the hat extension maps (a, k) to (f(a), k); check the image cut matches
    auto fhat = [&](const CirclePoint& p) -> CirclePoint {
        for (std::size_t i = 0; i < c.points.size(); ++i)
            if (c.points[i].q == p.q && c.points[i].k == 0)
                return image.points[static_cast<std::size_t>(f.at(static_cast<int>(i)))].shifted(p.k);
        throw StructureError("cut endpoint is not a shift of a configuration point");
    };
    if (!(fhat(cut.from) == image_cut.from) || !(fhat(cut.to) == image_cut.to))
        throw StructureError("image cut does not correspond to the source cut");

    CutExtension ext;
    ext.b0 = rational_point_in_cut(cut, c.n);
    ext.b1 = rational_point_in_cut(image_cut, c.n);

    // certify: the extended map is a partial iso of the extended relations
    LocalOrderConfig c2 = c;
    c2.points.push_back(ext.b0);
    LocalOrderConfig i2 = image;
    i2.points.push_back(ext.b1);
    auto src2 = eval_relation(c2);
    auto tgt2 = eval_relation(i2);
    PartialIso iso2{&src2, &tgt2, {}};
    for (auto& [a, b] : f) iso2.map[static_cast<ElemId>(a)] = static_cast<ElemId>(b);
    iso2.map[static_cast<ElemId>(c.points.size())] = static_cast<ElemId>(image.points.size());
    ext.verified = iso2.valid();
    return ext;
}

// --------------------------------------------------------------------------
// Sector unfolding
// --------------------------------------------------------------------------

/// One element of the unfolded n-coloured linear order.
struct ChainEntry {
    CirclePoint original;   // the configuration point (k = 0)
    CirclePoint landed;     // its sector copy inside <a, a^1>
    int colour = 0;
    QPi position;           // alpha(a, landed)
};

struct ColouredChain {
    int n = 2;
    CirclePoint anchor;
    std::vector<ChainEntry> entries;  // ascending positions

    /// The chain as a finite coloured linear order; element ids are the
    /// entry indices.
    FiniteStructure to_structure() const {
        FiniteStructure s(coloured_order_signature(n));
        for (std::size_t i = 0; i < entries.size(); ++i) s.add_element(static_cast<ElemId>(i));
        for (std::size_t i = 0; i < entries.size(); ++i) {
            s.add_tuple("chi" + std::to_string(entries[i].colour), {static_cast<ElemId>(i)});
            for (std::size_t j = i + 1; j < entries.size(); ++j)
                s.add_tuple("<", {static_cast<ElemId>(i), static_cast<ElemId>(j)});
        }
        return s;
    }
};

/// Unfolds a configuration into the sector <a, a^1>: each point v != a maps
/// to its unique sector copy v^k landing there, ordered by the arc from a and
/// coloured k. The anchor is removed if present.
inline ColouredChain sector_unfold(const CirclePoint& a, const LocalOrderConfig& c) {
    if (a.k != 0) throw StructureError("anchor must have k = 0");
    ColouredChain chain;
    chain.n = c.n;
    chain.anchor = a;
    for (const auto& v : c.points) {
        if (v.k != 0) throw StructureError("sector_unfold expects k = 0 configurations");
        if (v == a) continue;
        if (v.q == a.q) throw StructureError("point coincides with a sector copy of the anchor");
        bool placed = false;
        for (int k = 0; k < c.n && !placed; ++k) {
            auto copy = v.shifted(k);
            QPi pos = arc_angle(a, copy);
            if (pos.sign() > 0 && (pos - QPi::pi_multiple(Rational(2, c.n))).sign() < 0) {
                chain.entries.push_back({v, copy, k, pos});
                placed = true;
            }
        }
        if (!placed) throw StructureError("no sector copy lands in the anchor interval");
    }
    std::sort(chain.entries.begin(), chain.entries.end(), [](const ChainEntry& x, const ChainEntry& y) {
        QPi d = x.position - y.position;
        if (d.is_zero()) return false;
        return d.sign() < 0;
    });
    return chain;
}

/// Inverse of sector_unfold.
inline LocalOrderConfig sector_fold(const ColouredChain& chain) {
    std::vector<CirclePoint> pts;
    for (const auto& e : chain.entries) pts.push_back(e.landed.shifted(-e.colour));
    return LocalOrderConfig(chain.n, std::move(pts));
}

// --------------------------------------------------------------------------
// Realizability of abstract circular constraints
// --------------------------------------------------------------------------

struct CircleUnsat {
    int branches_tried = 0;
    std::string reason;
};

namespace detail {

/// One strict difference constraint theta_v - theta_u < bound.
struct DiffConstraint {
    int u, v;
    QPi bound;
};

struct FMResult {
    bool feasible = false;
    std::vector<QPi> values;  // per variable
};

/// Fourier-Motzkin on strict difference constraints; variable 0 is anchored
/// at zero. Returns exact QPi values on success.
inline FMResult solve_difference_system(int nvars, std::vector<DiffConstraint> cons) {
    FMResult res;
    std::vector<std::vector<DiffConstraint>> stages;
    for (int x = nvars - 1; x >= 1; --x) {
        stages.push_back(cons);
        std::vector<DiffConstraint> next;
        std::vector<DiffConstraint> uppers, lowers;
        for (const auto& c : cons) {
            if (c.v == x && c.u == x) {
                if (c.bound.sign() <= 0) return res;  // theta_x - theta_x < c needs c > 0
            } else if (c.v == x) {
                uppers.push_back(c);  // theta_x < theta_u + bound
            } else if (c.u == x) {
                lowers.push_back(c);  // theta_v > theta_x - ... wait: theta_v - theta_x < b
            } else {
                next.push_back(c);
            }
        }
        for (const auto& up : uppers)
            for (const auto& lo : lowers) {
                // theta_x - theta_{up.u} < up.bound  and  theta_{lo.v} - theta_x < lo.bound
                // => theta_{lo.v} - theta_{up.u} < up.bound + lo.bound
                if (lo.v == up.u) {
                    if ((up.bound + lo.bound).sign() <= 0) return res;
                } else {
                    next.push_back({up.u, lo.v, up.bound + lo.bound});
                }
            }
        cons = std::move(next);
    }
    for (const auto& c : cons) {
        // only variable 0 left
        if (c.bound.sign() <= 0) return res;
    }
    // back-substitute in reverse elimination order
    res.values.assign(static_cast<std::size_t>(nvars), QPi());
    for (int x = 1; x < nvars; ++x) {
        const auto& stage = stages[static_cast<std::size_t>(nvars - 1 - x)];
        std::optional<QPi> lo, hi;
        for (const auto& c : stage) {
            bool known_u = c.u < x || c.u == 0, known_v = c.v < x || c.v == 0;
            if (c.v == x && c.u < x && known_u) {
                QPi bound = res.values[static_cast<std::size_t>(c.u)] + c.bound;
                if (!hi || (bound - *hi).sign() < 0) hi = bound;
            } else if (c.u == x && c.v < x && known_v) {
                QPi bound = res.values[static_cast<std::size_t>(c.v)] - c.bound;
                if (!lo || (bound - *lo).sign() > 0) lo = bound;
            }
        }
        if (!lo || !hi) {
            // unconstrained on one side: widen with +-(2 pi) around the known side
            QPi fallback = lo ? *lo + QPi(Rational(1), Rational(0))
                              : (hi ? *hi - QPi(Rational(1), Rational(0)) : QPi(Rational(0), Rational(0)));
            if (!lo) lo = fallback - QPi(Rational(2), Rational(0));
            if (!hi) hi = fallback + QPi(Rational(2), Rational(0));
        }
        Rational mid = rational_strictly_between(*lo, *hi);
        res.values[static_cast<std::size_t>(x)] = QPi(mid, Rational(0));
    }
    res.feasible = true;
    return res;
}

}  // namespace detail

/// Decides whether an abstract structure over {S_j | j < n} is realizable by
/// circle points. Branches over anticlockwise orderings (one anchor at angle
/// zero) and, for each non-adjacent pair, over the exact sector offset; each
/// branch is an open system of difference constraints with constants that are
/// rational multiples of 2*pi/n, solved by exact elimination with
/// interval-refined pi. Returns a configuration (re-verified against the
/// input) or an unsat certificate.
inline std::variant<LocalOrderConfig, CircleUnsat> circle_realizable(const FiniteStructure& abstract,
                                                                     int n) {
    const IdSet& u = abstract.universe();
    std::size_t m = u.size();
    if (m > 8) throw StructureError("circle_realizable supports at most 8 points");
    if (m == 0) return LocalOrderConfig(n, {});

    // consistency pre-checks
    auto rel_of = [&](ElemId x, ElemId y) -> std::optional<int> {
        std::optional<int> found;
        for (int j = 0; j < n; ++j)
            if (abstract.has_tuple(sj_name(j), {x, y})) {
                if (found) throw StructureError("more than one S_j on a pair");
                found = j;
            }
        return found;
    };
    for (ElemId x : u) {
        for (int j = 0; j < n; ++j)
            if (abstract.has_tuple(sj_name(j), {x, x})) throw StructureError("irreflexivity violated");
        for (ElemId y : u) {
            if (x == y) continue;
            auto f = rel_of(x, y), g = rel_of(y, x);
            if (f.has_value() != g.has_value() || (f && *g != n - 1 - *f))
                throw StructureError("inconsistent converse relations");
        }
    }

    std::map<ElemId, std::size_t> pos;
    for (std::size_t i = 0; i < m; ++i) pos[u[i]] = i;

    // collect non-adjacent pairs (exact-offset pairs)
    std::vector<std::pair<std::size_t, std::size_t>> exact_pairs;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (!rel_of(u[i], u[j]).has_value()) exact_pairs.emplace_back(i, j);

    CircleUnsat unsat;
    std::vector<std::size_t> rest;
    for (std::size_t i = 1; i < m; ++i) rest.push_back(i);

    std::vector<int> offsets(exact_pairs.size(), 1);
    std::optional<LocalOrderConfig> answer;

    // iterate over circular orders: permutations of the non-anchor points
    std::vector<std::size_t> order = rest;
    do {
        // position of a point in the anticlockwise order (anchor first)
        std::vector<int> rank(m, 0);
        for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i) + 1;

        std::function<bool(std::size_t)> try_offsets = [&](std::size_t ei) -> bool {
            if (ei < exact_pairs.size()) {
                for (int off = 1; off < n; ++off) {
                    offsets[ei] = off;
                    if (try_offsets(ei + 1)) return true;
                }
                return false;
            }
            ++unsat.branches_tried;
            std::vector<detail::DiffConstraint> cons;
            QPi twoPi = QPi::pi_multiple(Rational(2));
            // chain 0 < theta_{o1} < ... < theta_{ok} < 2 pi, strict, as
            // difference constraints against the anchor (variable 0)
            for (std::size_t i = 0; i < m; ++i) {
                if (i == 0) continue;
                cons.push_back({static_cast<int>(i), 0, QPi(Rational(0), Rational(0))});  // 0 - th_i < 0
                cons.push_back({0, static_cast<int>(i), twoPi});                          // th_i - 0 < 2 pi
            }
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    if (i == j) continue;
                    // rank order: theta_i < theta_j, i.e. theta_i - theta_j < 0
                    if (rank[i] < rank[j]) cons.push_back({static_cast<int>(j), static_cast<int>(i),
                                                           QPi(Rational(0), Rational(0))});
                    // the wrap for alpha(i, j): +2 pi when j precedes i
                    auto rel = rel_of(u[i], u[j]);
                    if (!rel) continue;
                    QPi wrap = rank[j] < rank[i] ? twoPi : QPi(Rational(0), Rational(0));
                    // 2 pi rel / n < th_j - th_i + wrap < 2 pi (rel+1) / n
                    QPi lo = QPi::pi_multiple(Rational(2 * *rel, n)) - wrap;
                    QPi hi = QPi::pi_multiple(Rational(2 * (*rel + 1), n)) - wrap;
                    cons.push_back({static_cast<int>(j), static_cast<int>(i), -lo});  // th_i - th_j < -lo
                    cons.push_back({static_cast<int>(i), static_cast<int>(j), hi});
                }
            // exact-offset pairs are equalities: substitute one side out of
            // the system instead of encoding them as inequalities
            std::vector<int> sub_to(m, -1);     // substituted-to representative
            std::vector<QPi> sub_off(m, QPi()); // theta_x = theta_{sub_to[x]} + sub_off[x]
            auto find_root = [&](std::size_t x, QPi& acc) {
                while (sub_to[x] != -1) {
                    acc = acc + sub_off[x];
                    x = static_cast<std::size_t>(sub_to[x]);
                }
                return x;
            };
            for (std::size_t ei2 = 0; ei2 < exact_pairs.size(); ++ei2) {
                auto [i, j] = exact_pairs[ei2];
                QPi off = QPi::pi_multiple(Rational(2 * offsets[ei2], n));
                if (rank[j] < rank[i]) off = off - twoPi;
                // constraint: theta_j = theta_i + off (wrap folded in)
                QPi ai = QPi(Rational(0), Rational(0)), aj = ai;
                std::size_t ri = find_root(i, ai), rj = find_root(j, aj);
                if (ri == rj) {
                    if (!(ai + off - aj).is_zero()) return false;  // inconsistent cycle
                    continue;
                }
                // theta_rj = theta_ri + (ai + off - aj)
                sub_to[rj] = static_cast<int>(ri);
                sub_off[rj] = ai + off - aj;
            }
            std::vector<detail::DiffConstraint> cons2;
            auto resolve = [&](int x, QPi& extra, int sgn) {
                while (sub_to[static_cast<std::size_t>(x)] != -1) {
                    extra = extra + sub_off[static_cast<std::size_t>(x)].scaled(Rational(sgn));
                    x = sub_to[static_cast<std::size_t>(x)];
                }
                return x;
            };
            for (auto c : cons) {
                QPi bound = c.bound;
                // theta_v - theta_u < bound ; theta_v = theta_root_v + off_v
                int v = resolve(c.v, bound, -1);
                int uu = resolve(c.u, bound, +1);
                if (v == uu) {
                    if (bound.sign() <= 0) return false;
                    continue;
                }
                cons2.push_back({uu, v, bound});
            }
            // compact variables
            std::vector<int> re(m, -1);
            int nv = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (sub_to[i] == -1) re[i] = nv++;
            for (auto& c : cons2) {
                c.u = re[static_cast<std::size_t>(c.u)];
                c.v = re[static_cast<std::size_t>(c.v)];
            }
            auto fm = detail::solve_difference_system(nv, cons2);
            if (!fm.feasible) return false;
            // assemble points: representatives get rational angles, exact
            // partners get the representative's q with a sector shift
            std::vector<CirclePoint> pts(m, CirclePoint(Rational(0), 0, n));
            for (std::size_t i = 0; i < m; ++i) {
                if (sub_to[i] != -1) continue;
                QPi val = fm.values[static_cast<std::size_t>(re[i])];
                if (!val.s.is_zero()) return false;  // representatives must be rational
                pts[i] = CirclePoint(val.r, 0, n);
            }
            for (std::size_t i = 0; i < m; ++i) {
                if (sub_to[i] == -1) continue;
                QPi acc = QPi(Rational(0), Rational(0));
                std::size_t root = find_root(i, acc);
                // theta_i = theta_root + acc; acc = q-part + pi-part
                Rational qpart = pts[root].q + acc.r;
                Rational spart = acc.s;  // multiple of 2/n (possibly shifted by 2)
                Rational sector = spart * Rational(n, 2);
                BigInt num = boost::multiprecision::numerator(sector);
                BigInt den = boost::multiprecision::denominator(sector);
                if (den != 1) return false;
                long long k = num.convert_to<long long>();
                long long kk = ((k % n) + n) % n;
                pts[i] = CirclePoint(qpart, static_cast<int>(kk), n);
            }
            LocalOrderConfig cfg(n, pts);
            // re-verify against the abstract structure
            auto realized = eval_relation(cfg);
            FiniteStructure relabeled(circle_signature(n));
            for (ElemId x : u) relabeled.add_element(x);
            for (int j = 0; j < n; ++j)
                for (const auto& t : realized.tuples(sj_name(j)))
                    relabeled.add_tuple(sj_name(j), {u[t[0]], u[t[1]]});
            if (!relabeled.equals(abstract)) return false;
            answer = cfg;
            return true;
        };
        if (try_offsets(0)) break;
    } while (std::next_permutation(order.begin(), order.end()));

    if (answer) return *answer;
    unsat.reason = "all orderings and sector offsets are infeasible";
    return unsat;
}

// --------------------------------------------------------------------------
// The oriented graph on the doubled circle (n = 2)
// --------------------------------------------------------------------------

/// Edges of the doubled local order: u -> v iff alpha(u, v) < pi; antipodal
/// pairs are non-adjacent. Requires the configuration closed under the shift.
inline FiniteStructure sdd2_edges(const LocalOrderConfig& c) {
    if (c.n != 2) throw StructureError("doubled circle requires n = 2");
    for (const auto& p : c.points)
        if (!c.index_of(p.shifted(1))) throw StructureError("configuration not closed under the antipode");
    FiniteStructure s(Signature({{"->", 2}}));
    for (std::size_t i = 0; i < c.points.size(); ++i) s.add_element(static_cast<ElemId>(i));
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = 0; j < c.points.size(); ++j) {
            if (i == j) continue;
            QPi a = arc_angle(c.points[i], c.points[j]);
            int cmp = (a - QPi::pi_multiple(Rational(1))).sign();
            if (cmp < 0) s.add_tuple("->", {static_cast<ElemId>(i), static_cast<ElemId>(j)});
        }
    return s;
}

/// The antipodal involution as a PartialIso of sdd2_edges(c).
inline std::map<int, int> sdd2_sigma(const LocalOrderConfig& c) {
    std::map<int, int> sigma;
    for (std::size_t i = 0; i < c.points.size(); ++i)
        sigma[static_cast<int>(i)] = static_cast<int>(*c.index_of(c.points[i].shifted(1)));
    return sigma;
}

// --------------------------------------------------------------------------
// The no-dense-conjugacy witness
// --------------------------------------------------------------------------

struct NoDenseConjugacyWitness {
    LocalOrderConfig A;                 // the (n+1)-point cycle configuration
    std::map<int, int> fA;              // the cyclic shift, verified
    Rational q;                         // the chosen rational step
    std::vector<FiniteStructure> obstructions;  // per l < n: A + b with S_l(b, a_k)
    std::vector<bool> obstruction_unsat;        // circle_realizable verdicts
    bool fA_verified = false;
};

/// The witness pair for the failure of joint embedding of partial
/// automorphisms over S(n): an (n+1)-cycle with rational step q strictly
/// between 2*pi*(n-1)/n^2 and 2*pi/n, its cyclic shift, and the one-point
/// obstruction structures, each certified unrealizable.
inline NoDenseConjugacyWitness no_dense_conjugacy_witness(int n) {
    if (n < 2) throw StructureError("n must be >= 2");
    Rational q;
    if (n == 2) q = Rational(2);
    else if (n == 3) q = Rational(19, 10);
    else {
        QPi lo = QPi::pi_multiple(Rational(2 * (n - 1), n * n));
        QPi hi = QPi::pi_multiple(Rational(2, n));
        q = rational_strictly_between(lo, hi);
    }
    NoDenseConjugacyWitness w;
    w.q = q;
    std::vector<CirclePoint> pts;
    for (int k = 0; k <= n; ++k) pts.emplace_back(q * k, 0, n);
    w.A = LocalOrderConfig(n, pts);
    for (int k = 0; k <= n; ++k) w.fA[k] = (k + 1) % (n + 1);

    auto rel = eval_relation(w.A);
    PartialIso iso{&rel, &rel, {}};
    for (auto& [a, b] : w.fA) iso.map[static_cast<ElemId>(a)] = static_cast<ElemId>(b);
    w.fA_verified = iso.valid();

    for (int l = 0; l < n; ++l) {
        FiniteStructure obs(circle_signature(n));
        for (ElemId v = 0; v <= static_cast<ElemId>(n) + 1; ++v) obs.add_element(v);
        ElemId b = static_cast<ElemId>(n) + 1;
        for (int j = 0; j < n; ++j)
            for (const auto& t : rel.tuples(sj_name(j))) obs.add_tuple(sj_name(j), t);
        for (ElemId k = 0; k <= static_cast<ElemId>(n); ++k) {
            obs.add_tuple(sj_name(l), {b, k});
            obs.add_tuple(sj_name(n - 1 - l), {k, b});
        }
        auto res = circle_realizable(obs, n);
        w.obstructions.push_back(obs);
        w.obstruction_unsat.push_back(std::holds_alternative<CircleUnsat>(res));
    }
    return w;
}

}  // namespace fraisse
