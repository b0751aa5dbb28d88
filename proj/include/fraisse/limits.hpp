#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/classes.hpp"
#include "fraisse/structure.hpp"

namespace fraisse {

/// One scheduled extension problem: a one-point qftp extension over a base
/// snapshot (the base ids are the type's parameters).
struct ExtensionProblem {
    QfType target;
    int scheduled_at = 0;
};

namespace detail {

/// Fast realization check for a 1-point type: assumes the parameters' own
/// data already matches (they are literally the same elements) and compares
/// only the content involving the new point.
inline bool realizes_point(const FiniteStructure& s, ElemId w, const QfType& t) {
    if (t.tuple_len != 1) throw StructureError("expected a 1-point type");
    int p = static_cast<int>(t.params.size());
    if (t.tuple_code[0] < p) return w == t.params[static_cast<std::size_t>(t.tuple_code[0])];
    if (set_contains(t.params, w)) return false;
    if (!s.has_element(w)) return false;

    const auto& rels = s.signature().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
        int arity = rels[r].arity;
        // index tuples over {0..p} containing the new index p, decoded with w
        Tuple t_ids(static_cast<std::size_t>(arity));
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        const auto& content = t.rel_content[r];
        std::function<bool(int, bool)> rec = [&](int pos, bool uses_new) -> bool {
            if (pos == arity) {
                if (!uses_new) return true;
                bool expected = std::binary_search(content.begin(), content.end(), idx);
                if (s.has_tuple(static_cast<int>(r), t_ids) != expected) return false;
                return true;
            }
            for (int i = 0; i <= p; ++i) {
                idx[static_cast<std::size_t>(pos)] = i;
                t_ids[static_cast<std::size_t>(pos)] = i < p ? t.params[static_cast<std::size_t>(i)] : w;
                if (!rec(pos + 1, uses_new || i == p)) return false;
            }
            return true;
        };
        if (!rec(0, false)) return false;
    }
    const auto& funs = s.signature().functions();
    for (std::size_t f = 0; f < funs.size(); ++f) {
        // expected pairs involving the new index
        for (auto& [ai, vi] : t.fun_content[f]) {
            if (ai != p && vi != p) continue;
            ElemId arg = ai == p ? w : t.params[static_cast<std::size_t>(ai)];
            ElemId val = vi == p ? w : t.params[static_cast<std::size_t>(vi)];
            if (s.function_value(static_cast<int>(f), arg) != val) return false;
        }
        // and absences: f(w) inside the domain not recorded means mismatch
        ElemId fw = s.function_value(static_cast<int>(f), w);
        bool fw_in = fw == w || set_contains(t.params, fw);
        bool recorded = false;
        for (auto& [ai, vi] : t.fun_content[f])
            if (ai == p) recorded = true;
        if (fw_in != recorded) return false;
        for (ElemId pr : t.params) {
            ElemId fp = s.function_value(static_cast<int>(f), pr);
            auto pi = std::lower_bound(t.params.begin(), t.params.end(), pr) - t.params.begin();
            bool hits_new = fp == w;
            bool rec_new = false;
            for (auto& [ai, vi] : t.fun_content[f])
                if (ai == static_cast<int>(pi) && vi == p) rec_new = true;
            if (hits_new != rec_new) return false;
        }
    }
    return true;
}

}  // namespace detail

/// A growing finite approximation of a Fraissé limit: class-valid at every
/// stage, grown by realizing scheduled one-point extension problems, fully
/// deterministic given (class, steps, seed).
class LazyLimit {
public:
    LazyLimit(ClassSpecPtr spec, std::uint64_t seed)
        : spec_(std::move(spec)), cur_(spec_->bootstrap()), rng_(seed), seed_(seed) {}

    static LazyLimit build(ClassSpecPtr spec, int steps, std::uint64_t seed) {
        LazyLimit l(std::move(spec), seed);
        for (int i = 0; i < steps; ++i) l.step();
        return l;
    }

    const FiniteStructure& current() const { return cur_; }
    const ClassSpec& spec() const { return *spec_; }
    ClassSpecPtr spec_ptr() const { return spec_; }
    std::uint64_t seed() const { return seed_; }
    int stage() const { return stage_; }
    int growth_count() const { return growths_; }

    /// Direct mutation access for the automorphism clone path (single-writer
    /// contract: a limit and its automorphisms form one mutation domain).
    FiniteStructure& mutable_current() { return cur_; }
    void note_growth() { ++growths_; }

    /// One schedule round: enqueue one sampled problem, then dequeue and
    /// realize up to two problems (so anything scheduled by stage N/2 is
    /// realized by stage N).
    void step() {
        ++stage_;
        sample_problem();
        for (int k = 0; k < 2 && !schedule_.empty(); ++k) {
            ExtensionProblem prob = std::move(schedule_.front());
            schedule_.pop_front();
            realize(prob.target);
        }
    }

    /// Least existing realization of a 1-point type, if any.
    std::optional<ElemId> find_realization(const QfType& t, const IdSet& forbid = {}) const {
        for (ElemId w : cur_.universe())
            if (!set_contains(forbid, w) && detail::realizes_point(cur_, w, t)) return w;
        return std::nullopt;
    }

    /// Find-or-add realization of a 1-point type over parameters inside the
    /// current universe.
    ElemId realize(const QfType& t, const IdSet& forbid = {}) {
        if (auto w = find_realization(t, forbid)) return *w;
        return add_point(t);
    }

    /// Forced growth: adds a fresh point realizing the type, completing its
    /// relations to the rest of the structure through the class rule.
    ElemId add_point(const QfType& t, bool x_left = true) {
        if (t.tuple_len != 1) throw StructureError("add_point expects a 1-point type");
        for (ElemId v : t.params) cur_.require_element(v);
        ElemId x = detail::materialize_extension(cur_, t);
        spec_->complete_new_point(cur_, x, t.params, x_left);
        ++growths_;
        if (!detail::realizes_point(cur_, x, t))
            throw StructureError("realized point does not satisfy its extension type");
        return x;
    }

    /// A positive relational pin for add_point_pinned: the placeholder id in
    /// the tuple stands for the new point.
    struct Pin {
        static constexpr ElemId placeholder = static_cast<ElemId>(-1);
        std::string relation;
        Tuple tuple;
    };

    /// Adds a fresh point realizing `t`, with extra positive tuples against
    /// points outside the type's parameters, the rest completed by the class
    /// rule (which never overrides a decided pair).
    ElemId add_point_pinned(const QfType& t, const std::vector<Pin>& pins, bool x_left = true) {
        if (t.tuple_len != 1) throw StructureError("add_point_pinned expects a 1-point type");
        ElemId x = detail::materialize_extension(cur_, t);
        for (const auto& pin : pins) {
            Tuple tup = pin.tuple;
            for (ElemId& v : tup)
                if (v == Pin::placeholder) v = x;
            cur_.add_tuple(pin.relation, tup);
        }
        spec_->complete_new_point(cur_, x, t.params, x_left);
        ++growths_;
        if (!detail::realizes_point(cur_, x, t))
            throw StructureError("pinned point does not satisfy its extension type");
        return x;
    }

    /// Realizes a whole tuple type coordinate by coordinate. Coordinates that
    /// repeat earlier coordinates or parameters reuse those elements.
    Tuple realize_tuple(const QfType& t, const IdSet& forbid = {}, bool force_fresh = false) {
        Tuple out;
        int p = static_cast<int>(t.params.size());
        for (int j = 0; j < t.tuple_len; ++j) {
            int code = t.tuple_code[static_cast<std::size_t>(j)];
            if (code < p) {
                out.push_back(t.params[static_cast<std::size_t>(code)]);
                continue;
            }
            bool repeat = false;
            for (int i = 0; i < j; ++i)
                if (t.tuple_code[static_cast<std::size_t>(i)] == code) {
                    out.push_back(out[static_cast<std::size_t>(i)]);
                    repeat = true;
                    break;
                }
            if (repeat) continue;
            QfType step = bind_prefix(t, out, j);
            IdSet avoid = set_union(forbid, make_set(out));
            if (force_fresh) {
                out.push_back(add_point(step));
            } else {
                out.push_back(realize(step, avoid));
            }
        }
        return out;
    }

    /// The 1-point type of coordinate j of `t` over params plus the already
    /// realized prefix.
    static QfType bind_prefix(const QfType& t, const Tuple& prefix, int j) {
        int p = static_cast<int>(t.params.size());
        // actual ids for canonical indices < p + j's distinct news
        std::map<int, ElemId> id_of;
        for (int i = 0; i < p; ++i) id_of[i] = t.params[static_cast<std::size_t>(i)];
        for (int i = 0; i < j; ++i) id_of[t.tuple_code[static_cast<std::size_t>(i)]] = prefix[static_cast<std::size_t>(i)];
        int jcode = t.tuple_code[static_cast<std::size_t>(j)];

        QfType out;
        out.tuple_len = 1;
        IdSet params2;
        for (auto& [ci, id] : id_of) params2.push_back(id);
        params2 = make_set(params2);
        out.params = params2;
        out.new_count = 1;
        out.tuple_code = {static_cast<int>(params2.size())};
        auto reindex = [&](int ci) -> int {
            if (ci == jcode) return static_cast<int>(params2.size());
            auto it = id_of.find(ci);
            if (it == id_of.end()) return -1;
            return static_cast<int>(std::lower_bound(params2.begin(), params2.end(), it->second) -
                                    params2.begin());
        };
        out.rel_content.resize(t.rel_content.size());
        for (std::size_t r = 0; r < t.rel_content.size(); ++r) {
            for (const auto& enc : t.rel_content[r]) {
                std::vector<int> enc2;
                bool ok = true;
                for (int ci : enc) {
                    int ni = reindex(ci);
                    if (ni == -1) {
                        ok = false;
                        break;
                    }
                    enc2.push_back(ni);
                }
                if (ok) out.rel_content[r].push_back(std::move(enc2));
            }
            std::sort(out.rel_content[r].begin(), out.rel_content[r].end());
        }
        out.fun_content.resize(t.fun_content.size());
        for (std::size_t f = 0; f < t.fun_content.size(); ++f) {
            for (auto& [ai, vi] : t.fun_content[f]) {
                int na = reindex(ai), nv = reindex(vi);
                if (na != -1 && nv != -1) out.fun_content[f].emplace_back(na, nv);
            }
            std::sort(out.fun_content[f].begin(), out.fun_content[f].end());
        }
        return out;
    }

private:
    void sample_problem() {
        const IdSet& u = cur_.universe();
        IdSet base;
        if (!u.empty()) {
            std::uint64_t max_base = std::min<std::uint64_t>(3, u.size());
            std::uint64_t k = rng_.below(max_base + 1);
            while (base.size() < k) {
                ElemId v = u[rng_.below(u.size())];
                if (!set_contains(base, v)) base = set_union(base, {v});
            }
        }
        base = cur_.function_closure(base);
        auto exts = spec_->one_point_extensions(cur_, base);
        if (exts.empty()) return;
        auto pick = exts[rng_.below(exts.size())];
        schedule_.push_back({std::move(pick), stage_});
    }

    ClassSpecPtr spec_;
    FiniteStructure cur_;
    std::deque<ExtensionProblem> schedule_;
    SplitMix64 rng_;
    std::uint64_t seed_;
    int stage_ = 0;
    int growths_ = 0;
};

/// Report of an extension-property audit on a window of the limit.
struct ExtensionPropertyReport {
    int bases_checked = 0;
    int types_checked = 0;
    int found_existing = 0;
    int realized_by_growth = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty() && types_checked > 0; }
};

/// For every substructure of size <= k of a seeded sample window and every
/// class-valid one-point extension of it, checks that a realization exists or
/// can be produced within the growth budget.
inline ExtensionPropertyReport verify_extension_property(LazyLimit& limit, int k, int budget,
                                                         std::size_t window_size = 12) {
    ExtensionPropertyReport rep;
    SplitMix64 rng(limit.seed() ^ 0x5bd1e995u);
    const IdSet& u = limit.current().universe();
    IdSet window;
    if (u.size() <= window_size) {
        window = u;
    } else {
        while (window.size() < window_size) {
            ElemId v = u[rng.below(u.size())];
            if (!set_contains(window, v)) window = set_union(window, {v});
        }
    }
    int grown = 0;
    for (int size = 0; size <= k; ++size) {
        detail::for_each_subset(window, size, [&](const Tuple& base_t) {
            ++rep.bases_checked;
            IdSet base = limit.current().function_closure(make_set(base_t));
            for (const auto& ext : limit.spec().one_point_extensions(limit.current(), base)) {
                ++rep.types_checked;
                if (limit.find_realization(ext)) {
                    ++rep.found_existing;
                    continue;
                }
                if (grown >= budget) {
                    rep.failures.push_back("growth budget exhausted on a type over base of size " +
                                           std::to_string(base.size()));
                    return;
                }
                limit.add_point(ext);
                ++grown;
                ++rep.realized_by_growth;
            }
        });
    }
    return rep;
}

// --------------------------------------------------------------------------
// Lazy automorphisms
// --------------------------------------------------------------------------

/// A partial automorphism of the lazy limit, extended on demand by
/// back-and-forth with the least-realization strategy, plus word structure
/// (inverse, composition, commutator) evaluated by querying components.
class LazyAutomorphism {
public:
    using Ptr = std::shared_ptr<LazyAutomorphism>;

    static Ptr atom(LazyLimit& host, const std::map<ElemId, ElemId>& seed) {
        auto p = Ptr(new LazyAutomorphism(Kind::Atom, &host));
        const auto& s = host.current();
        PartialIso iso{&s, &s, seed};
        std::string why;
        if (!iso.valid(&why)) throw StructureError("seed map is not a partial automorphism: " + why);
        p->fwd_ = seed;
        for (auto& [v, w] : seed) p->bwd_[w] = v;
        if (p->bwd_.size() != p->fwd_.size()) throw StructureError("seed map is not injective");
        return p;
    }

    static Ptr inverse_of(Ptr g) {
        auto p = Ptr(new LazyAutomorphism(Kind::Inverse, g->host_));
        p->a_ = std::move(g);
        return p;
    }

    /// compose(g, h) applies h first: x -> g(h(x)).
    static Ptr compose(Ptr g, Ptr h) {
        if (g->host_ != h->host_) throw StructureError("automorphisms live on different limits");
        auto p = Ptr(new LazyAutomorphism(Kind::Compose, g->host_));
        p->a_ = std::move(g);
        p->b_ = std::move(h);
        return p;
    }

    /// [g, h] = g^{-1} h^{-1} g h.
    static Ptr commutator(Ptr g, Ptr h) {
        if (g->host_ != h->host_) throw StructureError("automorphisms live on different limits");
        auto p = Ptr(new LazyAutomorphism(Kind::Commutator, g->host_));
        p->a_ = std::move(g);
        p->b_ = std::move(h);
        return p;
    }

    LazyLimit& host() { return *host_; }
    bool is_atom() const { return kind_ == Kind::Atom; }

    /// Switches the extension strategy of every atom under this word to
    /// fresh-image mode: new values are brand-new points instead of least
    /// existing realizations. Used by the chain constructions, which need
    /// images off the previously fixed sets.
    void set_prefer_fresh(bool on) {
        if (kind_ == Kind::Atom) prefer_fresh_ = on;
        if (a_) a_->set_prefer_fresh(on);
        if (b_) b_->set_prefer_fresh(on);
    }

    /// Points already pinned by the leaf atoms (domains and images): the
    /// natural probe window for detecting identity words.
    IdSet probe_points() const {
        if (kind_ == Kind::Atom) {
            Tuple out;
            for (auto& [v, w] : fwd_) {
                out.push_back(v);
                out.push_back(w);
            }
            return make_set(out);
        }
        IdSet out = a_ ? a_->probe_points() : IdSet{};
        if (b_) out = set_union(out, b_->probe_points());
        return out;
    }
    const std::map<ElemId, ElemId>& forward() const {
        if (kind_ != Kind::Atom) throw StructureError("forward map only exists on atoms");
        return fwd_;
    }

    ElemId apply(ElemId v) {
        switch (kind_) {
            case Kind::Atom: return atom_apply(v);
            case Kind::Inverse: return a_->apply_inverse(v);
            case Kind::Compose: return a_->apply(b_->apply(v));
            case Kind::Commutator:
                return a_->apply_inverse(b_->apply_inverse(a_->apply(b_->apply(v))));
        }
        throw StructureError("unreachable");
    }

    /// The image of v when it is already pinned by the word, without any
    /// extension of the underlying maps.
    std::optional<ElemId> apply_if_defined(ElemId v) const {
        switch (kind_) {
            case Kind::Atom: {
                auto it = fwd_.find(v);
                if (it == fwd_.end()) return std::nullopt;
                return it->second;
            }
            case Kind::Inverse: return a_->inverse_if_defined(v);
            case Kind::Compose: {
                auto mid = b_->apply_if_defined(v);
                if (!mid) return std::nullopt;
                return a_->apply_if_defined(*mid);
            }
            case Kind::Commutator: {
                auto s1 = b_->apply_if_defined(v);
                if (!s1) return std::nullopt;
                auto s2 = a_->apply_if_defined(*s1);
                if (!s2) return std::nullopt;
                auto s3 = b_->inverse_if_defined(*s2);
                if (!s3) return std::nullopt;
                return a_->inverse_if_defined(*s3);
            }
        }
        return std::nullopt;
    }

    std::optional<ElemId> inverse_if_defined(ElemId v) const {
        switch (kind_) {
            case Kind::Atom: {
                auto it = bwd_.find(v);
                if (it == bwd_.end()) return std::nullopt;
                return it->second;
            }
            case Kind::Inverse: return a_->apply_if_defined(v);
            case Kind::Compose: {
                auto mid = a_->inverse_if_defined(v);
                if (!mid) return std::nullopt;
                return b_->inverse_if_defined(*mid);
            }
            case Kind::Commutator: {
                auto s1 = a_->apply_if_defined(v);
                if (!s1) return std::nullopt;
                auto s2 = b_->apply_if_defined(*s1);
                if (!s2) return std::nullopt;
                auto s3 = a_->inverse_if_defined(*s2);
                if (!s3) return std::nullopt;
                return b_->inverse_if_defined(*s3);
            }
        }
        return std::nullopt;
    }

    ElemId apply_inverse(ElemId v) {
        switch (kind_) {
            case Kind::Atom: return atom_apply_inverse(v);
            case Kind::Inverse: return a_->apply(v);
            case Kind::Compose: return b_->apply_inverse(a_->apply_inverse(v));
            case Kind::Commutator:
                return b_->apply_inverse(a_->apply_inverse(b_->apply(a_->apply(v))));
        }
        throw StructureError("unreachable");
    }

    Tuple apply(const Tuple& t) {
        Tuple out;
        out.reserve(t.size());
        for (ElemId v : t) out.push_back(apply(v));
        return out;
    }
    Tuple apply_inverse(const Tuple& t) {
        Tuple out;
        out.reserve(t.size());
        for (ElemId v : t) out.push_back(apply_inverse(v));
        return out;
    }
    IdSet apply_set(const IdSet& xs) {
        Tuple out;
        for (ElemId v : xs) out.push_back(apply(v));
        return make_set(out);
    }
    IdSet apply_inverse_set(const IdSet& xs) {
        Tuple out;
        for (ElemId v : xs) out.push_back(apply_inverse(v));
        return make_set(out);
    }

    /// Extends the atom by a brand-new image point whose relations to the
    /// current image are copied through the map (so the extended map is a
    /// partial iso by construction); relations beyond the image are filled by
    /// the class completion. Returns the fresh image.
    ElemId push_forward_fresh(ElemId v, bool x_left = true,
                              const std::vector<LazyLimit::Pin>& pins = {}) {
        if (kind_ != Kind::Atom) throw StructureError("push_forward_fresh only works on atoms");
        if (fwd_.count(v)) throw StructureError("point already has an image");
        for (std::size_t f = 0; f < host_->current().signature().functions().size(); ++f) {
            ElemId fv = host_->current().function_value(static_cast<int>(f), v);
            if (fv != v && !fwd_.count(fv)) atom_apply(fv);
        }
        ElemId x = clone_through(fwd_, v, x_left, pins);
        fwd_[v] = x;
        bwd_[x] = v;
        return x;
    }

    /// Extends the atom by a brand-new preimage of w (the mirror of
    /// push_forward_fresh).
    ElemId pull_back_fresh(ElemId w, bool x_left = true,
                           const std::vector<LazyLimit::Pin>& pins = {}) {
        if (kind_ != Kind::Atom) throw StructureError("pull_back_fresh only works on atoms");
        if (bwd_.count(w)) throw StructureError("point already has a preimage");
        for (std::size_t f = 0; f < host_->current().signature().functions().size(); ++f) {
            ElemId fw = host_->current().function_value(static_cast<int>(f), w);
            if (fw != w && !bwd_.count(fw)) atom_apply_inverse(fw);
        }
        ElemId x = clone_through(bwd_, w, x_left, pins);
        fwd_[x] = w;
        bwd_[w] = x;
        return x;
    }

    /// Manual extension of an atom (used by the construction procedures).
    /// Validates qftp preservation over the previously defined domain.
    void define(ElemId v, ElemId w) {
        if (kind_ != Kind::Atom) throw StructureError("define only works on atoms");
        const auto& s = host_->current();
        s.require_element(v);
        s.require_element(w);
        if (fwd_.count(v) || bwd_.count(w))
            throw StructureError("define collides with the existing map");
        auto m = fwd_;
        m[v] = w;
        if (!detail::pair_coherent(s, s, m, v, w))
            throw StructureError("extension does not preserve quantifier-free types");
        fwd_[v] = w;
        bwd_[w] = v;
    }

    void define_tuple(const Tuple& vs, const Tuple& ws) {
        if (vs.size() != ws.size()) throw StructureError("tuple length mismatch");
        for (std::size_t i = 0; i < vs.size(); ++i) define(vs[i], ws[i]);
    }

    /// Domain and image of the atom's finite map.
    IdSet atom_domain() const {
        IdSet d;
        for (auto& [v, w] : fwd_) d.push_back(v);
        return d;
    }
    IdSet atom_image() const {
        Tuple i;
        for (auto& [v, w] : fwd_) i.push_back(w);
        return make_set(i);
    }

private:
    enum class Kind { Atom, Inverse, Compose, Commutator };

    LazyAutomorphism(Kind kind, LazyLimit* host) : kind_(kind), host_(host) {}

    /// Whether the least-realization strategy is affordable on the current
    /// domain: the transported-type machinery enumerates |dom|^arity content.
    bool small_domain() const {
        const auto& rels = host_->current().signature().relations();
        double cost = 0;
        for (const auto& r : rels) {
            double c = 1;
            for (int i = 0; i < r.arity; ++i) c *= static_cast<double>(fwd_.size() + 1);
            cost += c;
        }
        return cost < 250000;
    }

    /// Adds a fresh point whose relations to the values of `m` are the
    /// m-images of the model's relations to the keys of `m`; everything else
    /// is completed by the class rule.
    ElemId clone_through(const std::map<ElemId, ElemId>& m, ElemId model, bool x_left,
                         const std::vector<LazyLimit::Pin>& pins) {
        FiniteStructure& s = host_->mutable_current();
        ElemId x = s.fresh_id();
        s.add_element(x);
        IdSet keys;
        for (auto& [k, val] : m) keys.push_back(k);
        IdSet vals;
        {
            Tuple tmp;
            for (auto& [k, val] : m) tmp.push_back(val);
            vals = make_set(tmp);
        }
        const auto& rels = s.signature().relations();
        for (std::size_t r = 0; r < rels.size(); ++r) {
            int arity = rels[r].arity;
            Tuple t(static_cast<std::size_t>(arity)), img(static_cast<std::size_t>(arity));
            // tuples containing the model: model at the positions of `mask`,
            // keys everywhere else (cost ~ arity * |keys|^(arity-1))
            for (unsigned mask = 1; mask < (1u << arity); ++mask) {
                std::function<void(int)> rec = [&](int pos) {
                    if (pos == arity) {
                        if (!s.has_tuple(static_cast<int>(r), t)) return;
                        for (int i = 0; i < arity; ++i) {
                            ElemId src = t[static_cast<std::size_t>(i)];
                            img[static_cast<std::size_t>(i)] = src == model ? x : m.at(src);
                        }
                        s.add_tuple(static_cast<int>(r), img);
                        return;
                    }
                    if ((mask >> pos) & 1) {
                        t[static_cast<std::size_t>(pos)] = model;
                        rec(pos + 1);
                    } else {
                        for (ElemId cand : keys) {
                            t[static_cast<std::size_t>(pos)] = cand;
                            rec(pos + 1);
                        }
                    }
                };
                rec(0);
            }
        }
        const auto& funs = s.signature().functions();
        for (std::size_t f = 0; f < funs.size(); ++f) {
            ElemId fm = s.function_value(static_cast<int>(f), model);
            s.set_function(static_cast<int>(f), x, fm == model ? x : m.at(fm));
        }
        for (const auto& pin : pins) {
            Tuple tup = pin.tuple;
            for (ElemId& v : tup)
                if (v == LazyLimit::Pin::placeholder) v = x;
            s.add_tuple(pin.relation, tup);
        }
        host_->spec().complete_new_point(s, x, vals, x_left);
        host_->note_growth();
        return x;
    }

    ElemId atom_apply(ElemId v) {
        auto it = fwd_.find(v);
        if (it != fwd_.end()) return it->second;
        host_->current().require_element(v);
        // keep the domain function-closed so transported types carry the
        // function values of the new point
        for (std::size_t f = 0; f < host_->current().signature().functions().size(); ++f) {
            ElemId fv = host_->current().function_value(static_cast<int>(f), v);
            if (fv != v && !fwd_.count(fv)) atom_apply(fv);
        }
        if (prefer_fresh_ || !small_domain()) return push_forward_fresh(v);
        IdSet dom = atom_domain();
        QfType t = qftp(host_->current(), {v}, dom);
        QfType target = t.transport(fwd_);
        IdSet img = atom_image();
        std::optional<ElemId> w = host_->find_realization(target, img);
        ElemId res = w ? *w : host_->add_point(target);
        fwd_[v] = res;
        bwd_[res] = v;
        return res;
    }

    ElemId atom_apply_inverse(ElemId w) {
        auto it = bwd_.find(w);
        if (it != bwd_.end()) return it->second;
        host_->current().require_element(w);
        for (std::size_t f = 0; f < host_->current().signature().functions().size(); ++f) {
            ElemId fw = host_->current().function_value(static_cast<int>(f), w);
            if (fw != w && !bwd_.count(fw)) atom_apply_inverse(fw);
        }
        if (prefer_fresh_ || !small_domain()) return pull_back_fresh(w);
        IdSet img = atom_image();
        QfType t = qftp(host_->current(), {w}, img);
        QfType target = t.transport(bwd_);
        IdSet dom = atom_domain();
        std::optional<ElemId> v = host_->find_realization(target, dom);
        ElemId res = v ? *v : host_->add_point(target);
        fwd_[res] = w;
        bwd_[w] = res;
        return res;
    }

    Kind kind_;
    LazyLimit* host_;
    std::map<ElemId, ElemId> fwd_, bwd_;
    Ptr a_, b_;
    bool prefer_fresh_ = false;
};

// --------------------------------------------------------------------------
// Exterior type enumeration
// --------------------------------------------------------------------------

/// Realisable exterior types over small parameter sets drawn from the front
/// of the limit's universe, ordered by (parameter-set size, type size,
/// lexicographic code). Types are produced by composing class extensions, so
/// every emitted type is realisable.
inline std::vector<QfType> enumerate_exterior_types(const LazyLimit& limit, int max_params,
                                                    int max_len, int param_pool = 4,
                                                    std::size_t cap = SIZE_MAX) {
    const IdSet& u = limit.current().universe();
    IdSet pool;
    for (std::size_t i = 0; i < u.size() && static_cast<int>(i) < param_pool; ++i) pool.push_back(u[i]);
    std::vector<QfType> out;

    for (int psize = 0; psize <= max_params; ++psize) {
        std::vector<IdSet> bases;
        detail::for_each_subset(pool, psize, [&](const Tuple& t) {
            bases.push_back(limit.current().function_closure(make_set(t)));
        });
        for (int len = 1; len <= max_len; ++len) {
            for (const IdSet& base : bases) {
                // compose len one-point extensions on a scratch structure
                struct Node {
                    FiniteStructure s;
                    Tuple xs;
                };
                std::vector<Node> frontier = {{limit.current().induced(base), {}}};
                for (int step = 0; step < len; ++step) {
                    std::vector<Node> next;
                    for (auto& node : frontier) {
                        IdSet cur_base = node.s.universe();
                        for (const auto& ext : limit.spec().one_point_extensions(node.s, cur_base)) {
                            Node n = node;
                            ElemId x = detail::materialize_extension(n.s, ext);
                            n.xs.push_back(x);
                            next.push_back(std::move(n));
                        }
                    }
                    frontier = std::move(next);
                    if (frontier.size() > 4096) frontier.resize(4096);
                }
                std::vector<std::string> seen;
                std::vector<QfType> batch;
                for (auto& node : frontier) {
                    QfType t = qftp(node.s, node.xs, base);
                    auto key = t.full_key();
                    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                        seen.push_back(key);
                        batch.push_back(std::move(t));
                    }
                }
                std::sort(batch.begin(), batch.end(),
                          [](const QfType& a, const QfType& b) { return a.full_key() < b.full_key(); });
                for (auto& t : batch) {
                    out.push_back(std::move(t));
                    if (out.size() >= cap) return out;
                }
            }
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Joint embedding of partial automorphisms
// --------------------------------------------------------------------------

struct JepWitness {
    FiniteStructure C;
    std::map<ElemId, ElemId> fC;
    std::map<ElemId, ElemId> eA, eB;
};

struct JepExhaustion {
    int bound = 0;
    int structures_tried = 0;
    std::string note;
};

/// Searches for a joint embedding of (A, fA) and (B, fB) into some (C, fC)
/// with |C| <= bound, enumerating class structures up to isomorphism by
/// iterated one-point extension. An exhaustion certificate is explicitly not
/// a nonexistence proof beyond the bound.
inline std::variant<JepWitness, JepExhaustion> kr_jep_check(const ClassSpec& cls, const FiniteStructure& A,
                                                            const std::map<ElemId, ElemId>& fA,
                                                            const FiniteStructure& B,
                                                            const std::map<ElemId, ElemId>& fB, int bound) {
    {
        PartialIso pa{&A, &A, fA}, pb{&B, &B, fB};
        if (!pa.valid() || !pb.valid())
            throw StructureError("inputs are not partial automorphisms");
    }
    JepExhaustion ex;
    ex.bound = bound;
    std::vector<FiniteStructure> layer = {cls.bootstrap()};
    std::vector<std::string> seen;
    for (int size = static_cast<int>(layer.front().size()); size <= bound; ++size) {
        for (const auto& C : layer) {
            if (C.size() == 0) continue;
            ++ex.structures_tried;
            auto eas = enumerate_embeddings(A, C);
            if (eas.empty()) continue;
            auto ebs = enumerate_embeddings(B, C);
            for (const auto& ea : eas)
                for (const auto& eb : ebs) {
                    std::map<ElemId, ElemId> fC;
                    bool ok = true;
                    auto push = [&](ElemId v, ElemId w) {
                        auto it = fC.find(v);
                        if (it != fC.end() && it->second != w) ok = false;
                        fC[v] = w;
                    };
                    for (auto& [v, w] : fA) push(ea.map.at(v), ea.map.at(w));
                    for (auto& [v, w] : fB) push(eb.map.at(v), eb.map.at(w));
                    if (!ok) continue;
                    PartialIso cand{&C, &C, fC};
                    if (cand.valid()) return JepWitness{C, fC, ea.map, eb.map};
                }
        }
        if (size == bound) break;
        // next layer: all one-point extensions, up to isomorphism
        std::vector<FiniteStructure> next;
        for (const auto& C : layer) {
            for (const auto& ext : cls.one_point_extensions(C, C.universe())) {
                FiniteStructure D = C;
                detail::materialize_extension(D, ext);
                auto code = D.canonical_code();
                if (std::find(seen.begin(), seen.end(), code) == seen.end()) {
                    seen.push_back(code);
                    next.push_back(std::move(D));
                }
            }
        }
        layer = std::move(next);
    }
    return ex;
}

}  // namespace fraisse
