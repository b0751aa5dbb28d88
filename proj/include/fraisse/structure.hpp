#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fraisse/base.hpp"

namespace fraisse {

struct RelationSymbol {
    std::string name;
    int arity = 1;
};

struct FunctionSymbol {
    std::string name;
};

/// Relational signature with optional unary total function symbols.
class Signature {
public:
    Signature() = default;
    Signature(std::vector<RelationSymbol> rels, std::vector<FunctionSymbol> funs = {})
        : rels_(std::move(rels)), funs_(std::move(funs)) {
        std::unordered_set<std::string> seen;
        for (const auto& r : rels_) {
            if (r.arity < 1) throw StructureError("relation arity must be >= 1: " + r.name);
            if (!seen.insert(r.name).second) throw StructureError("duplicate symbol name: " + r.name);
        }
        for (const auto& f : funs_) {
            if (!seen.insert(f.name).second) throw StructureError("duplicate symbol name: " + f.name);
        }
    }

    const std::vector<RelationSymbol>& relations() const { return rels_; }
    const std::vector<FunctionSymbol>& functions() const { return funs_; }

    int relation_index(const std::string& name) const {
        for (std::size_t i = 0; i < rels_.size(); ++i)
            if (rels_[i].name == name) return static_cast<int>(i);
        throw StructureError("unknown relation: " + name);
    }
    int function_index(const std::string& name) const {
        for (std::size_t i = 0; i < funs_.size(); ++i)
            if (funs_[i].name == name) return static_cast<int>(i);
        throw StructureError("unknown function: " + name);
    }

    bool operator==(const Signature& o) const {
        if (rels_.size() != o.rels_.size() || funs_.size() != o.funs_.size()) return false;
        for (std::size_t i = 0; i < rels_.size(); ++i)
            if (rels_[i].name != o.rels_[i].name || rels_[i].arity != o.rels_[i].arity) return false;
        for (std::size_t i = 0; i < funs_.size(); ++i)
            if (funs_[i].name != o.funs_[i].name) return false;
        return true;
    }
    bool operator!=(const Signature& o) const { return !(*this == o); }

private:
    std::vector<RelationSymbol> rels_;
    std::vector<FunctionSymbol> funs_;
};

/// A finite relational structure with unary total functions. Values are
/// immutable by convention once handed out; the mutating interface exists for
/// builders (lazy limits grow their structure in place).
class FiniteStructure {
public:
    FiniteStructure() = default;
    explicit FiniteStructure(Signature sig) : sig_(std::move(sig)) {
        rel_.resize(sig_.relations().size());
        fun_.resize(sig_.functions().size());
    }

    const Signature& signature() const { return sig_; }
    const IdSet& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }
    bool has_element(ElemId v) const { return set_contains(universe_, v); }

    ElemId fresh_id() const { return universe_.empty() ? 0 : universe_.back() + 1; }

    void add_element(ElemId v) {
        if (has_element(v)) throw StructureError("element already present");
        universe_.insert(std::upper_bound(universe_.begin(), universe_.end(), v), v);
    }

    void require_element(ElemId v) const {
        if (!has_element(v)) throw StructureError("unknown element identifier: " + std::to_string(v));
    }

    // --- relations ------------------------------------------------------

    void add_tuple(int rel, const Tuple& t) {
        check_tuple(rel, t);
        rel_[static_cast<std::size_t>(rel)].insert(pack_tuple(t));
    }
    void add_tuple(const std::string& rel, const Tuple& t) { add_tuple(sig_.relation_index(rel), t); }

    void remove_tuple(int rel, const Tuple& t) {
        rel_[static_cast<std::size_t>(rel)].erase(pack_tuple(t));
    }

    bool has_tuple(int rel, const Tuple& t) const {
        if (t.size() != static_cast<std::size_t>(sig_.relations()[static_cast<std::size_t>(rel)].arity))
            return false;
        return rel_[static_cast<std::size_t>(rel)].count(pack_tuple(t)) > 0;
    }
    bool has_tuple(const std::string& rel, const Tuple& t) const {
        return has_tuple(sig_.relation_index(rel), t);
    }

    std::size_t tuple_count(int rel) const { return rel_[static_cast<std::size_t>(rel)].size(); }

    /// All stored tuples of one relation in lexicographic order.
    std::vector<Tuple> tuples(int rel) const {
        int arity = sig_.relations()[static_cast<std::size_t>(rel)].arity;
        std::vector<std::uint64_t> keys(rel_[static_cast<std::size_t>(rel)].begin(),
                                        rel_[static_cast<std::size_t>(rel)].end());
        std::sort(keys.begin(), keys.end());
        std::vector<Tuple> out;
        out.reserve(keys.size());
        for (auto k : keys) out.push_back(unpack_tuple(k, arity));
        return out;
    }
    std::vector<Tuple> tuples(const std::string& rel) const { return tuples(sig_.relation_index(rel)); }

    /// Stored tuples of one relation whose entries all lie in `dom`.
    /// Switches between scanning storage and enumerating dom^arity.
    std::vector<Tuple> tuples_within(int rel, const IdSet& dom) const {
        int arity = sig_.relations()[static_cast<std::size_t>(rel)].arity;
        double enumerate_cost = 1;
        for (int i = 0; i < arity; ++i) enumerate_cost *= static_cast<double>(dom.size());
        std::vector<Tuple> out;
        if (enumerate_cost <= static_cast<double>(rel_[static_cast<std::size_t>(rel)].size()) * 4 + 64) {
            Tuple t(static_cast<std::size_t>(arity));
            enumerate_tuples(dom, arity, t, 0, [&](const Tuple& cand) {
                if (has_tuple(rel, cand)) out.push_back(cand);
            });
        } else {
            for (const auto& t : tuples(rel)) {
                bool in = true;
                for (ElemId v : t)
                    if (!set_contains(dom, v)) { in = false; break; }
                if (in) out.push_back(t);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // --- functions ------------------------------------------------------

    void set_function(int fn, ElemId v, ElemId w) {
        require_element(v);
        require_element(w);
        fun_[static_cast<std::size_t>(fn)][v] = w;
    }
    void set_function(const std::string& fn, ElemId v, ElemId w) {
        set_function(sig_.function_index(fn), v, w);
    }

    ElemId function_value(int fn, ElemId v) const {
        auto& m = fun_[static_cast<std::size_t>(fn)];
        auto it = m.find(v);
        if (it == m.end()) throw StructureError("function not defined on element " + std::to_string(v));
        return it->second;
    }
    ElemId function_value(const std::string& fn, ElemId v) const {
        return function_value(sig_.function_index(fn), v);
    }

    /// Checks totality of every function symbol; throws on a gap.
    void check_functions_total() const {
        for (std::size_t f = 0; f < fun_.size(); ++f)
            for (ElemId v : universe_)
                if (!fun_[f].count(v))
                    throw StructureError("function " + sig_.functions()[f].name + " not total");
    }

    /// Closure of a set under all function symbols.
    IdSet function_closure(IdSet s) const {
        if (fun_.empty()) return s;
        bool grew = true;
        while (grew) {
            grew = false;
            IdSet add;
            for (ElemId v : s) {
                for (std::size_t f = 0; f < fun_.size(); ++f) {
                    auto it = fun_[f].find(v);
                    if (it != fun_[f].end() && !set_contains(s, it->second)) add.push_back(it->second);
                }
            }
            if (!add.empty()) {
                s = set_union(s, make_set(add));
                grew = true;
            }
        }
        return s;
    }

    /// Induced substructure on the function-closure of `subset`. Ids are kept.
    FiniteStructure induced(const IdSet& subset) const {
        IdSet dom = function_closure(subset);
        for (ElemId v : dom) require_element(v);
        FiniteStructure out(sig_);
        out.universe_ = dom;
        for (std::size_t r = 0; r < rel_.size(); ++r)
            for (const auto& t : tuples_within(static_cast<int>(r), dom))
                out.rel_[r].insert(pack_tuple(t));
        for (std::size_t f = 0; f < fun_.size(); ++f)
            for (ElemId v : dom) {
                auto it = fun_[f].find(v);
                if (it != fun_[f].end()) out.fun_[f][v] = it->second;
            }
        return out;
    }

    bool equals(const FiniteStructure& o) const {
        return sig_ == o.sig_ && universe_ == o.universe_ && rel_ == o.rel_ && fun_ == o.fun_;
    }

    /// Canonical code under relabelling: the minimal encoding over all
    /// bijections universe -> {0..n-1}. Exhaustive; guarded for desk scale.
    std::string canonical_code(std::size_t max_points = 8) const;

private:
    void check_tuple(int rel, const Tuple& t) const {
        if (t.size() != static_cast<std::size_t>(sig_.relations()[static_cast<std::size_t>(rel)].arity))
            throw StructureError("tuple arity mismatch for " +
                                 sig_.relations()[static_cast<std::size_t>(rel)].name);
        for (ElemId v : t) require_element(v);
    }

    template <typename F>
    static void enumerate_tuples(const IdSet& dom, int arity, Tuple& t, int pos, F&& fn) {
        if (pos == arity) {
            fn(t);
            return;
        }
        for (ElemId v : dom) {
            t[static_cast<std::size_t>(pos)] = v;
            enumerate_tuples(dom, arity, t, pos + 1, fn);
        }
    }

    Signature sig_;
    IdSet universe_;
    std::vector<std::unordered_set<std::uint64_t>> rel_;
    std::vector<std::unordered_map<ElemId, ElemId>> fun_;
};

/// An injective partial map between structures that preserves and reflects
/// relations on its domain, and is coherent with the function symbols where
/// both argument and value are in the domain.
struct PartialIso {
    const FiniteStructure* source = nullptr;
    const FiniteStructure* target = nullptr;
    std::map<ElemId, ElemId> map;

    IdSet domain() const {
        IdSet d;
        d.reserve(map.size());
        for (auto& [v, w] : map) d.push_back(v);
        return d;
    }
    IdSet image() const {
        Tuple i;
        i.reserve(map.size());
        for (auto& [v, w] : map) i.push_back(w);
        return make_set(i);
    }

    ElemId apply(ElemId v) const {
        auto it = map.find(v);
        if (it == map.end()) throw StructureError("partial iso undefined on " + std::to_string(v));
        return it->second;
    }

    PartialIso inverse() const {
        PartialIso out{target, source, {}};
        for (auto& [v, w] : map) out.map[w] = v;
        return out;
    }

    bool is_injective() const {
        std::unordered_set<ElemId> seen;
        for (auto& [v, w] : map)
            if (!seen.insert(w).second) return false;
        return true;
    }

    /// Full validity check (preserve + reflect + function coherence).
    bool valid(std::string* why = nullptr) const;
};

namespace detail {

/// Checks relation/function coherence of `m` restricted to tuples that contain
/// the freshly added pair (v, w). Assumes the rest of the map was coherent.
inline bool pair_coherent(const FiniteStructure& a, const FiniteStructure& b,
                          const std::map<ElemId, ElemId>& m, ElemId v, ElemId w) {
    IdSet dom;
    dom.reserve(m.size());
    for (auto& [x, y] : m) dom.push_back(x);
    // dom is sorted because std::map iterates in key order.
    const auto& rels = a.signature().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
        int arity = rels[r].arity;
        Tuple t(static_cast<std::size_t>(arity)), img(static_cast<std::size_t>(arity));
        std::function<bool(int, bool)> rec = [&](int pos, bool uses_v) -> bool {
            if (pos == arity) {
                if (!uses_v) return true;
                for (int i = 0; i < arity; ++i) img[static_cast<std::size_t>(i)] = m.at(t[static_cast<std::size_t>(i)]);
                return a.has_tuple(static_cast<int>(r), t) == b.has_tuple(static_cast<int>(r), img);
            }
            for (ElemId x : dom) {
                t[static_cast<std::size_t>(pos)] = x;
                if (!rec(pos + 1, uses_v || x == v)) return false;
            }
            return true;
        };
        if (!rec(0, false)) return false;
    }
    const auto& funs = a.signature().functions();
    for (std::size_t f = 0; f < funs.size(); ++f) {
        for (auto& [x, y] : m) {
            ElemId fx = a.function_value(static_cast<int>(f), x);
            if (m.count(fx) && (x == v || fx == v)) {
                if (b.function_value(static_cast<int>(f), y) != m.at(fx)) return false;
            }
            ElemId fy = b.function_value(static_cast<int>(f), y);
            if (y == w || fy == w) {
                // reflect: if f(y) lands in the image, its preimage must be f(x)
                for (auto& [x2, y2] : m) {
                    if (y2 == fy && fx != x2) return false;
                }
            }
        }
    }
    return true;
}

}  // namespace detail

inline bool PartialIso::valid(std::string* why) const {
    if (!source || !target) {
        if (why) *why = "unbound structures";
        return false;
    }
    if (source->signature() != target->signature()) {
        if (why) *why = "signature mismatch";
        return false;
    }
    if (!is_injective()) {
        if (why) *why = "not injective";
        return false;
    }
    for (auto& [v, w] : map) {
        if (!source->has_element(v) || !target->has_element(w)) {
            if (why) *why = "element outside universe";
            return false;
        }
    }
    IdSet dom = domain(), img = image();
    const auto& rels = source->signature().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
        for (const auto& t : source->tuples_within(static_cast<int>(r), dom)) {
            Tuple it(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) it[i] = map.at(t[i]);
            if (!target->has_tuple(static_cast<int>(r), it)) {
                if (why) *why = "relation " + rels[r].name + " not preserved";
                return false;
            }
        }
        auto inv = inverse();
        for (const auto& t : target->tuples_within(static_cast<int>(r), img)) {
            Tuple it(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) it[i] = inv.map.at(t[i]);
            if (!source->has_tuple(static_cast<int>(r), it)) {
                if (why) *why = "relation " + rels[r].name + " not reflected";
                return false;
            }
        }
    }
    const auto& funs = source->signature().functions();
    if (!funs.empty()) {
        auto inv = inverse();
        for (std::size_t f = 0; f < funs.size(); ++f) {
            for (auto& [v, w] : map) {
                ElemId fv = source->function_value(static_cast<int>(f), v);
                if (map.count(fv) && target->function_value(static_cast<int>(f), w) != map.at(fv)) {
                    if (why) *why = "function " + funs[f].name + " not preserved";
                    return false;
                }
                ElemId fw = target->function_value(static_cast<int>(f), w);
                if (inv.map.count(fw) && (!map.count(fv) || map.at(fv) != fw)) {
                    if (why) *why = "function " + funs[f].name + " not reflected";
                    return false;
                }
            }
        }
    }
    return true;
}

inline std::string FiniteStructure::canonical_code(std::size_t max_points) const {
    if (universe_.size() > max_points)
        throw StructureError("canonical_code limited to " + std::to_string(max_points) + " points");
    std::vector<ElemId> perm(universe_);
    std::sort(perm.begin(), perm.end());
    std::string best;
    do {
        std::unordered_map<ElemId, int> label;
        for (std::size_t i = 0; i < perm.size(); ++i) label[perm[i]] = static_cast<int>(i);
        std::string code;
        code.reserve(64);
        for (std::size_t r = 0; r < rel_.size(); ++r) {
            std::vector<std::string> enc;
            for (const auto& t : tuples(static_cast<int>(r))) {
                std::string e;
                for (ElemId v : t) {
                    e += std::to_string(label[v]);
                    e += ',';
                }
                enc.push_back(e);
            }
            std::sort(enc.begin(), enc.end());
            code += 'R';
            for (auto& e : enc) {
                code += e;
                code += ';';
            }
        }
        for (std::size_t f = 0; f < fun_.size(); ++f) {
            std::vector<std::pair<int, int>> enc;
            for (auto& [v, w] : fun_[f]) enc.emplace_back(label[v], label[w]);
            std::sort(enc.begin(), enc.end());
            code += 'F';
            for (auto& [x, y] : enc) code += std::to_string(x) + ">" + std::to_string(y) + ";";
        }
        if (best.empty() || code < best) best = code;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::to_string(universe_.size()) + "|" + best;
}

// --------------------------------------------------------------------------
// Quantifier-free types
// --------------------------------------------------------------------------

/// Canonical quantifier-free type of a tuple over a parameter set: the induced
/// data on params-plus-tuple with parameters frozen pointwise and tuple
/// coordinates designated. Equality of QfTypes over the same parameter set is
/// exactly "the identity-on-params coordinate-matching map is a PartialIso".
struct QfType {
    IdSet params;                 // sorted, function-closed, actual ids
    int tuple_len = 0;
    std::vector<int> tuple_code;  // coordinate -> param index, or P + new-element index
    int new_count = 0;
    // relation content: per relation, sorted index-tuples over the canonical domain
    std::vector<std::vector<std::vector<int>>> rel_content;
    // function content: per function, sorted (arg index, value index) pairs
    std::vector<std::vector<std::pair<int, int>>> fun_content;

    bool operator==(const QfType& o) const {
        return params == o.params && tuple_len == o.tuple_len && tuple_code == o.tuple_code &&
               rel_content == o.rel_content && fun_content == o.fun_content;
    }
    bool operator!=(const QfType& o) const { return !(*this == o); }

    bool exterior() const {
        for (int c : tuple_code)
            if (c < static_cast<int>(params.size())) return false;
        return true;
    }

    /// Content with the parameters forgotten up to order-isomorphism of ids:
    /// used to compare types transported between parameter sets.
    std::string key() const {
        std::string k = "P" + std::to_string(params.size()) + "T" + std::to_string(tuple_len) + "|";
        for (int c : tuple_code) k += std::to_string(c) + ",";
        k += "|";
        for (auto& rc : rel_content) {
            k += "R";
            for (auto& t : rc) {
                for (int i : t) k += std::to_string(i) + ",";
                k += ";";
            }
        }
        for (auto& fc : fun_content) {
            k += "F";
            for (auto& [a, b] : fc) k += std::to_string(a) + ">" + std::to_string(b) + ";";
        }
        return k;
    }

    /// Full identity including the concrete parameter ids.
    std::string full_key() const {
        std::string k = "[";
        for (ElemId p : params) k += std::to_string(p) + ",";
        return k + "]" + key();
    }

    /// Transport along a map defined on the parameters (image of a partial
    /// iso). Content indices are permuted to follow the new sorted id order.
    QfType transport(const std::map<ElemId, ElemId>& m) const {
        QfType out = *this;
        std::vector<ElemId> imgs;
        imgs.reserve(params.size());
        for (ElemId p : params) {
            auto it = m.find(p);
            if (it == m.end()) throw StructureError("transport map undefined on parameter");
            imgs.push_back(it->second);
        }
        IdSet sorted_imgs = make_set(imgs);
        if (sorted_imgs.size() != imgs.size()) throw StructureError("transport map not injective on parameters");
        // old param index -> new param index
        std::vector<int> re(params.size() + static_cast<std::size_t>(new_count));
        for (std::size_t i = 0; i < params.size(); ++i) {
            auto pos = std::lower_bound(sorted_imgs.begin(), sorted_imgs.end(), imgs[i]) - sorted_imgs.begin();
            re[i] = static_cast<int>(pos);
        }
        for (int i = 0; i < new_count; ++i)
            re[params.size() + static_cast<std::size_t>(i)] = static_cast<int>(params.size()) + i;
        out.params = sorted_imgs;
        for (auto& c : out.tuple_code) c = re[static_cast<std::size_t>(c)];
        for (auto& rc : out.rel_content) {
            for (auto& t : rc)
                for (auto& i : t) i = re[static_cast<std::size_t>(i)];
            std::sort(rc.begin(), rc.end());
        }
        for (auto& fc : out.fun_content) {
            for (auto& [a, b] : fc) {
                a = re[static_cast<std::size_t>(a)];
                b = re[static_cast<std::size_t>(b)];
            }
            std::sort(fc.begin(), fc.end());
        }
        return out;
    }

    /// Restriction to the first k tuple coordinates (projection of the type).
    QfType project(int k) const;
};

/// Quantifier-free type of `tuple` over `params` in `s`. Parameters are closed
/// under the function symbols automatically.
inline QfType qftp(const FiniteStructure& s, const Tuple& tuple, const IdSet& params_in) {
    for (ElemId v : tuple) s.require_element(v);
    for (ElemId v : params_in) s.require_element(v);
    QfType t;
    t.params = s.function_closure(params_in);
    t.tuple_len = static_cast<int>(tuple.size());

    // canonical indices: params by sorted order, then new elements by first occurrence
    std::unordered_map<ElemId, int> index;
    for (std::size_t i = 0; i < t.params.size(); ++i) index[t.params[i]] = static_cast<int>(i);
    std::vector<ElemId> domain_ids(t.params.begin(), t.params.end());
    for (ElemId v : tuple) {
        if (!index.count(v)) {
            index[v] = static_cast<int>(domain_ids.size());
            domain_ids.push_back(v);
            ++t.new_count;
        }
        t.tuple_code.push_back(index[v]);
    }
    IdSet dom = make_set(domain_ids);

    const auto& rels = s.signature().relations();
    t.rel_content.resize(rels.size());
    for (std::size_t r = 0; r < rels.size(); ++r) {
        for (const auto& tp : s.tuples_within(static_cast<int>(r), dom)) {
            std::vector<int> enc(tp.size());
            for (std::size_t i = 0; i < tp.size(); ++i) enc[i] = index.at(tp[i]);
            t.rel_content[r].push_back(std::move(enc));
        }
        std::sort(t.rel_content[r].begin(), t.rel_content[r].end());
    }
    const auto& funs = s.signature().functions();
    t.fun_content.resize(funs.size());
    for (std::size_t f = 0; f < funs.size(); ++f) {
        for (ElemId v : dom) {
            ElemId fv = s.function_value(static_cast<int>(f), v);
            if (set_contains(dom, fv)) t.fun_content[f].emplace_back(index.at(v), index.at(fv));
        }
        std::sort(t.fun_content[f].begin(), t.fun_content[f].end());
    }
    return t;
}

inline QfType QfType::project(int k) const {
    if (k > tuple_len) throw StructureError("projection longer than tuple");
    QfType out;
    out.params = params;
    out.tuple_len = k;
    int p = static_cast<int>(params.size());
    // surviving canonical indices: all params plus new elements used by the prefix
    std::vector<int> keep;  // old index -> new index, -1 if dropped
    keep.assign(params.size() + static_cast<std::size_t>(new_count), -1);
    for (int i = 0; i < p; ++i) keep[static_cast<std::size_t>(i)] = i;
    int next = p;
    for (int i = 0; i < k; ++i) {
        int c = tuple_code[static_cast<std::size_t>(i)];
        if (c >= p && keep[static_cast<std::size_t>(c)] == -1) keep[static_cast<std::size_t>(c)] = next++;
        out.tuple_code.push_back(keep[static_cast<std::size_t>(c)]);
    }
    out.new_count = next - p;
    out.rel_content.resize(rel_content.size());
    for (std::size_t r = 0; r < rel_content.size(); ++r) {
        for (const auto& tp : rel_content[r]) {
            std::vector<int> enc;
            bool ok = true;
            for (int i : tp) {
                if (keep[static_cast<std::size_t>(i)] == -1) { ok = false; break; }
                enc.push_back(keep[static_cast<std::size_t>(i)]);
            }
            if (ok) out.rel_content[r].push_back(std::move(enc));
        }
        std::sort(out.rel_content[r].begin(), out.rel_content[r].end());
    }
    out.fun_content.resize(fun_content.size());
    for (std::size_t f = 0; f < fun_content.size(); ++f) {
        for (auto& [a, b] : fun_content[f])
            if (keep[static_cast<std::size_t>(a)] != -1 && keep[static_cast<std::size_t>(b)] != -1)
                out.fun_content[f].emplace_back(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
        std::sort(out.fun_content[f].begin(), out.fun_content[f].end());
    }
    return out;
}

/// Does `tuple` realize `t` in s (over t.params)?
inline bool realizes(const FiniteStructure& s, const Tuple& tuple, const QfType& t) {
    if (static_cast<int>(tuple.size()) != t.tuple_len) return false;
    return qftp(s, tuple, t.params) == t;
}

// --------------------------------------------------------------------------
// Embedding enumeration and partial-iso extension
// --------------------------------------------------------------------------

/// All structure-preserving injections a -> b, in lexicographic order on the
/// sequence of chosen images (a's universe is processed in ascending order).
inline std::vector<PartialIso> enumerate_embeddings(const FiniteStructure& a, const FiniteStructure& b,
                                                    std::size_t limit = SIZE_MAX) {
    if (a.signature() != b.signature()) throw StructureError("signature mismatch");
    std::vector<PartialIso> out;
    PartialIso p{&a, &b, {}};
    std::unordered_set<ElemId> used;
    const IdSet& av = a.universe();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (out.size() >= limit) return;
        if (i == av.size()) {
            out.push_back(p);
            return;
        }
        ElemId v = av[i];
        for (ElemId w : b.universe()) {
            if (used.count(w)) continue;
            p.map[v] = w;
            if (detail::pair_coherent(a, b, p.map, v, w)) {
                used.insert(w);
                rec(i + 1);
                used.erase(w);
            }
            p.map.erase(v);
            if (out.size() >= limit) return;
        }
    };
    rec(0);
    return out;
}

inline bool embeds(const FiniteStructure& a, const FiniteStructure& b) {
    return !enumerate_embeddings(a, b, 1).empty();
}

inline bool isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
    return a.size() == b.size() && embeds(a, b);
}

/// All single-point extensions of p by v: the w such that p + {v -> w} is
/// again a PartialIso. Empty result when no extension exists.
inline std::vector<ElemId> extend_partial_iso(const PartialIso& p, ElemId v) {
    if (!p.source) throw StructureError("unbound partial iso");
    p.source->require_element(v);
    if (p.map.count(v)) throw StructureError("element already in domain");
    std::vector<ElemId> out;
    IdSet img = p.image();
    for (ElemId w : p.target->universe()) {
        if (set_contains(img, w)) continue;
        auto m = p.map;
        m[v] = w;
        if (detail::pair_coherent(*p.source, *p.target, m, v, w)) out.push_back(w);
    }
    return out;
}

// --------------------------------------------------------------------------
// Equalizing tuples:  c with qftp(a,c) = qftp(b,c)
// --------------------------------------------------------------------------

/// One-point extension oracle: given a scratch structure, produce candidate
/// extension types (1-point QfTypes over the focus set) that are class-valid.
using ExtensionOracle =
    std::function<std::vector<QfType>(const FiniteStructure&, const IdSet& focus)>;

enum class SearchStatus { Found, Exhausted };

struct EqualizingResult {
    SearchStatus status = SearchStatus::Exhausted;
    Tuple witness;                 // the tuple c
    FiniteStructure extended;      // scratch structure containing any new points
    int new_points = 0;
};

namespace detail {

/// Realize a 1-point extension type in `s` as a brand-new point; relations to
/// elements outside the type's parameters are left empty (callers that need a
/// class-valid total completion go through ClassSpec instead).
inline ElemId materialize_extension(FiniteStructure& s, const QfType& ext) {
    if (ext.tuple_len != 1) throw StructureError("expected a 1-point extension type");
    ElemId x = s.fresh_id();
    s.add_element(x);
    int p = static_cast<int>(ext.params.size());
    auto decode = [&](int idx) -> ElemId {
        return idx < p ? ext.params[static_cast<std::size_t>(idx)] : x;
    };
    for (std::size_t r = 0; r < ext.rel_content.size(); ++r) {
        for (const auto& enc : ext.rel_content[r]) {
            bool has_new = false;
            Tuple t(enc.size());
            for (std::size_t i = 0; i < enc.size(); ++i) {
                t[i] = decode(enc[i]);
                if (enc[i] >= p) has_new = true;
            }
            if (has_new) s.add_tuple(static_cast<int>(r), t);
        }
    }
    for (std::size_t f = 0; f < ext.fun_content.size(); ++f)
        for (auto& [argi, vali] : ext.fun_content[f])
            if (argi >= p) s.set_function(static_cast<int>(f), x, decode(vali));
    return x;
}

}  // namespace detail

/// Searches for a tuple c (over existing elements, possibly extending the
/// structure through the oracle by at most `max_new` points) with
/// qftp(a ++ c / {}) = qftp(b ++ c / {}). Lengths below `min_len` are not
/// accepted as answers (the transitivity lemma wants |c| = |a|); shorter
/// prefixes still prune the search, since a restriction of a matching tuple
/// matches. Exhaustion of the bound is reported distinctly and never claimed
/// to be logical impossibility.
inline EqualizingResult equalizing_tuple_search(const FiniteStructure& s, const Tuple& a, const Tuple& b,
                                                int max_len, const ExtensionOracle& extender,
                                                int max_new = -1, int min_len = 0) {
    if (a.size() != b.size()) throw StructureError("tuples must have equal length");
    if (a.empty()) throw StructureError("tuples must be nonempty");
    {
        IdSet as = make_set(a), bs = make_set(b);
        if (!set_disjoint(as, bs)) throw StructureError("tuples must be disjoint");
    }
    if (max_new < 0) max_new = max_len;

    EqualizingResult best;
    IdSet forbidden = set_union(make_set(a), make_set(b));

    struct Node {
        FiniteStructure s;
        Tuple c;
        int added = 0;
    };

    auto matches = [&](const FiniteStructure& st, const Tuple& c) {
        Tuple ac = a, bc = b;
        ac.insert(ac.end(), c.begin(), c.end());
        bc.insert(bc.end(), c.begin(), c.end());
        return qftp(st, ac, {}) == qftp(st, bc, {});
    };

    std::vector<Node> frontier;
    if (matches(s, {})) {
        if (min_len <= 0) {
            best.status = SearchStatus::Found;
            best.extended = s;
            return best;
        }
        frontier.push_back({s, {}, 0});
    }

    for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::vector<Node> next;
        for (auto& node : frontier) {
            IdSet used = set_union(forbidden, make_set(node.c));
            std::vector<Node> children;
            for (ElemId w : node.s.universe()) {
                if (set_contains(used, w)) continue;
                Node n{node.s, node.c, node.added};
                n.c.push_back(w);
                children.push_back(std::move(n));
            }
            if (node.added < max_new && extender) {
                IdSet focus = set_union(used, node.s.universe());
                for (const auto& ext : extender(node.s, focus)) {
                    Node n{node.s, node.c, node.added + 1};
                    ElemId x = detail::materialize_extension(n.s, ext);
                    n.c.push_back(x);
                    children.push_back(std::move(n));
                }
            }
            for (auto& n : children) {
                if (!matches(n.s, n.c)) continue;  // prefixes of a match must match
                if (len >= min_len) {
                    best.status = SearchStatus::Found;
                    best.witness = n.c;
                    best.extended = n.s;
                    best.new_points = n.added;
                    return best;
                }
                next.push_back(std::move(n));
            }
        }
        frontier = std::move(next);
        if (frontier.size() > 20000) frontier.resize(20000);  // desk-scale cap
    }
    best.status = SearchStatus::Exhausted;
    return best;
}

}  // namespace fraisse
