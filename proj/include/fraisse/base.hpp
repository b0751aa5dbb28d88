#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraisse {

/// Opaque element identifier. All enumeration orders are ascending on ids,
/// which keeps every operation in the library deterministic.
using ElemId = std::uint32_t;
using Tuple = std::vector<ElemId>;
using IdSet = std::vector<ElemId>;  // always kept sorted + deduplicated

class StructureError : public std::runtime_error {
public:
    explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

inline IdSet make_set(Tuple v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool set_contains(const IdSet& s, ElemId v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline IdSet set_union(const IdSet& a, const IdSet& b) {
    IdSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IdSet set_intersect(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IdSet set_minus(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool set_disjoint(const IdSet& a, const IdSet& b) {
    return set_intersect(a, b).empty();
}

inline bool set_subset(const IdSet& a, const IdSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Packs a tuple of ids into one 64-bit key. Arity <= 4 uses 16-bit lanes,
/// arity <= 8 uses 8-bit lanes. The packing is lexicographic-order preserving.
inline std::uint64_t pack_tuple(const Tuple& t) {
    std::uint64_t key = 0;
    if (t.size() <= 4) {
        for (ElemId v : t) {
            if (v >= (1u << 16)) throw StructureError("element id too large to pack");
            key = (key << 16) | v;
        }
    } else if (t.size() <= 8) {
        for (ElemId v : t) {
            if (v >= (1u << 8)) throw StructureError("element id too large to pack (arity > 4)");
            key = (key << 8) | v;
        }
    } else {
        throw StructureError("relation arity > 8 not supported");
    }
    return key;
}

inline Tuple unpack_tuple(std::uint64_t key, int arity) {
    Tuple t(static_cast<std::size_t>(arity));
    if (arity <= 4) {
        for (int i = arity - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = static_cast<ElemId>(key & 0xffffu);
            key >>= 16;
        }
    } else {
        for (int i = arity - 1; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = static_cast<ElemId>(key & 0xffu);
            key >>= 8;
        }
    }
    return t;
}

/// Deterministic 64-bit generator (splitmix64). Used instead of the standard
/// distributions so that seeded runs are byte-identical across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

/// Budget for operations that may extend a lazy limit. Exhaustion is always
/// reported as such, never as nonexistence.
struct Budget {
    int per_query = 64;
    int total = 4096;
    int used = 0;

    void charge(const std::string& where, int amount = 1) {
        used += amount;
        if (used > total) throw BudgetError("extension budget exhausted in " + where);
    }
};

}  // namespace fraisse
