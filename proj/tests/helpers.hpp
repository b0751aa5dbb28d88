#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fraisse/structure.hpp"

namespace testutil {

using namespace fraisse;

/// Tournament on n points from an explicit edge list.
inline FiniteStructure tournament(int n, const std::vector<std::pair<int, int>>& edges,
                                  const std::string& rel = "E") {
    FiniteStructure s(Signature({{rel, 2}}));
    for (int i = 0; i < n; ++i) s.add_element(static_cast<ElemId>(i));
    for (auto& [u, v] : edges) s.add_tuple(rel, {static_cast<ElemId>(u), static_cast<ElemId>(v)});
    return s;
}

/// Oriented graph over the standard {"->"} signature.
inline FiniteStructure digraph(int n, const std::vector<std::pair<int, int>>& edges) {
    FiniteStructure s(Signature({{"->", 2}}));
    for (int i = 0; i < n; ++i) s.add_element(static_cast<ElemId>(i));
    for (auto& [u, v] : edges) s.add_tuple("->", {static_cast<ElemId>(u), static_cast<ElemId>(v)});
    return s;
}

/// Independent brute-force embedding counter: tries every injection and
/// checks preservation/reflection by direct relation scan. Oracle for
/// enumerate_embeddings; deliberately does not share its pruning logic.
inline int brute_force_embedding_count(const FiniteStructure& a, const FiniteStructure& b) {
    std::vector<ElemId> av(a.universe().begin(), a.universe().end());
    std::vector<ElemId> bv(b.universe().begin(), b.universe().end());
    if (av.size() > bv.size()) return 0;
    std::vector<int> idx(bv.size());
    for (std::size_t i = 0; i < bv.size(); ++i) idx[i] = static_cast<int>(i);
    int count = 0;
    std::vector<int> choose(av.size());
    std::function<void(std::size_t, std::vector<bool>&)> rec = [&](std::size_t i, std::vector<bool>& used) {
        if (i == av.size()) {
            PartialIso p{&a, &b, {}};
            for (std::size_t j = 0; j < av.size(); ++j) p.map[av[j]] = bv[static_cast<std::size_t>(choose[j])];
            if (p.valid()) ++count;
            return;
        }
        for (std::size_t j = 0; j < bv.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            choose[i] = static_cast<int>(j);
            rec(i + 1, used);
            used[j] = false;
        }
    };
    std::vector<bool> used(bv.size(), false);
    rec(0, used);
    return count;
}

}  // namespace testutil
