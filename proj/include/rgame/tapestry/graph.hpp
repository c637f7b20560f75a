// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rgame/tapestry/informon.hpp"
#include "rgame/tapestry/validate.hpp"

namespace rgame::tapestry {

using Edge = std::pair<InformonId, InformonId>;  // (from, to): information flows from -> to

struct ContentGraph {
    std::vector<InformonId> vertices;  // sorted
    std::vector<Edge> edges;           // sorted, unique
};

struct ContentGraphResult {
    ContentGraph graph;
    std::optional<Violation> cycle;  // axiom-2 report when the union is cyclic
};

namespace detail {

inline std::optional<std::vector<InformonId>> find_cycle(const ContentGraph& g) {
    std::map<InformonId, std::vector<InformonId>> succ;
    for (const auto& [a, b] : g.edges) succ[a].push_back(b);
    std::map<InformonId, int> state;
    for (InformonId root : g.vertices) {
        if (state[root] != 0) continue;
        std::vector<std::pair<InformonId, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, pos] = stack.back();
            const auto& next = succ[v];
            if (pos == next.size()) {
                state[v] = 2;
                stack.pop_back();
                continue;
            }
            const InformonId w = next[pos++];
            if (state[w] == 1) {
                std::vector<InformonId> cycle;
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    cycle.push_back(it->first);
                    if (it->first == w) break;
                }
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (state[w] == 0) {
                state[w] = 1;
                stack.push_back({w, 0});
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Union of all content sets over the slice and its priors: edge (a, b) for every
// a in content(b). Vertices are every id seen as an informon or as a content member.
inline ContentGraphResult content_graph(const CausalTapestry& tap) {
    ContentGraphResult r;
    auto& g = r.graph;
    auto add_informon = [&](const Informon& b) {
        g.vertices.push_back(b.id);
        if (b.content.is_explicit()) {
            for (InformonId a : b.content.ids()) {
                g.vertices.push_back(a);
                g.edges.push_back({a, b.id});
            }
        } else {
            for_each_member(b.content, tap.priors(), [&](const Informon& a) {
                g.vertices.push_back(a.id);
                g.edges.push_back({a.id, b.id});
            });
        }
    };
    for (const auto& inf : tap.informons()) add_informon(inf);
    tap.priors().for_each_slice([&](const Slice& s) {
        for (const auto& inf : s.informons()) add_informon(inf);
    });
    std::sort(g.vertices.begin(), g.vertices.end());
    g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    if (auto cycle = detail::find_cycle(g)) {
        r.cycle = Violation{2, *cycle, "content graph has a cycle"};
    }
    return r;
}

// Vertex of the covering graph: either an (in-edge, out-edge) pair through a
// vertex of the content graph, or a terminal vertex (no out-edges).
struct CoverVertex {
    bool terminal = false;
    InformonId through = 0;
    Edge in{};
    Edge out{};

    friend bool operator==(const CoverVertex&, const CoverVertex&) = default;
};

struct CoveringGraph {
    std::vector<CoverVertex> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // indices into vertices
    std::vector<std::size_t> sink_edges;                     // vertex index -> the sink phi
};

// Pair p1 = (e(., v), e(v, w)) is joined to p2 = (e(u', v'), e(v', .)) iff w == u'.
// Every terminal vertex gets an edge to the sink.
inline CoveringGraph covering_graph(const ContentGraph& g) {
    std::map<InformonId, std::vector<Edge>> in_edges, out_edges;
    for (const auto& e : g.edges) {
        out_edges[e.first].push_back(e);
        in_edges[e.second].push_back(e);
    }
    CoveringGraph c;
    std::map<InformonId, std::vector<std::size_t>> pairs_by_in_source;
    for (InformonId v : g.vertices) {
        const auto& ins = in_edges[v];
        const auto& outs = out_edges[v];
        for (const auto& ei : ins) {
            for (const auto& eo : outs) {
                pairs_by_in_source[ei.first].push_back(c.vertices.size());
                c.vertices.push_back({false, v, ei, eo});
            }
        }
        if (outs.empty()) {
            c.sink_edges.push_back(c.vertices.size());
            c.vertices.push_back({true, v, {}, {}});
        }
    }
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        const auto& p = c.vertices[i];
        if (p.terminal) continue;
        auto it = pairs_by_in_source.find(p.out.second);
        if (it == pairs_by_in_source.end()) continue;
        for (std::size_t j : it->second) c.edges.push_back({i, j});
    }
    return c;
}

inline bool is_acyclic(const CoveringGraph& c) {
    std::vector<std::vector<std::size_t>> succ(c.vertices.size());
    std::vector<int> indeg(c.vertices.size(), 0);
    for (const auto& [a, b] : c.edges) {
        succ[a].push_back(b);
        ++indeg[b];
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < indeg.size(); ++i) {
        if (indeg[i] == 0) ready.push_back(i);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const auto v = ready.back();
        ready.pop_back();
        ++seen;
        for (auto w : succ[v]) {
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    return seen == c.vertices.size();
}

}  // namespace rgame::tapestry
