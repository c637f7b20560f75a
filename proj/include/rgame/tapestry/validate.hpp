// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <iterator>
#include <limits>
#include <string>
#include <utility>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rgame/tapestry/informon.hpp"

namespace rgame::tapestry {

struct Violation {
    int axiom = 0;
    std::vector<InformonId> ids;
    std::string detail;
};

struct ValidateOptions {
    // Axiom 7 read literally: for Y in the slice and X in content(Y), overlapping
    // contents must nest (content(X) within content(Y)).
    bool strict_axiom7 = false;
};

namespace detail {

// Every informon of the slice and of the priors, newest slice first.
inline std::vector<const Informon*> all_informons(const CausalTapestry& tap) {
    std::vector<const Informon*> out;
    out.reserve(tap.informons().size() + tap.priors().informon_count());
    for (const auto& inf : tap.informons()) out.push_back(&inf);
    tap.priors().for_each_slice([&](const Slice& s) {
        for (const auto& inf : s.informons()) out.push_back(&inf);
    });
    return out;
}

inline std::int64_t max_point_t(const Slice& s) {
    std::int64_t m = std::numeric_limits<std::int64_t>::min();
    for (const auto& inf : s.informons()) m = std::max(m, inf.point.t);
    return m;
}

// max_point_t memoized per slice; a window references only a few slices.
class MaxPointT {
public:
    std::int64_t operator()(const Slice& s) {
        for (const auto& [p, m] : seen_) {
            if (p == &s) return m;
        }
        seen_.emplace_back(&s, max_point_t(s));
        return seen_.back().second;
    }

private:
    std::vector<std::pair<const Slice*, std::int64_t>> seen_;
};

// Resolves an explicit id against slice then priors.
inline const Informon* resolve(const CausalTapestry& tap, InformonId id) { return tap.find(id); }

// Axioms 3, 4 and the injectivity half of 8, over the whole union.
inline void check_identity(const CausalTapestry& tap, std::vector<Violation>& out) {
    auto all = all_informons(tap);

    auto by_id = all;
    std::sort(by_id.begin(), by_id.end(), [](const Informon* a, const Informon* b) { return a->id < b->id; });
    for (std::size_t i = 0; i < by_id.size();) {
        std::size_t j = i + 1;
        bool differs = false;
        while (j < by_id.size() && by_id[j]->id == by_id[i]->id) {
            differs = differs || !(*by_id[j] == *by_id[i]);
            ++j;
        }
        if (differs) out.push_back({3, {by_id[i]->id}, "identifier shared by distinct informons"});
        i = j;
    }

    auto by_point = std::move(all);
    std::sort(by_point.begin(), by_point.end(), [](const Informon* a, const Informon* b) {
        if (a->point != b->point) return a->point < b->point;
        return a->id < b->id;
    });
    for (std::size_t i = 0; i < by_point.size();) {
        std::size_t j = i + 1;
        while (j < by_point.size() && by_point[j]->point == by_point[i]->point) ++j;
        for (std::size_t a = i; a < j; ++a) {
            for (std::size_t b = a + 1; b < j; ++b) {
                const Informon& x = *by_point[a];
                const Informon& y = *by_point[b];
                if (x.id == y.id) continue;
                out.push_back({8, {x.id, y.id}, "two informons embed at the same lattice point"});
                if (same_interpretation(x, y)) {
                    out.push_back({4, {x.id, y.id}, "same interpretation and content under two identifiers"});
                }
            }
        }
        i = j;
    }
}

// Axioms 1, 5, 6 and the ordering half of 8 for the slice informons.
inline void check_contents(const CausalTapestry& tap, std::vector<Violation>& out) {
    const Slice& slice = tap.slice();
    const std::int64_t t0 = tap.slice_t();
    MaxPointT max_t;
    for (const Informon& y : slice.informons()) {
        if (y.point.t != t0) out.push_back({8, {y.id}, "informon does not lie on the slice time"});
        if (!within_extent(y.point, tap.config())) out.push_back({8, {y.id}, "informon outside the lattice extent"});

        if (const Neighborhood* n = y.content.neighborhood()) {
            if (n->slice_t == t0) {
                out.push_back({6, {y.id}, "content drawn from the informon's own slice"});
            } else if (const Slice* s = tap.priors().slice_at(n->slice_t)) {
                if (n->slice_t >= y.point.t || max_t(*s) >= y.point.t) {
                    out.push_back({8, {y.id}, "content not strictly earlier"});
                }
            } else {
                out.push_back({1, {y.id}, "content slice not in the prior union"});
            }
            continue;
        }
        for (InformonId id : y.content.ids()) {
            if (id == y.id) {
                out.push_back({5, {y.id}, "informon contains itself"});
            } else if (slice.find(id) != nullptr) {
                out.push_back({6, {y.id, id}, "content contains a slice-mate"});
            } else if (const Informon* x = tap.priors().find(id)) {
                if (x->point.t >= y.point.t) out.push_back({8, {y.id, id}, "content not strictly earlier"});
            } else {
                out.push_back({1, {y.id, id}, "content member not in the prior union"});
            }
        }
    }
}

// Axiom 2: the graph induced on the slice and its content members is acyclic.
inline void check_acyclic(const CausalTapestry& tap, std::vector<Violation>& out) {
    const Slice& slice = tap.slice();
    // Fast path: every edge strictly increases t, so no cycle is possible.
    bool monotone = true;
    MaxPointT max_t;
    auto edge_ok = [&](const Informon& x, const Informon& y) { return x.point.t < y.point.t; };
    std::vector<const Informon*> members;
    std::vector<const Slice*> window_slices;
    for (const Informon& y : slice.informons()) {
        if (const Neighborhood* n = y.content.neighborhood()) {
            const Slice* s = tap.priors().slice_at(n->slice_t);
            if (s == nullptr) continue;
            if (max_t(*s) >= y.point.t) monotone = false;
            if (std::find(window_slices.begin(), window_slices.end(), s) == window_slices.end()) {
                window_slices.push_back(s);
            }
            continue;
        }
        for (InformonId id : y.content.ids()) {
            if (id == y.id) continue;
            if (const Informon* x = resolve(tap, id)) {
                members.push_back(x);
                if (!edge_ok(*x, y)) monotone = false;
            }
        }
    }
    // Implicit members are covered by checking their whole slice.
    for (const Slice* s : window_slices) {
        for (const Informon& x : s->informons()) members.push_back(&x);
    }
    for (const Informon* x : members) {
        if (const Neighborhood* n = x->content.neighborhood()) {
            const Slice* s = tap.priors().slice_at(n->slice_t);
            if (s != nullptr && max_t(*s) >= x->point.t) monotone = false;
            continue;
        }
        for (InformonId id : x->content.ids()) {
            if (const Informon* w = resolve(tap, id); w != nullptr && w->id != x->id && !edge_ok(*w, *x)) {
                monotone = false;
            }
        }
    }
    if (monotone) return;

    // General case: explicit DFS over V = slice + resolved members.
    std::unordered_map<InformonId, const Informon*> vertex;
    for (const Informon& y : slice.informons()) vertex.emplace(y.id, &y);
    for (const Informon& y : slice.informons()) {
        for_each_member(y.content, tap.priors(), [&](const Informon& x) { vertex.emplace(x.id, &x); });
        if (y.content.is_explicit()) {
            for (InformonId id : y.content.ids()) {
                if (const Informon* x = resolve(tap, id)) vertex.emplace(x->id, x);
            }
        }
    }
    // Edge x -> y for x in content(y); we walk reversed (y -> its contents).
    auto preds = [&](const Informon& y) {
        std::vector<InformonId> ids;
        if (y.content.is_explicit()) {
            for (InformonId id : y.content.ids()) {
                if (id != y.id && vertex.count(id)) ids.push_back(id);
            }
        } else {
            for_each_member(y.content, tap.priors(), [&](const Informon& x) {
                if (x.id != y.id && vertex.count(x.id)) ids.push_back(x.id);
            });
        }
        return ids;
    };
    std::unordered_map<InformonId, int> state;  // 1 on stack, 2 done
    std::vector<InformonId> order;
    for (const auto& [id, _] : vertex) order.push_back(id);
    std::sort(order.begin(), order.end());
    for (InformonId root : order) {
        if (state[root] != 0) continue;
        std::vector<std::pair<InformonId, std::vector<InformonId>>> stack;
        stack.push_back({root, preds(*vertex.at(root))});
        state[root] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next.empty()) {
                state[v] = 2;
                stack.pop_back();
                continue;
            }
            const InformonId w = next.back();
            next.pop_back();
            if (state[w] == 1) {
                std::vector<InformonId> cycle;
                for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                    cycle.push_back(it->first);
                    if (it->first == w) break;
                }
                std::sort(cycle.begin(), cycle.end());
                out.push_back({2, cycle, "content graph has a cycle"});
                return;
            }
            if (state[w] == 0) {
                state[w] = 1;
                stack.push_back({w, preds(*vertex.at(w))});
            }
        }
    }
}

inline void check_axiom7(const CausalTapestry& tap, std::vector<Violation>& out) {
    for (const Informon& y : tap.informons()) {
        const auto sy = member_ids(y.content, tap.priors());
        for (InformonId id : sy) {
            const Informon* x = tap.priors().find(id);
            if (x == nullptr) continue;
            const auto sx = member_ids(x->content, tap.priors());
            std::vector<InformonId> common;
            std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(), std::back_inserter(common));
            if (!common.empty() && !std::includes(sy.begin(), sy.end(), sx.begin(), sx.end())) {
                out.push_back({7, {y.id, x->id}, "overlapping contents do not nest"});
            }
        }
    }
}

}  // namespace detail

// Lists every consistency-axiom violation; empty means the tapestry is consistent.
inline std::vector<Violation> validate(const CausalTapestry& tap, const ValidateOptions& opts = {}) {
    std::vector<Violation> out;
    detail::check_identity(tap, out);
    detail::check_contents(tap, out);
    detail::check_acyclic(tap, out);
    if (opts.strict_axiom7) detail::check_axiom7(tap, out);
    std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) { return a.axiom < b.axiom; });
    return out;
}

inline std::string describe(const Violation& v) {
    std::string s = "axiom " + std::to_string(v.axiom) + ": " + v.detail + " [";
    for (std::size_t i = 0; i < v.ids.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v.ids[i]);
    }
    return s + "]";
}

}  // namespace rgame::tapestry
