// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "rgame/common.hpp"
#include "rgame/tapestry/lattice.hpp"

namespace rgame::tapestry {

using InformonId = std::uint64_t;
using Tag = int;

// Implicit content: every informon of slice `slice_t` whose site lies in the
// box |x_k - center_k| <= radius_k and, when `tag` is set, carries that tag.
// Used for exhaustive 2-D rounds where explicit id lists would not fit in memory.
struct Neighborhood {
    std::int64_t slice_t = 0;
    SiteIndex center{};
    std::array<int, kMaxDims> radius{};
    std::optional<Tag> tag;

    friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

// Content set of an informon: the prior informons whose information enters it.
class Content {
public:
    Content() = default;

    static Content of(std::vector<InformonId> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        Content c;
        c.rep_ = std::move(ids);
        return c;
    }
    static Content of(const Neighborhood& n) {
        Content c;
        c.rep_ = n;
        return c;
    }

    bool is_explicit() const { return std::holds_alternative<std::vector<InformonId>>(rep_); }
    // Sorted, duplicate-free ids; only valid when is_explicit().
    const std::vector<InformonId>& ids() const { return std::get<std::vector<InformonId>>(rep_); }
    const Neighborhood* neighborhood() const { return std::get_if<Neighborhood>(&rep_); }

    bool contains_explicit(InformonId id) const {
        const auto& v = ids();
        return std::binary_search(v.begin(), v.end(), id);
    }

    friend bool operator==(const Content&, const Content&) = default;

private:
    std::variant<std::vector<InformonId>, Neighborhood> rep_{std::vector<InformonId>{}};
};

// One actual occasion [n]<alpha>{G}: identifier, lattice interpretation with its
// interpolation weight and subprocess tag, and content.
struct Informon {
    InformonId id = 0;
    LatticePoint point;
    Complex theta{0.0, 0.0};
    std::optional<Tag> tag;
    Content content;
    // Opaque interpretation extras (descriptor vector, process element); carried, never read.
    std::vector<double> descriptors;
    std::optional<std::string> process_element;

    friend bool operator==(const Informon&, const Informon&) = default;
};

// Same interpretation and content (axiom 4 compares these).
inline bool same_interpretation(const Informon& a, const Informon& b) {
    return a.point == b.point && a.theta == b.theta && a.tag == b.tag && a.content == b.content &&
           a.descriptors == b.descriptors && a.process_element == b.process_element;
}

// An immutable set of informons sharing one time index, with id and site lookups.
class Slice {
public:
    Slice(std::int64_t t, std::vector<Informon> informons, const LatticeConfig& config)
        : t_(t), informons_(std::move(informons)), config_(config) {
        index_ids();
        index_sites();
    }

    std::int64_t t() const { return t_; }
    const std::vector<Informon>& informons() const { return informons_; }
    std::size_t size() const { return informons_.size(); }
    const LatticeConfig& config() const { return config_; }

    const Informon* find(InformonId id) const {
        if (informons_.empty() || id < min_id_ || id > max_id_) return nullptr;
        if (contiguous_) {
            return &informons_[static_cast<std::size_t>(id - min_id_)];
        }
        auto it = by_id_.find(id);
        return it == by_id_.end() ? nullptr : &informons_[it->second];
    }

    // Informon embedded at `x`, or nullptr. First one wins if a site is duplicated.
    const Informon* at(const SiteIndex& x) const {
        const auto off = site_offset(x, config_);
        if (off < 0) return nullptr;
        const auto idx = by_site_[static_cast<std::size_t>(off)];
        return idx < 0 ? nullptr : &informons_[static_cast<std::size_t>(idx)];
    }

    InformonId min_id() const { return min_id_; }
    InformonId max_id() const { return max_id_; }

    // Members of an implicit content set that live in this slice.
    template <class Fn>
    void for_each_in(const Neighborhood& n, Fn&& fn) const {
        if (n.slice_t != t_) return;
        SiteIndex lo{}, hi{};
        for (int k = 0; k < kMaxDims; ++k) {
            if (k < config_.dims) {
                lo[k] = std::max(n.center[k] - n.radius[k], -config_.extent);
                hi[k] = std::min(n.center[k] + n.radius[k], config_.extent);
            }
        }
        SiteIndex x = lo;
        if (config_.dims == 1) {
            for (x[0] = lo[0]; x[0] <= hi[0]; ++x[0]) visit_site(x, n, fn);
        } else {
            for (x[0] = lo[0]; x[0] <= hi[0]; ++x[0]) {
                for (x[1] = lo[1]; x[1] <= hi[1]; ++x[1]) visit_site(x, n, fn);
            }
        }
    }

private:
    template <class Fn>
    void visit_site(const SiteIndex& x, const Neighborhood& n, Fn& fn) const {
        const Informon* inf = at(x);
        if (inf != nullptr && (!n.tag || inf->tag == n.tag)) fn(*inf);
    }

    void index_ids() {
        if (informons_.empty()) return;
        min_id_ = informons_.front().id;
        max_id_ = informons_.front().id;
        bool ascending = true;
        for (std::size_t i = 1; i < informons_.size(); ++i) {
            min_id_ = std::min(min_id_, informons_[i].id);
            max_id_ = std::max(max_id_, informons_[i].id);
            ascending = ascending && informons_[i].id == informons_[i - 1].id + 1;
        }
        contiguous_ = ascending;
        if (!contiguous_) {
            by_id_.reserve(informons_.size());
            for (std::size_t i = 0; i < informons_.size(); ++i) {
                by_id_.emplace(informons_[i].id, static_cast<std::uint32_t>(i));
            }
        }
    }

    void index_sites() {
        if (config_.dims < 1 || config_.dims > kMaxDims || config_.extent < 1) return;
        by_site_.assign(config_.sites_per_slice(), -1);
        for (std::size_t i = 0; i < informons_.size(); ++i) {
            const auto& p = informons_[i].point;
            if (!within_extent(p, config_)) continue;
            auto& slot = by_site_[static_cast<std::size_t>(site_offset(p.x, config_))];
            if (slot < 0) slot = static_cast<std::int32_t>(i);
        }
    }

    std::int64_t t_;
    std::vector<Informon> informons_;
    LatticeConfig config_;
    InformonId min_id_ = 0;
    InformonId max_id_ = 0;
    bool contiguous_ = true;
    std::unordered_map<InformonId, std::uint32_t> by_id_;
    std::vector<std::int32_t> by_site_;
};

// Append-only union of earlier slices, shared structurally between tapestries.
class PriorUnion {
public:
    PriorUnion() = default;

    PriorUnion with(std::shared_ptr<const Slice> slice) const {
        PriorUnion out;
        out.head_ = std::make_shared<const Node>(Node{std::move(slice), head_, depth() + 1});
        return out;
    }

    // Keeps only the `k` most recent slices (older ones become unreachable).
    PriorUnion retain_last(std::size_t k) const {
        std::vector<std::shared_ptr<const Slice>> keep;
        for (auto n = head_; n && keep.size() < k; n = n->parent) keep.push_back(n->slice);
        PriorUnion out;
        for (auto it = keep.rbegin(); it != keep.rend(); ++it) out = out.with(*it);
        return out;
    }

    std::size_t depth() const { return head_ ? head_->depth : 0; }
    bool empty() const { return head_ == nullptr; }

    const Informon* find(InformonId id) const {
        for (auto n = head_; n; n = n->parent) {
            if (const Informon* inf = n->slice->find(id)) return inf;
        }
        return nullptr;
    }

    const Slice* slice_at(std::int64_t t) const {
        for (auto n = head_; n; n = n->parent) {
            if (n->slice->t() == t) return n->slice.get();
        }
        return nullptr;
    }

    // Newest first.
    template <class Fn>
    void for_each_slice(Fn&& fn) const {
        for (auto n = head_; n; n = n->parent) fn(*n->slice);
    }

    std::size_t informon_count() const {
        std::size_t total = 0;
        for_each_slice([&](const Slice& s) { total += s.size(); });
        return total;
    }

private:
    struct Node {
        std::shared_ptr<const Slice> slice;
        std::shared_ptr<const Node> parent;
        std::size_t depth = 0;
    };
    std::shared_ptr<const Node> head_;
};

// Assignment of lattice sites to subprocess tags: site x belongs to
// tags[x[0] mod stride]. A single untagged process is stride 1, tags {nullopt}.
struct SiteLayout {
    int stride = 1;
    std::vector<std::optional<Tag>> tags{std::nullopt};

    static SiteLayout single(std::optional<Tag> tag = std::nullopt) { return {1, {tag}}; }
    static SiteLayout interleaved(std::vector<Tag> tag_list) {
        SiteLayout l;
        l.stride = static_cast<int>(tag_list.size());
        l.tags.assign(tag_list.begin(), tag_list.end());
        return l;
    }

    int phase(const SiteIndex& x) const {
        const int r = x[0] % stride;
        return r < 0 ? r + stride : r;
    }
    std::optional<Tag> tag_at(const SiteIndex& x) const { return tags[static_cast<std::size_t>(phase(x))]; }
    std::optional<int> phase_of_tag(Tag tag) const {
        for (std::size_t i = 0; i < tags.size(); ++i) {
            if (tags[i] == tag) return static_cast<int>(i);
        }
        return std::nullopt;
    }

    friend bool operator==(const SiteLayout&, const SiteLayout&) = default;
};

// One space-like slice of informons plus the accumulated union of earlier slices.
// Immutable once built.
class CausalTapestry {
public:
    CausalTapestry(LatticeConfig config, std::int64_t slice_t, std::vector<Informon> informons,
                   PriorUnion priors = {}, SiteLayout layout = {})
        : config_(config),
          current_(std::make_shared<const Slice>(slice_t, std::move(informons), config)),
          priors_(std::move(priors)),
          layout_(std::move(layout)) {}

    std::int64_t slice_t() const { return current_->t(); }
    const std::vector<Informon>& informons() const { return current_->informons(); }
    const Slice& slice() const { return *current_; }
    std::shared_ptr<const Slice> slice_ptr() const { return current_; }
    const PriorUnion& priors() const { return priors_; }
    const LatticeConfig& config() const { return config_; }
    const SiteLayout& layout() const { return layout_; }

    // Smallest identifier never used by this slice or any prior.
    InformonId next_id() const {
        InformonId next = 0;
        auto bump = [&](const Slice& s) {
            if (s.size() > 0) next = std::max(next, s.max_id() + 1);
        };
        bump(*current_);
        priors_.for_each_slice(bump);
        return next;
    }

    // Looks an id up in the slice first, then in the priors.
    const Informon* find(InformonId id) const {
        if (const Informon* inf = current_->find(id)) return inf;
        return priors_.find(id);
    }

private:
    LatticeConfig config_;
    std::shared_ptr<const Slice> current_;
    PriorUnion priors_;
    SiteLayout layout_;
};

// Resolves every member of a content set against the priors. Unresolvable explicit
// ids are reported through `missing` instead.
template <class Fn, class Missing>
void for_each_member(const Content& content, const PriorUnion& priors, Fn&& fn, Missing&& missing) {
    if (content.is_explicit()) {
        for (InformonId id : content.ids()) {
            if (const Informon* inf = priors.find(id)) {
                fn(*inf);
            } else {
                missing(id);
            }
        }
        return;
    }
    const Neighborhood& n = *content.neighborhood();
    if (const Slice* s = priors.slice_at(n.slice_t)) s->for_each_in(n, fn);
}

template <class Fn>
void for_each_member(const Content& content, const PriorUnion& priors, Fn&& fn) {
    for_each_member(content, priors, std::forward<Fn>(fn), [](InformonId) {});
}

// Materialized ids of a content set (implicit sets are expanded against the priors).
inline std::vector<InformonId> member_ids(const Content& content, const PriorUnion& priors) {
    if (content.is_explicit()) return content.ids();
    std::vector<InformonId> ids;
    for_each_member(content, priors, [&](const Informon& inf) { ids.push_back(inf.id); });
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace rgame::tapestry
