// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rgame/tapestry/informon.hpp"

namespace rgame::tapestry {

using nlohmann::json;

inline json to_json(const LatticeConfig& c) {
    json j = {{"dt", c.dt}, {"dx", c.dx}, {"dims", c.dims}, {"extent", c.extent}, {"hbar", c.hbar}, {"mass", c.mass}};
    if (c.band_limit) j["band_limit"] = *c.band_limit;
    return j;
}

inline LatticeConfig config_from_json(const json& j) {
    LatticeConfig c;
    c.dt = j.at("dt").get<double>();
    c.dx = j.at("dx").get<double>();
    c.dims = j.at("dims").get<int>();
    c.extent = j.at("extent").get<int>();
    c.hbar = j.value("hbar", 1.0);
    c.mass = j.value("mass", 1.0);
    if (j.contains("band_limit") && !j["band_limit"].is_null()) c.band_limit = j["band_limit"].get<double>();
    return c;
}

inline json to_json(const Informon& inf) {
    json x = json::array();
    for (int k = 0; k < inf.point.dims; ++k) x.push_back(inf.point.x[k]);
    json j = {{"id", inf.id}, {"t", inf.point.t}, {"x", x}, {"theta", {inf.theta.real(), inf.theta.imag()}}};
    j["tag"] = inf.tag ? json(*inf.tag) : json(nullptr);
    if (inf.content.is_explicit()) {
        j["content"] = inf.content.ids();
    } else {
        const auto& n = *inf.content.neighborhood();
        json center = json::array(), radius = json::array();
        for (int k = 0; k < inf.point.dims; ++k) {
            center.push_back(n.center[k]);
            radius.push_back(n.radius[k]);
        }
        j["content"] = {{"slice_t", n.slice_t}, {"center", center}, {"radius", radius},
                        {"tag", n.tag ? json(*n.tag) : json(nullptr)}};
    }
    if (!inf.descriptors.empty()) j["descriptors"] = inf.descriptors;
    if (inf.process_element) j["process_element"] = *inf.process_element;
    return j;
}

inline Informon informon_from_json(const json& j) {
    Informon inf;
    inf.id = j.at("id").get<InformonId>();
    inf.point.t = j.at("t").get<std::int64_t>();
    const auto& x = j.at("x");
    if (x.size() < 1 || x.size() > static_cast<std::size_t>(kMaxDims)) {
        throw domain_error("informon x must have 1 or 2 components");
    }
    inf.point.dims = static_cast<int>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) inf.point.x[k] = x[k].get<int>();
    const auto& th = j.at("theta");
    inf.theta = Complex(th.at(0).get<double>(), th.at(1).get<double>());
    if (j.contains("tag") && !j["tag"].is_null()) inf.tag = j["tag"].get<Tag>();
    const auto& c = j.at("content");
    if (c.is_array()) {
        inf.content = Content::of(c.get<std::vector<InformonId>>());
    } else {
        Neighborhood n;
        n.slice_t = c.at("slice_t").get<std::int64_t>();
        for (std::size_t k = 0; k < c.at("center").size() && k < kMaxDims; ++k) {
            n.center[k] = c["center"][k].get<int>();
            n.radius[k] = c.at("radius").at(k).get<int>();
        }
        if (c.contains("tag") && !c["tag"].is_null()) n.tag = c["tag"].get<Tag>();
        inf.content = Content::of(n);
    }
    if (j.contains("descriptors")) inf.descriptors = j["descriptors"].get<std::vector<double>>();
    if (j.contains("process_element")) inf.process_element = j["process_element"].get<std::string>();
    return inf;
}

namespace detail {
inline json slice_json(const Slice& s) {
    json arr = json::array();
    for (const auto& inf : s.informons()) arr.push_back(to_json(inf));
    return {{"slice_t", s.t()}, {"informons", arr}};
}
}  // namespace detail

// {config, slice_t, informons, layout, priors: [{slice_t, informons}] oldest first}.
inline json to_json(const CausalTapestry& tap, bool include_priors = true) {
    json j = detail::slice_json(tap.slice());
    j["config"] = to_json(tap.config());
    json tags = json::array();
    for (const auto& t : tap.layout().tags) tags.push_back(t ? json(*t) : json(nullptr));
    j["layout"] = {{"stride", tap.layout().stride}, {"tags", tags}};
    if (include_priors) {
        std::vector<json> priors;
        tap.priors().for_each_slice([&](const Slice& s) { priors.push_back(detail::slice_json(s)); });
        j["priors"] = json(std::vector<json>(priors.rbegin(), priors.rend()));
    }
    return j;
}

inline CausalTapestry tapestry_from_json(const json& j) {
    const LatticeConfig cfg = config_from_json(j.at("config"));
    auto informons_of = [](const json& s) {
        std::vector<Informon> out;
        for (const auto& e : s.at("informons")) out.push_back(informon_from_json(e));
        return out;
    };
    PriorUnion priors;
    if (j.contains("priors")) {
        for (const auto& s : j["priors"]) {
            priors = priors.with(std::make_shared<const Slice>(s.at("slice_t").get<std::int64_t>(), informons_of(s), cfg));
        }
    }
    SiteLayout layout;
    if (j.contains("layout")) {
        layout.stride = j["layout"].at("stride").get<int>();
        layout.tags.clear();
        for (const auto& t : j["layout"].at("tags")) layout.tags.push_back(t.is_null() ? std::nullopt : std::optional<Tag>(t.get<Tag>()));
        if (layout.stride < 1 || layout.tags.size() != static_cast<std::size_t>(layout.stride)) {
            throw domain_error("layout: tags must have one entry per sublattice phase");
        }
    }
    return CausalTapestry(cfg, j.at("slice_t").get<std::int64_t>(), informons_of(j), std::move(priors), std::move(layout));
}

}  // namespace rgame::tapestry
