#include "saccade/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "saccade/errors.hpp"
#include "saccade/log.hpp"
#include "saccade/rng.hpp"

#include <json.hpp>

namespace saccade {

using nlohmann::json;

bool IndicatorGraph::has_id(const std::string& id) const {
    return nodes.count(id) > 0 || composites.count(id) > 0;
}

std::string IndicatorGraph::unique_id(const std::string& base) const {
    if (!has_id(base)) return base;
    for (int i = 2;; ++i) {
        const std::string candidate = base + "_" + std::to_string(i);
        if (!has_id(candidate)) return candidate;
    }
}

void IndicatorGraph::add_node(Indicator ind) {
    if (has_id(ind.id)) throw ValidationError("duplicate node id: " + ind.id);
    nodes.emplace(ind.id, std::move(ind));
}

const Indicator& IndicatorGraph::node(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw ValidationError("unknown indicator: " + id);
    return it->second;
}

ControlProfile scan_controls(const IndicatorGraph& graph, const std::string& indicator_id,
                             const std::vector<Signal>& signals,
                             const std::vector<std::vector<int>>& trigger_sites, int u_min,
                             int u_max, int step, const FragmentCloud& background, int k,
                             std::uint64_t seed) {
    graph.node(indicator_id); // unknown indicator -> error
    if (step < 1) throw ValidationError("scan step must be >= 1");
    if (u_min > u_max) throw ValidationError("u_min must not exceed u_max");

    // The background entropy does not depend on u; estimate it once.
    const auto bg_points = cloud_points(background);
    const EntropyEstimate h_bg = knn_entropy(bg_points, k);

    ControlProfile profile;
    for (long long u = u_min; u <= u_max; u += step) {
        const Control control{static_cast<int>(u)};
        auto res = collect_control_results(signals, trigger_sites, control, background.width);

        ProfileEntry entry;
        entry.u = control;
        entry.cloud_size = static_cast<int>(res.cloud.size());
        entry.skipped = res.skipped;
        entry.report.entropy_background_nats = h_bg.nats;
        if (entry.cloud_size == 0) {
            entry.report.degenerate = true;
            entry.report.entropy_drop = 0.0;
            entry.report.entropy_nats = h_bg.nats;
        } else {
            const auto pts = cloud_points(res.cloud);
            entry.report.nn_purity =
                nn_purity(pts, bg_points, derive_seed(seed, "scan.purity." + std::to_string(u)));
            if (entry.cloud_size > k) {
                const EntropyEstimate h = knn_entropy(pts, k);
                entry.report.entropy_nats = h.nats;
                entry.report.degenerate = h.degenerate || h_bg.degenerate;
            } else {
                // Too few fragments for the estimator; report the flag, not a guess.
                entry.report.entropy_nats = h_bg.nats;
                entry.report.degenerate = true;
            }
            entry.report.entropy_drop = entry.report.entropy_background_nats - entry.report.entropy_nats;
        }
        profile.entries.push_back(std::move(entry));
        log_debug("scan u=%lld purity=%.3f drop=%.2f size=%d skipped=%d", u,
                  profile.entries.back().report.nn_purity, profile.entries.back().report.entropy_drop,
                  profile.entries.back().cloud_size, profile.entries.back().skipped);
    }
    return profile;
}

CharacteristicControls find_characteristic_controls(const ControlProfile& profile,
                                                    double purity_threshold,
                                                    int exclusion_radius) {
    if (profile.entries.empty()) throw ValidationError("profile must be non-empty");
    CharacteristicControls out;
    for (const auto& e : profile.entries) {
        if (std::abs(e.u.u) <= exclusion_radius) continue;
        if (e.report.nn_purity >= purity_threshold) out.all.push_back(e.u);
    }
    for (const auto& c : out.all) {
        if (c.u > 0 && (!out.maximal_right || c.u > out.maximal_right->u)) out.maximal_right = c;
        if (c.u < 0 && (!out.maximal_left || c.u < out.maximal_left->u)) out.maximal_left = c;
    }
    return out;
}

GrowResult grow_indicator(IndicatorGraph& graph, const std::string& a_id, Control u,
                          const std::vector<Signal>& signals,
                          const std::vector<std::vector<int>>& a_trigger_sites,
                          const FragmentCloud& background, std::uint64_t seed, int k_neighbors,
                          int microsaccade_radius) {
    const Indicator& a = graph.node(a_id);
    auto res = collect_control_results(signals, a_trigger_sites, u, a.width);
    if (res.cloud.fragments.empty()) {
        throw ExperimentError("control u=" + std::to_string(u.u) + " from " + a_id +
                              " produced an empty result cloud");
    }
    const double purity = nn_purity(cloud_points(res.cloud), cloud_points(background),
                                    derive_seed(seed, "grow.purity"));

    auto rng = make_engine(derive_seed(seed, "grow.pick"));
    std::uniform_int_distribution<std::size_t> pick(0, res.cloud.size() - 1);
    const std::size_t chosen = pick(rng);

    GrowResult out;
    out.b_id = graph.unique_id(a_id + "_u" + std::to_string(u.u));
    Indicator b = make_point_indicator(res.cloud.fragments[chosen], res.cloud, k_neighbors, out.b_id);
    graph.add_node(std::move(b));

    out.edge_index = graph.edges.size();
    graph.edges.push_back(GraphEdge{a_id, out.b_id, u, microsaccade_radius});

    out.composite_id = graph.unique_id(a_id + "*" + out.b_id);
    graph.composites.emplace(out.composite_id, CompositeNode{out.composite_id, out.edge_index});

    graph.log.push_back({{"op", "grow_indicator"},
                         {"a", a_id},
                         {"b", out.b_id},
                         {"composite", out.composite_id},
                         {"u", std::to_string(u.u)},
                         {"microsaccade_radius", std::to_string(microsaccade_radius)},
                         {"k_neighbors", std::to_string(k_neighbors)},
                         {"seed", std::to_string(seed)},
                         {"chosen_index", std::to_string(chosen)},
                         {"observed_purity", std::to_string(purity)},
                         {"cloud_size", std::to_string(res.cloud.size())},
                         {"skipped", std::to_string(res.skipped)}});
    log_info("grew %s --u=%d--> %s (purity %.3f, composite %s)", a_id.c_str(), u.u,
             out.b_id.c_str(), purity, out.composite_id.c_str());
    return out;
}

CompositeEvaluation evaluate_composite(const IndicatorGraph& graph,
                                       const std::string& composite_id, const Signal& signal,
                                       const std::vector<int>& a_trigger_sites) {
    auto it = graph.composites.find(composite_id);
    if (it == graph.composites.end()) throw ValidationError("unknown composite: " + composite_id);
    const GraphEdge& edge = graph.edges.at(it->second.edge_index);
    const Indicator& b = graph.node(edge.to);

    CompositeEvaluation eval;
    for (int site : a_trigger_sites) {
        const long long predicted = static_cast<long long>(site) + edge.control.u;
        try {
            const TriggerResult r = microsaccade_search(b, signal, predicted, edge.microsaccade_radius);
            eval.entries.push_back(CompositeSiteResult{site, r.fired, r.corrected_center, r.distance});
        } catch (const BoundaryError&) {
            ++eval.skipped;
        }
    }
    return eval;
}

OneShotResult one_shot_learn(IndicatorGraph& graph, const std::string& a_id, Control u,
                             const Fragment& b_fragment, const std::vector<Signal>& signals,
                             const std::vector<std::vector<int>>& a_trigger_sites,
                             const FragmentCloud& background, int search_radius, int k_neighbors) {
    const Indicator& a = graph.node(a_id);
    if (b_fragment.width != a.width) throw ValidationError("example fragment width does not match");

    // Scale context for the one-example indicator: what the control sees.
    auto neighbor = collect_control_results(signals, a_trigger_sites, u, a.width);
    if (neighbor.cloud.fragments.empty()) {
        throw ExperimentError("control u=" + std::to_string(u.u) +
                              " produced no fragments to calibrate against");
    }
    const Indicator b = make_point_indicator(b_fragment, neighbor.cloud, k_neighbors, "b");

    OneShotResult out;
    out.collected.width = a.width;
    out.collected.provenance = "one-shot:u=" + std::to_string(u.u);
    std::vector<double> observed_distances;
    for (std::size_t si = 0; si < signals.size(); ++si) {
        for (int site : a_trigger_sites[si]) {
            const long long predicted = static_cast<long long>(site) + u.u;
            try {
                const TriggerResult r = microsaccade_search(b, signals[si], predicted, search_radius);
                observed_distances.push_back(r.distance);
                if (r.fired) {
                    out.collected.fragments.push_back(
                        extract_fragment(signals[si], r.corrected_center, a.width));
                }
            } catch (const BoundaryError&) {
                continue;
            }
        }
    }
    if (out.collected.fragments.empty()) {
        // Report where the distances landed so the threshold mismatch is visible.
        std::ostringstream msg;
        msg << "indicator fired on zero sites (threshold " << b.threshold << "); distances:";
        if (observed_distances.empty()) {
            msg << " none (all sites out of bounds)";
        } else {
            const auto [lo, hi] =
                std::minmax_element(observed_distances.begin(), observed_distances.end());
            const double width = (*hi > *lo ? *hi - *lo : 1.0) / 10.0;
            std::vector<int> bins(10, 0);
            for (double d : observed_distances) {
                int idx = static_cast<int>((d - *lo) / width);
                bins[std::clamp(idx, 0, 9)] += 1;
            }
            msg << " min " << *lo << ", max " << *hi << ", histogram [";
            for (std::size_t i = 0; i < bins.size(); ++i) msg << (i ? "," : "") << bins[i];
            msg << "]";
        }
        throw ExperimentError(msg.str());
    }

    out.center_template.assign(a.width, 0.0);
    for (const auto& f : out.collected.fragments) {
        for (int j = 0; j < a.width; ++j) out.center_template[j] += f.values[j];
    }
    for (auto& v : out.center_template) v /= static_cast<double>(out.collected.size());

    const std::string refined_id = graph.unique_id(a_id + "_u" + std::to_string(u.u) + "_refined");
    out.refined = fit_initial_indicator(out.collected, background, refined_id);
    out.refined.kind = IndicatorKind::Refined;
    graph.add_node(out.refined);
    graph.log.push_back({{"op", "one_shot_learn"},
                         {"a", a_id},
                         {"refined", refined_id},
                         {"u", std::to_string(u.u)},
                         {"search_radius", std::to_string(search_radius)},
                         {"k_neighbors", std::to_string(k_neighbors)},
                         {"collected", std::to_string(out.collected.size())}});
    log_info("one-shot from %s at u=%d collected %zu fragments -> %s", a_id.c_str(), u.u,
             out.collected.size(), refined_id.c_str());
    return out;
}

std::string save_graph(const IndicatorGraph& graph) {
    json nodes = json::array();
    for (const auto& [id, ind] : graph.nodes) {
        json nj;
        nj["id"] = ind.id;
        nj["kind"] = to_string(ind.kind);
        nj["width"] = ind.width;
        nj["threshold"] = ind.threshold;
        nj["template"] = ind.template_values;
        if (!ind.meta.empty()) nj["meta"] = ind.meta;
        nodes.push_back(std::move(nj));
    }
    for (const auto& [id, comp] : graph.composites) {
        nodes.push_back({{"id", id}, {"kind", "composite"}, {"edge", comp.edge_index}});
    }
    json edges = json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"from", e.from}, {"to", e.to}, {"u", e.control.u},
                         {"radius", e.microsaccade_radius}});
    }
    json doc;
    doc["nodes"] = std::move(nodes);
    doc["edges"] = std::move(edges);
    doc["log"] = graph.log;
    return doc.dump();
}

IndicatorGraph load_graph(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("graph document does not parse: ") + e.what());
    }
    IndicatorGraph g;
    for (const auto& ej : doc.at("edges")) {
        GraphEdge e;
        e.from = ej.at("from").get<std::string>();
        e.to = ej.at("to").get<std::string>();
        e.control.u = ej.at("u").get<int>();
        e.microsaccade_radius = ej.at("radius").get<int>();
        g.edges.push_back(std::move(e));
    }
    for (const auto& nj : doc.at("nodes")) {
        const std::string kind = nj.at("kind").get<std::string>();
        const std::string id = nj.at("id").get<std::string>();
        if (kind == "composite") {
            const std::size_t edge = nj.at("edge").get<std::size_t>();
            if (edge >= g.edges.size()) throw ValidationError("composite " + id + " references a missing edge");
            g.composites.emplace(id, CompositeNode{id, edge});
        } else {
            g.nodes.emplace(id, load_indicator(nj.dump()));
        }
    }
    for (const auto& e : g.edges) {
        if (!g.nodes.count(e.from) || !g.nodes.count(e.to)) {
            throw ValidationError("edge endpoint missing: " + e.from + " -> " + e.to);
        }
    }
    if (doc.contains("log")) {
        g.log = doc["log"].get<std::vector<std::map<std::string, std::string>>>();
    }
    return g;
}

std::string save_profile(const ControlProfile& profile) {
    json entries = json::array();
    for (const auto& e : profile.entries) {
        entries.push_back({{"u", e.u.u},
                           {"nn_purity", e.report.nn_purity},
                           {"entropy_nats", e.report.entropy_nats},
                           {"entropy_background_nats", e.report.entropy_background_nats},
                           {"entropy_drop", e.report.entropy_drop},
                           {"degenerate", e.report.degenerate},
                           {"cloud_size", e.cloud_size},
                           {"skipped", e.skipped}});
    }
    json doc;
    doc["entries"] = std::move(entries);
    return doc.dump();
}

ControlProfile load_profile(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("profile document does not parse: ") + e.what());
    }
    ControlProfile p;
    int last_u = 0;
    bool first = true;
    for (const auto& ej : doc.at("entries")) {
        ProfileEntry e;
        e.u.u = ej.at("u").get<int>();
        e.report.nn_purity = ej.at("nn_purity").get<double>();
        e.report.entropy_nats = ej.at("entropy_nats").get<double>();
        e.report.entropy_background_nats = ej.at("entropy_background_nats").get<double>();
        e.report.entropy_drop = ej.at("entropy_drop").get<double>();
        e.report.degenerate = ej.value("degenerate", false);
        e.cloud_size = ej.at("cloud_size").get<int>();
        e.skipped = ej.at("skipped").get<int>();
        if (!first && e.u.u <= last_u) throw ValidationError("profile entries must be strictly increasing in u");
        last_u = e.u.u;
        first = false;
        p.entries.push_back(std::move(e));
    }
    return p;
}

bool operator==(const GraphEdge& a, const GraphEdge& b) {
    return a.from == b.from && a.to == b.to && a.control.u == b.control.u &&
           a.microsaccade_radius == b.microsaccade_radius;
}

bool operator==(const CompositeNode& a, const CompositeNode& b) {
    return a.id == b.id && a.edge_index == b.edge_index;
}

bool operator==(const IndicatorGraph& a, const IndicatorGraph& b) {
    return a.nodes == b.nodes && a.edges == b.edges && a.composites == b.composites &&
           a.log == b.log;
}

} // namespace saccade
