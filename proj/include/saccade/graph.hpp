#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saccade/fragments.hpp"
#include "saccade/indicator.hpp"
#include "saccade/metrics.hpp"
#include "saccade/signal.hpp"

namespace saccade {

struct GraphEdge {
    std::string from;
    std::string to;
    Control control;
    int microsaccade_radius = 10;
};

/// A composite node asserts "from-indicator fires here AND to-indicator fires
/// at the edge's offset after microsaccade correction". It references exactly
/// one edge.
struct CompositeNode {
    std::string id;
    std::size_t edge_index = 0;
};

/// The agent's long-term memory: indicators are nodes, controls are edges.
/// Growth is append-only; nothing mutates an existing node.
struct IndicatorGraph {
    std::map<std::string, Indicator> nodes;
    std::vector<GraphEdge> edges;
    std::map<std::string, CompositeNode> composites;
    std::vector<std::map<std::string, std::string>> log;

    bool has_id(const std::string& id) const;
    /// `base`, or `base_2`, `base_3`, ... if taken.
    std::string unique_id(const std::string& base) const;
    void add_node(Indicator ind);
    const Indicator& node(const std::string& id) const;
};

struct ProfileEntry {
    Control u;
    SeparabilityReport report;
    int cloud_size = 0;
    int skipped = 0;
};

/// Separability of control results over a grid of offsets; entries are
/// strictly increasing in u.
struct ControlProfile {
    std::vector<ProfileEntry> entries;
};

/// For each u in [u_min, u_max] at the given step: cut the control-result
/// cloud at the indicator's trigger sites and score it against the shared
/// background. Sites are the caller's: annotated positions for the seeded
/// indicator, corrected trigger positions otherwise.
ControlProfile scan_controls(const IndicatorGraph& graph, const std::string& indicator_id,
                             const std::vector<Signal>& signals,
                             const std::vector<std::vector<int>>& trigger_sites, int u_min,
                             int u_max, int step, const FragmentCloud& background, int k,
                             std::uint64_t seed = 0);

struct CharacteristicControls {
    std::vector<Control> all;             // purity >= theta and |u| > exclusion radius
    std::optional<Control> maximal_right; // largest characteristic u > 0
    std::optional<Control> maximal_left;  // most negative characteristic u < 0
};

/// Pure function of the profile: re-running on a saved profile reproduces the
/// result exactly. Near-zero shifts are excluded as trivially characteristic.
CharacteristicControls find_characteristic_controls(const ControlProfile& profile,
                                                    double purity_threshold,
                                                    int exclusion_radius);

struct GrowResult {
    std::string b_id;
    std::size_t edge_index = 0;
    std::string composite_id;
};

/// The recursive growth step: collect the control-result cloud at the parent
/// indicator's sites, pick one fragment at a seeded-uniform index, raise a
/// point-born indicator on it, and record node, edge and composite. Exactly
/// one plain node, one edge and one composite node are appended; the log
/// records the seed, the chosen index and the purity observed.
GrowResult grow_indicator(IndicatorGraph& graph, const std::string& a_id, Control u,
                          const std::vector<Signal>& signals,
                          const std::vector<std::vector<int>>& a_trigger_sites,
                          const FragmentCloud& background, std::uint64_t seed, int k_neighbors,
                          int microsaccade_radius);

struct CompositeSiteResult {
    int site = 0;
    bool aub = false; // false: A fired here but B did not appear at offset u
    long long corrected_center = 0;
    double distance = 0.0;
};

struct CompositeEvaluation {
    std::vector<CompositeSiteResult> entries;
    int skipped = 0; // sites whose whole search window fell outside
};

/// Check the composite's claim at each parent trigger site: microsaccade
/// around site + u and report whether the child indicator fired.
CompositeEvaluation evaluate_composite(const IndicatorGraph& graph,
                                       const std::string& composite_id, const Signal& signal,
                                       const std::vector<int>& a_trigger_sites);

struct OneShotResult {
    Indicator refined;
    FragmentCloud collected;
    std::vector<double> center_template;
};

/// One-shot learning: raise a point-born indicator from a single example
/// fragment, sweep a corrective search around every predicted site, collect
/// everything it fires on, and distill the cloud's center into a refined
/// indicator (threshold recalibrated against the shared background). The
/// refined indicator is appended to the graph. Zero fired sites is an error
/// carrying a histogram of observed distances.
OneShotResult one_shot_learn(IndicatorGraph& graph, const std::string& a_id, Control u,
                             const Fragment& b_fragment, const std::vector<Signal>& signals,
                             const std::vector<std::vector<int>>& a_trigger_sites,
                             const FragmentCloud& background, int search_radius, int k_neighbors);

std::string save_graph(const IndicatorGraph& graph);
IndicatorGraph load_graph(const std::string& json_text);

std::string save_profile(const ControlProfile& profile);
ControlProfile load_profile(const std::string& json_text);

bool operator==(const GraphEdge& a, const GraphEdge& b);
bool operator==(const CompositeNode& a, const CompositeNode& b);
bool operator==(const IndicatorGraph& a, const IndicatorGraph& b);

} // namespace saccade
