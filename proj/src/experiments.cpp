#include "saccade/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "saccade/errors.hpp"
#include "saccade/log.hpp"
#include "saccade/rng.hpp"
#include "saccade/svg.hpp"
#include "saccade/tsne.hpp"

#include <json.hpp>

namespace saccade {

namespace fs = std::filesystem;
using nlohmann::json;

// ── Config ──────────────────────────────────────────────────────────────────

namespace {

template <typename T>
void read_field(const json& doc, const char* key, T& out) {
    if (!doc.contains(key)) return;
    try {
        out = doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config field ") + key + " has the wrong type");
    }
}

template <typename T>
void read_optional(const json& doc, const char* key, std::optional<T>& out) {
    if (!doc.contains(key)) return;
    if (doc.at(key).is_null()) {
        out.reset();
        return;
    }
    try {
        out = doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config field ") + key + " has the wrong type");
    }
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "width",       "seed",        "out_dir",       "data_dir",       "beats",
        "fs_hz",       "cycle_len",   "noise_sigma",   "cycle_jitter_sigma", "sigmas",
        "u_min",       "u_max",       "u_step",        "plot_us",        "theta",
        "exclusion_radius", "microsaccade_radius", "search_radius", "k_entropy",
        "k_neighbors", "grow_u",      "n_background",  "tsne_perplexity", "tsne_iters",
        "plot_subsample", "make_plots", "znormalize"};
    return keys;
}

} // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config does not parse: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config root must be a JSON object");
    const auto& known = known_config_keys();
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError("unknown config field: " + key);
        }
    }
    ExperimentConfig c;
    read_field(doc, "width", c.width);
    read_field(doc, "seed", c.seed);
    read_field(doc, "out_dir", c.out_dir);
    read_field(doc, "data_dir", c.data_dir);
    read_optional(doc, "beats", c.beats);
    read_field(doc, "fs_hz", c.fs_hz);
    read_field(doc, "cycle_len", c.cycle_len);
    read_optional(doc, "noise_sigma", c.noise_sigma);
    read_optional(doc, "cycle_jitter_sigma", c.cycle_jitter_sigma);
    read_field(doc, "sigmas", c.sigmas);
    read_field(doc, "u_min", c.u_min);
    read_field(doc, "u_max", c.u_max);
    read_field(doc, "u_step", c.u_step);
    read_field(doc, "plot_us", c.plot_us);
    read_field(doc, "theta", c.theta);
    read_field(doc, "exclusion_radius", c.exclusion_radius);
    read_field(doc, "microsaccade_radius", c.microsaccade_radius);
    read_field(doc, "search_radius", c.search_radius);
    read_field(doc, "k_entropy", c.k_entropy);
    read_field(doc, "k_neighbors", c.k_neighbors);
    read_optional(doc, "grow_u", c.grow_u);
    read_field(doc, "n_background", c.n_background);
    read_field(doc, "tsne_perplexity", c.tsne_perplexity);
    read_field(doc, "tsne_iters", c.tsne_iters);
    read_field(doc, "plot_subsample", c.plot_subsample);
    read_field(doc, "make_plots", c.make_plots);
    read_field(doc, "znormalize", c.znormalize);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["width"] = c.width;
    doc["seed"] = c.seed;
    doc["out_dir"] = c.out_dir;
    doc["data_dir"] = c.data_dir;
    doc["beats"] = c.beats.has_value() ? json(*c.beats) : json(nullptr);
    doc["fs_hz"] = c.fs_hz;
    doc["cycle_len"] = c.cycle_len;
    doc["noise_sigma"] = c.noise_sigma.has_value() ? json(*c.noise_sigma) : json(nullptr);
    doc["cycle_jitter_sigma"] =
        c.cycle_jitter_sigma.has_value() ? json(*c.cycle_jitter_sigma) : json(nullptr);
    doc["sigmas"] = c.sigmas;
    doc["u_min"] = c.u_min;
    doc["u_max"] = c.u_max;
    doc["u_step"] = c.u_step;
    doc["plot_us"] = c.plot_us;
    doc["theta"] = c.theta;
    doc["exclusion_radius"] = c.exclusion_radius;
    doc["microsaccade_radius"] = c.microsaccade_radius;
    doc["search_radius"] = c.search_radius;
    doc["k_entropy"] = c.k_entropy;
    doc["k_neighbors"] = c.k_neighbors;
    doc["grow_u"] = c.grow_u.has_value() ? json(*c.grow_u) : json(nullptr);
    doc["n_background"] = c.n_background;
    doc["tsne_perplexity"] = c.tsne_perplexity;
    doc["tsne_iters"] = c.tsne_iters;
    doc["plot_subsample"] = c.plot_subsample;
    doc["make_plots"] = c.make_plots;
    doc["znormalize"] = c.znormalize;
    return doc.dump();
}

// ── Dataset ─────────────────────────────────────────────────────────────────

Dataset build_dataset(const ExperimentConfig& config, int default_beats, double default_noise,
                      double default_jitter) {
    Dataset ds;
    if (config.data_dir.empty()) {
        SynthEcgParams params;
        params.beats = config.beats.value_or(default_beats);
        params.fs_hz = config.fs_hz;
        params.cycle_len = config.cycle_len;
        params.noise_sigma = config.noise_sigma.value_or(default_noise);
        params.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(default_jitter);
        params.seed = config.seed;
        auto [signal, ann] = synth_ecg(params);
        ds.signals.push_back(std::move(signal));
        ds.annotations.push_back(std::move(ann));
        std::ostringstream name;
        name << "synthetic(beats=" << params.beats << ",noise=" << params.noise_sigma
             << ",jitter=" << params.cycle_jitter_sigma << ",seed=" << params.seed << ")";
        ds.input_names.push_back(name.str());
        return ds;
    }

    if (!fs::is_directory(config.data_dir)) {
        throw IoError("data_dir is not a directory: " + config.data_dir);
    }
    std::vector<std::string> signal_files;
    for (const auto& entry : fs::directory_iterator(config.data_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.substr(name.size() - 12) == ".signal.json") {
            signal_files.push_back(entry.path().string());
        }
    }
    std::sort(signal_files.begin(), signal_files.end());
    if (signal_files.empty()) {
        throw ValidationError("no *.signal.json files found in " + config.data_dir);
    }
    for (const auto& sf : signal_files) {
        const std::string base = sf.substr(0, sf.size() - 12);
        const std::string af = base + ".annotations.json";
        Signal s = load_signal_file(sf);
        AnnotationSet a = load_annotations_file(af, s);
        ds.signals.push_back(std::move(s));
        ds.annotations.push_back(std::move(a));
        ds.input_names.push_back(sf);
        ds.input_names.push_back(af);
    }
    return ds;
}

// ── Output plumbing ─────────────────────────────────────────────────────────

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class OutputWriter {
public:
    explicit OutputWriter(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory: " + dir);
    }

    void write(const std::string& rel, const std::string& bytes) {
        const fs::path p = dir_ / rel;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw IoError("cannot write output file: " + p.string());
        f << bytes;
        if (!f.good()) throw IoError("write failed: " + p.string());
        outputs_.emplace_back(rel, hex64(fnv1a64(bytes)));
    }

    void finish(const std::string& command, const ExperimentConfig& resolved,
                const std::vector<std::string>& inputs) {
        const std::string config_json = config_to_json(resolved);
        json manifest;
        manifest["command"] = command;
        manifest["config"] = json::parse(config_json);
        manifest["config_hash"] = hex64(fnv1a64(config_json));
        manifest["inputs"] = inputs;
        std::sort(outputs_.begin(), outputs_.end());
        json outs = json::array();
        for (const auto& [rel, hash] : outputs_) outs.push_back({{"path", rel}, {"fnv1a64", hash}});
        manifest["outputs"] = std::move(outs);
        const std::string rel = "manifest_" + command + ".json";
        const fs::path p = dir_ / rel;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw IoError("cannot write manifest: " + p.string());
        f << manifest.dump(2) << "\n";
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

FragmentCloud subsample_cloud(const FragmentCloud& cloud, int n, std::uint64_t seed) {
    if (static_cast<int>(cloud.size()) <= n) return cloud;
    std::vector<std::size_t> idx(cloud.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto rng = make_engine(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    FragmentCloud out;
    out.width = cloud.width;
    out.provenance = cloud.provenance;
    out.fragments.reserve(n);
    for (auto i : idx) out.fragments.push_back(cloud.fragments[i]);
    return out;
}

// Pool background (red, label 0) and control results (blue, label 1), embed,
// and write <base>.svg plus <base>_embedding.json. Pools too small for the
// fixed perplexity are skipped, not errors.
bool write_map_plot(OutputWriter& writer, const ExperimentConfig& config,
                    const FragmentCloud& background, const FragmentCloud& control,
                    const std::string& base, std::uint64_t seed) {
    FragmentCloud pooled;
    pooled.width = background.width;
    pooled.provenance = "pooled:" + base;
    pooled.fragments = background.fragments;
    pooled.fragments.insert(pooled.fragments.end(), control.fragments.begin(),
                            control.fragments.end());
    if (static_cast<double>(pooled.size()) < 3.0 * config.tsne_perplexity) {
        log_info("skipping plot %s: pool of %zu points is below 3*perplexity", base.c_str(),
                 pooled.size());
        return false;
    }
    const Embedding2D emb = tsne_embed(pooled, config.tsne_perplexity, config.tsne_iters, seed);
    std::vector<int> labels(pooled.size(), 0);
    std::fill(labels.begin() + background.size(), labels.end(), 1);
    writer.write(base + ".svg", render_scatter_svg(emb, labels));
    writer.write(base + "_embedding.json", save_embedding(emb));
    return true;
}

std::vector<std::vector<int>> annotation_sites(const Dataset& ds) {
    std::vector<std::vector<int>> sites;
    sites.reserve(ds.annotations.size());
    for (const auto& a : ds.annotations) sites.push_back(a.r_peaks);
    return sites;
}

FragmentCloud maybe_znorm(const ExperimentConfig& config, FragmentCloud cloud) {
    return config.znormalize ? znormalize(cloud) : cloud;
}

int resolve_k_neighbors(const ExperimentConfig& config, std::size_t cloud_size) {
    if (config.k_neighbors > 0) return config.k_neighbors;
    return std::max(1, static_cast<int>(cloud_size) - 1);
}

json report_to_json(const SeparabilityReport& r) {
    return json{{"nn_purity", r.nn_purity},
                {"entropy_nats", r.entropy_nats},
                {"entropy_background_nats", r.entropy_background_nats},
                {"entropy_drop", r.entropy_drop},
                {"degenerate", r.degenerate}};
}

} // namespace

// ── Commands ────────────────────────────────────────────────────────────────

void cmd_synth(const ExperimentConfig& config) {
    ExperimentConfig resolved = config;
    resolved.beats = config.beats.value_or(50);
    resolved.noise_sigma = config.noise_sigma.value_or(0.0);
    resolved.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(0.0);

    SynthEcgParams params;
    params.beats = *resolved.beats;
    params.fs_hz = resolved.fs_hz;
    params.cycle_len = resolved.cycle_len;
    params.noise_sigma = *resolved.noise_sigma;
    params.cycle_jitter_sigma = *resolved.cycle_jitter_sigma;
    params.seed = resolved.seed;
    auto [signal, ann] = synth_ecg(params);

    OutputWriter writer(resolved.out_dir);
    writer.write("signal.json", save_signal(signal));
    writer.write("annotations.json", save_annotations(ann));
    writer.finish("synth", resolved, {"synthetic"});
    log_info("synth: wrote %zu samples, %zu beats to %s", signal.samples.size(),
             ann.r_peaks.size(), resolved.out_dir.c_str());
}

Fig4Result cmd_fig4(const ExperimentConfig& config) {
    if (config.sigmas.empty()) throw ValidationError("sigma list must be non-empty");
    ExperimentConfig resolved = config;
    resolved.beats = config.beats.value_or(500);
    resolved.noise_sigma = config.noise_sigma.value_or(0.02);
    resolved.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(0.0);

    Dataset ds = build_dataset(resolved, *resolved.beats, *resolved.noise_sigma,
                               *resolved.cycle_jitter_sigma);
    const auto sites = annotation_sites(ds);
    const FragmentCloud background = maybe_znorm(
        resolved, sample_background(ds.signals, resolved.n_background, resolved.width,
                                    derive_seed(resolved.seed, "fig4.background")));

    OutputWriter writer(resolved.out_dir);
    Fig4Result result;
    json entries = json::array();
    const FragmentCloud bg_plot = subsample_cloud(background, resolved.plot_subsample,
                                                  derive_seed(resolved.seed, "fig4.plot.bg"));
    for (std::size_t i = 0; i < resolved.sigmas.size(); ++i) {
        const double sigma = resolved.sigmas[i];
        if (sigma < 0.0) throw ValidationError("jitter sigma must be >= 0");
        std::vector<std::vector<int>> jittered;
        jittered.reserve(sites.size());
        for (std::size_t si = 0; si < sites.size(); ++si) {
            jittered.push_back(jitter_centers(
                sites[si], sigma,
                derive_seed(resolved.seed, "fig4.jitter." + std::to_string(i) + "." + std::to_string(si))));
        }
        auto collected = collect_control_results(ds.signals, jittered, Control{0}, resolved.width);
        if (collected.cloud.fragments.empty()) {
            throw ExperimentError("no positive fragments at sigma " + std::to_string(sigma));
        }
        const FragmentCloud positives = maybe_znorm(resolved, std::move(collected.cloud));
        const SeparabilityReport report =
            separability(positives, background, resolved.k_entropy,
                         derive_seed(resolved.seed, "fig4.sep." + std::to_string(i)));

        result.sigmas.push_back(sigma);
        result.reports.push_back(report);
        result.cloud_sizes.push_back(static_cast<int>(positives.size()));
        result.skipped.push_back(collected.skipped);

        json entry = report_to_json(report);
        entry["sigma"] = sigma;
        entry["cloud_size"] = positives.size();
        entry["skipped"] = collected.skipped;
        entries.push_back(std::move(entry));

        if (resolved.make_plots) {
            const FragmentCloud pos_plot =
                subsample_cloud(positives, resolved.plot_subsample,
                                derive_seed(resolved.seed, "fig4.plot.pos." + std::to_string(i)));
            write_map_plot(writer, resolved, bg_plot, pos_plot, "fig4_map_" + std::to_string(i),
                           derive_seed(resolved.seed, "fig4.tsne." + std::to_string(i)));
        }
        log_info("fig4 sigma=%.1f purity=%.3f entropy_drop=%.2f", sigma, report.nn_purity,
                 report.entropy_drop);
    }
    writer.write("fig4_report.json", json{{"entries", entries}}.dump(2) + "\n");
    writer.finish("fig4", resolved, ds.input_names);
    return result;
}

namespace {

// Shared by fig5/fig6/scan/grow: teacher-seeded indicator from the u=0 cloud.
Indicator seed_indicator(const ExperimentConfig& config, const Dataset& ds,
                         const std::vector<std::vector<int>>& sites,
                         const FragmentCloud& background) {
    auto positives = collect_control_results(ds.signals, sites, Control{0}, config.width);
    if (positives.cloud.fragments.empty()) {
        throw ExperimentError("no teacher-annotated fragments available to seed the indicator");
    }
    return fit_initial_indicator(maybe_znorm(config, std::move(positives.cloud)), background, "A");
}

json characteristic_to_json(const CharacteristicControls& c, const ExperimentConfig& config) {
    json all = json::array();
    for (const auto& u : c.all) all.push_back(u.u);
    return json{{"theta", config.theta},
                {"exclusion_radius", config.exclusion_radius},
                {"characteristic_us", all},
                {"maximal_right", c.maximal_right ? json(c.maximal_right->u) : json(nullptr)},
                {"maximal_left", c.maximal_left ? json(c.maximal_left->u) : json(nullptr)}};
}

Fig5Result run_scan(const ExperimentConfig& resolved, const Dataset& ds,
                    const std::vector<std::vector<int>>& sites, const FragmentCloud& background,
                    IndicatorGraph& graph) {
    graph.add_node(seed_indicator(resolved, ds, sites, background));
    Fig5Result result;
    result.profile =
        scan_controls(graph, "A", ds.signals, sites, resolved.u_min, resolved.u_max,
                      resolved.u_step, background, resolved.k_entropy,
                      derive_seed(resolved.seed, "scan"));
    result.characteristic =
        find_characteristic_controls(result.profile, resolved.theta, resolved.exclusion_radius);
    return result;
}

} // namespace

Fig5Result cmd_fig5(const ExperimentConfig& config) {
    ExperimentConfig resolved = config;
    resolved.beats = config.beats.value_or(50);
    resolved.noise_sigma = config.noise_sigma.value_or(0.02);
    resolved.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(20.0);

    Dataset ds = build_dataset(resolved, *resolved.beats, *resolved.noise_sigma,
                               *resolved.cycle_jitter_sigma);
    const auto sites = annotation_sites(ds);
    const FragmentCloud background = maybe_znorm(
        resolved, sample_background(ds.signals, resolved.n_background, resolved.width,
                                    derive_seed(resolved.seed, "fig5.background")));

    IndicatorGraph graph;
    Fig5Result result = run_scan(resolved, ds, sites, background, graph);

    OutputWriter writer(resolved.out_dir);
    writer.write("fig5_profile.json", save_profile(result.profile));
    writer.write("fig5_summary.json",
                 characteristic_to_json(result.characteristic, resolved).dump(2) + "\n");

    if (resolved.make_plots) {
        const FragmentCloud bg_plot = subsample_cloud(
            background, std::max(60, resolved.plot_subsample / 4),
            derive_seed(resolved.seed, "fig5.plot.bg"));
        for (int u : resolved.plot_us) {
            auto res = collect_control_results(ds.signals, sites, Control{u}, resolved.width);
            if (res.cloud.fragments.empty()) continue;
            write_map_plot(writer, resolved, bg_plot, maybe_znorm(resolved, std::move(res.cloud)),
                           "fig5_u" + std::to_string(u),
                           derive_seed(resolved.seed, "fig5.tsne." + std::to_string(u)));
        }
    }
    writer.finish("fig5", resolved, ds.input_names);
    if (result.characteristic.maximal_right) {
        log_info("fig5: maximal right characteristic control u=%d",
                 result.characteristic.maximal_right->u);
    } else {
        log_info("fig5: no characteristic control to the right");
    }
    return result;
}

Fig5Result cmd_scan(const ExperimentConfig& config) {
    ExperimentConfig resolved = config;
    resolved.beats = config.beats.value_or(50);
    resolved.noise_sigma = config.noise_sigma.value_or(0.02);
    resolved.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(20.0);

    Dataset ds = build_dataset(resolved, *resolved.beats, *resolved.noise_sigma,
                               *resolved.cycle_jitter_sigma);
    const auto sites = annotation_sites(ds);
    const FragmentCloud background = maybe_znorm(
        resolved, sample_background(ds.signals, resolved.n_background, resolved.width,
                                    derive_seed(resolved.seed, "fig5.background")));
    IndicatorGraph graph;
    Fig5Result result = run_scan(resolved, ds, sites, background, graph);

    OutputWriter writer(resolved.out_dir);
    writer.write("scan_profile.json", save_profile(result.profile));
    writer.write("scan_summary.json",
                 characteristic_to_json(result.characteristic, resolved).dump(2) + "\n");
    writer.finish("scan", resolved, ds.input_names);
    return result;
}

namespace {

struct GrowOutcome {
    IndicatorGraph graph;
    GrowResult grow;
    int u = 0;
    Dataset ds;
    std::vector<std::vector<int>> sites;
    FragmentCloud background;
};

GrowOutcome run_grow(const ExperimentConfig& resolved) {
    GrowOutcome out;
    out.ds = build_dataset(resolved, *resolved.beats, *resolved.noise_sigma,
                           *resolved.cycle_jitter_sigma);
    out.sites = annotation_sites(out.ds);
    out.background = maybe_znorm(
        resolved, sample_background(out.ds.signals, resolved.n_background, resolved.width,
                                    derive_seed(resolved.seed, "fig6.background")));

    if (resolved.grow_u.has_value()) {
        out.graph.add_node(seed_indicator(resolved, out.ds, out.sites, out.background));
        out.u = *resolved.grow_u;
    } else {
        Fig5Result scan = run_scan(resolved, out.ds, out.sites, out.background, out.graph);
        if (!scan.characteristic.maximal_right) {
            throw ExperimentError("scan found no characteristic control to grow at");
        }
        out.u = scan.characteristic.maximal_right->u;
        log_info("fig6: discovered maximal right characteristic control u=%d", out.u);
    }

    auto probe = collect_control_results(out.ds.signals, out.sites, Control{out.u}, resolved.width);
    const int k = resolve_k_neighbors(resolved, probe.cloud.size());
    out.grow = grow_indicator(out.graph, "A", Control{out.u}, out.ds.signals, out.sites,
                              out.background, derive_seed(resolved.seed, "fig6.grow"), k,
                              resolved.microsaccade_radius);
    return out;
}

} // namespace

Fig6Result cmd_fig6(const ExperimentConfig& config) {
    ExperimentConfig resolved = config;
    resolved.beats = config.beats.value_or(200);
    resolved.noise_sigma = config.noise_sigma.value_or(0.02);
    resolved.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(0.0);

    GrowOutcome grown = run_grow(resolved);
    IndicatorGraph& graph = grown.graph;

    Fragment b_fragment;
    b_fragment.width = resolved.width;
    b_fragment.source_center = 0;
    b_fragment.values = graph.node(grown.grow.b_id).template_values;

    auto neighbor_probe =
        collect_control_results(grown.ds.signals, grown.sites, Control{grown.u}, resolved.width);
    const int k = resolve_k_neighbors(resolved, neighbor_probe.cloud.size());
    OneShotResult oneshot =
        one_shot_learn(graph, "A", Control{grown.u}, b_fragment, grown.ds.signals, grown.sites,
                       grown.background, resolved.search_radius, k);

    OutputWriter writer(resolved.out_dir);
    writer.write("fig6_graph.json", save_graph(graph));
    writer.write("fig6_template.json",
                 json{{"u", grown.u}, {"values", oneshot.center_template}}.dump(2) + "\n");
    writer.write("fig6_template.svg", render_line_svg(oneshot.center_template));
    if (resolved.make_plots) {
        const FragmentCloud bg_plot = subsample_cloud(
            grown.background, std::max(60, resolved.plot_subsample / 4),
            derive_seed(resolved.seed, "fig6.plot.bg"));
        write_map_plot(writer, resolved, bg_plot, oneshot.collected, "fig6_map",
                       derive_seed(resolved.seed, "fig6.tsne"));
    }
    writer.write("fig6_summary.json",
                 json{{"u", grown.u},
                      {"collected", oneshot.collected.size()},
                      {"b_id", grown.grow.b_id},
                      {"composite_id", grown.grow.composite_id},
                      {"refined_id", oneshot.refined.id}}
                         .dump(2) +
                     "\n");
    writer.finish("fig6", resolved, grown.ds.input_names);

    Fig6Result result;
    result.u = grown.u;
    result.collected = oneshot.collected.size();
    result.center_template = oneshot.center_template;
    result.graph = std::move(graph);
    return result;
}

IndicatorGraph cmd_grow(const ExperimentConfig& config) {
    ExperimentConfig resolved = config;
    resolved.beats = config.beats.value_or(200);
    resolved.noise_sigma = config.noise_sigma.value_or(0.02);
    resolved.cycle_jitter_sigma = config.cycle_jitter_sigma.value_or(0.0);

    GrowOutcome grown = run_grow(resolved);
    OutputWriter writer(resolved.out_dir);
    writer.write("grow_graph.json", save_graph(grown.graph));
    writer.finish("grow", resolved, grown.ds.input_names);
    return std::move(grown.graph);
}

void cmd_plot(const ExperimentConfig& config, const std::string& control_cloud_path,
              const std::string& background_cloud_path) {
    auto read_cloud = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open cloud file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return load_cloud(buf.str());
    };
    const FragmentCloud control = read_cloud(control_cloud_path);
    const FragmentCloud background = read_cloud(background_cloud_path);
    if (control.width != background.width) throw ValidationError("cloud widths differ");

    OutputWriter writer(config.out_dir);
    const FragmentCloud bg_plot =
        subsample_cloud(background, config.plot_subsample, derive_seed(config.seed, "plot.bg"));
    const FragmentCloud ctrl_plot =
        subsample_cloud(control, config.plot_subsample, derive_seed(config.seed, "plot.ctrl"));
    if (!write_map_plot(writer, config, bg_plot, ctrl_plot, "plot",
                        derive_seed(config.seed, "plot.tsne"))) {
        throw ExperimentError("pooled cloud too small for the configured perplexity");
    }
    writer.finish("plot", config, {control_cloud_path, background_cloud_path});
}

} // namespace saccade
