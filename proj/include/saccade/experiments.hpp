#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saccade/fragments.hpp"
#include "saccade/graph.hpp"
#include "saccade/metrics.hpp"
#include "saccade/signal.hpp"

namespace saccade {

/// One configuration drives every command; flags override file values and
/// file values override the built-in defaults. Fields that default
/// per-command (beats, noise, jitter) are optional here.
struct ExperimentConfig {
    int width = 40;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string data_dir; // empty -> synthetic data

    // synthetic generator
    std::optional<int> beats;
    int fs_hz = 500;
    int cycle_len = 500;
    std::optional<double> noise_sigma;
    std::optional<double> cycle_jitter_sigma;

    // fig4
    std::vector<double> sigmas{0, 2, 4, 8, 16};

    // control scanning
    int u_min = -400;
    int u_max = 400;
    int u_step = 5;
    std::vector<int> plot_us{20, 40, 120, 170, 400};
    double theta = 0.8;
    int exclusion_radius = 10;

    // indicators
    int microsaccade_radius = 10;
    // One-shot sweep radius. Kept small by default: on near-flat landmark
    // plateaus a wide sweep lets noise pick systematically biased windows,
    // which distorts the averaged template. Raise it for data with real
    // positional uncertainty.
    int search_radius = 2;
    int k_entropy = 3;
    int k_neighbors = 0; // 0 = use the whole result cloud
    std::optional<int> grow_u = 120;

    // clouds and plots
    int n_background = 500;
    double tsne_perplexity = 30.0;
    int tsne_iters = 1000;
    int plot_subsample = 250;
    bool make_plots = true;
    bool znormalize = false;
};

ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& c);

/// Signals with their annotations, either synthesized or loaded from
/// `<name>.signal.json` / `<name>.annotations.json` pairs in data_dir.
struct Dataset {
    std::vector<Signal> signals;
    std::vector<AnnotationSet> annotations;
    std::vector<std::string> input_names; // "synthetic" or the file paths
};

Dataset build_dataset(const ExperimentConfig& config, int default_beats, double default_noise,
                      double default_jitter);

struct Fig4Result {
    std::vector<double> sigmas;
    std::vector<SeparabilityReport> reports;
    std::vector<int> cloud_sizes;
    std::vector<int> skipped;
};

struct Fig5Result {
    ControlProfile profile;
    CharacteristicControls characteristic;
};

struct Fig6Result {
    int u = 0;
    std::size_t collected = 0;
    std::vector<double> center_template;
    IndicatorGraph graph;
};

/// Write a synthetic recording and its annotations.
void cmd_synth(const ExperimentConfig& config);

/// Center-jitter degradation: one separability report and one map per sigma.
Fig4Result cmd_fig4(const ExperimentConfig& config);

/// Control scan from the teacher-seeded indicator, plus the characteristic
/// summary and the per-control maps.
Fig5Result cmd_fig5(const ExperimentConfig& config);

/// Grow a child indicator at the configured control (or the scan-discovered
/// one when grow_u is unset), then learn its refined template one-shot.
Fig6Result cmd_fig6(const ExperimentConfig& config);

/// Scan only; writes the profile without plots.
Fig5Result cmd_scan(const ExperimentConfig& config);

/// Grow only; writes the resulting graph.
IndicatorGraph cmd_grow(const ExperimentConfig& config);

/// Re-embed two saved clouds (control vs background) and render the scatter.
void cmd_plot(const ExperimentConfig& config, const std::string& control_cloud_path,
              const std::string& background_cloud_path);

} // namespace saccade
