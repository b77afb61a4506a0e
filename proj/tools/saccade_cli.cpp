// Command-line front end: synth | fig4 | fig5 | fig6 | scan | grow | plot.
// One JSON config file drives everything; flags override file values.
// Exit codes: 0 ok, 1 validation error, 2 I/O error, 3 experiment failure.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saccade/errors.hpp"
#include "saccade/experiments.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string out_dir;
    std::string data_dir;
    std::string sigmas_csv;
    std::uint64_t seed = 0;
    int width = 0;
    int u_min = 0, u_max = 0, u_step = 0;
    double theta = 0.0;
    int radius = 0;
    int search_radius = 0;
    int beats = 0;
    double noise = 0.0;
    double jitter = 0.0;
    int grow_u = 0;
    int n_background = 0;
    int k_neighbors = 0;
    bool no_plots = false;
    bool discover_u = false;
};

struct CommonOptions {
    CLI::Option* config = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* data = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* width = nullptr;
    CLI::Option* sigmas = nullptr;
    CLI::Option* u_min = nullptr;
    CLI::Option* u_max = nullptr;
    CLI::Option* u_step = nullptr;
    CLI::Option* theta = nullptr;
    CLI::Option* radius = nullptr;
    CLI::Option* search_radius = nullptr;
    CLI::Option* beats = nullptr;
    CLI::Option* noise = nullptr;
    CLI::Option* jitter = nullptr;
    CLI::Option* grow_u = nullptr;
    CLI::Option* n_background = nullptr;
    CLI::Option* k_neighbors = nullptr;
    CLI::Option* no_plots = nullptr;
    CLI::Option* discover_u = nullptr;
};

CommonOptions add_common(CLI::App* cmd, Flags& f) {
    CommonOptions o;
    o.config = cmd->add_option("--config", f.config_path, "JSON config file");
    o.out = cmd->add_option("--out", f.out_dir, "output directory");
    o.data = cmd->add_option("--data", f.data_dir, "directory of *.signal.json/*.annotations.json pairs");
    o.seed = cmd->add_option("--seed", f.seed, "master seed");
    o.width = cmd->add_option("--width", f.width, "fragment width (even)");
    o.sigmas = cmd->add_option("--sigmas", f.sigmas_csv, "comma-separated jitter sigmas");
    o.u_min = cmd->add_option("--u-min", f.u_min, "scan lower bound");
    o.u_max = cmd->add_option("--u-max", f.u_max, "scan upper bound");
    o.u_step = cmd->add_option("--u-step", f.u_step, "scan step");
    o.theta = cmd->add_option("--theta", f.theta, "characteristic purity threshold");
    o.radius = cmd->add_option("--radius", f.radius, "microsaccade radius");
    o.search_radius = cmd->add_option("--search-radius", f.search_radius, "one-shot sweep radius");
    o.beats = cmd->add_option("--beats", f.beats, "synthetic beat count");
    o.noise = cmd->add_option("--noise", f.noise, "synthetic noise sigma");
    o.jitter = cmd->add_option("--jitter", f.jitter, "synthetic per-beat jitter sigma");
    o.grow_u = cmd->add_option("--grow-u", f.grow_u, "control to grow at");
    o.n_background = cmd->add_option("--n-background", f.n_background, "background cloud size");
    o.k_neighbors = cmd->add_option("--k-neighbors", f.k_neighbors, "point-indicator neighbor count (0 = whole cloud)");
    o.no_plots = cmd->add_flag("--no-plots", f.no_plots, "skip SVG output");
    o.discover_u = cmd->add_flag("--discover-u", f.discover_u, "scan for the control instead of using grow_u");
    return o;
}

std::vector<double> parse_csv(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw saccade::ValidationError("cannot parse sigma value: '" + item + "'");
        }
    }
    if (out.empty()) throw saccade::ValidationError("sigma list must be non-empty");
    return out;
}

saccade::ExperimentConfig resolve(const Flags& f, const CommonOptions& o) {
    saccade::ExperimentConfig cfg;
    if (o.config->count() > 0) cfg = saccade::load_config_file(f.config_path);
    if (o.out->count() > 0) cfg.out_dir = f.out_dir;
    if (o.data->count() > 0) cfg.data_dir = f.data_dir;
    if (o.seed->count() > 0) cfg.seed = f.seed;
    if (o.width->count() > 0) cfg.width = f.width;
    if (o.sigmas->count() > 0) cfg.sigmas = parse_csv(f.sigmas_csv);
    if (o.u_min->count() > 0) cfg.u_min = f.u_min;
    if (o.u_max->count() > 0) cfg.u_max = f.u_max;
    if (o.u_step->count() > 0) cfg.u_step = f.u_step;
    if (o.theta->count() > 0) cfg.theta = f.theta;
    if (o.radius->count() > 0) cfg.microsaccade_radius = f.radius;
    if (o.search_radius->count() > 0) cfg.search_radius = f.search_radius;
    if (o.beats->count() > 0) cfg.beats = f.beats;
    if (o.noise->count() > 0) cfg.noise_sigma = f.noise;
    if (o.jitter->count() > 0) cfg.cycle_jitter_sigma = f.jitter;
    if (o.grow_u->count() > 0) cfg.grow_u = f.grow_u;
    if (o.n_background->count() > 0) cfg.n_background = f.n_background;
    if (o.k_neighbors->count() > 0) cfg.k_neighbors = f.k_neighbors;
    if (f.no_plots) cfg.make_plots = false;
    if (f.discover_u) cfg.grow_u.reset();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"saccadic indicator-graph learning on 1-D quasi-periodic signals"};
    app.require_subcommand(1);

    Flags flags;
    auto* synth = app.add_subcommand("synth", "generate a synthetic recording");
    auto* fig4 = app.add_subcommand("fig4", "center-jitter degradation experiment");
    auto* fig5 = app.add_subcommand("fig5", "characteristic-control scan experiment");
    auto* fig6 = app.add_subcommand("fig6", "grow + one-shot learning experiment");
    auto* scan = app.add_subcommand("scan", "control scan without plots");
    auto* grow = app.add_subcommand("grow", "grow one indicator and write the graph");
    auto* plot = app.add_subcommand("plot", "embed two saved clouds and render the scatter");

    const CommonOptions o_synth = add_common(synth, flags);
    const CommonOptions o_fig4 = add_common(fig4, flags);
    const CommonOptions o_fig5 = add_common(fig5, flags);
    const CommonOptions o_fig6 = add_common(fig6, flags);
    const CommonOptions o_scan = add_common(scan, flags);
    const CommonOptions o_grow = add_common(grow, flags);
    const CommonOptions o_plot = add_common(plot, flags);

    std::string control_path, background_path;
    plot->add_option("control", control_path, "control-results cloud JSON")->required();
    plot->add_option("background", background_path, "background cloud JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // bad arguments are validation errors
    }

    try {
        if (synth->parsed()) {
            saccade::cmd_synth(resolve(flags, o_synth));
        } else if (fig4->parsed()) {
            saccade::cmd_fig4(resolve(flags, o_fig4));
        } else if (fig5->parsed()) {
            saccade::cmd_fig5(resolve(flags, o_fig5));
        } else if (fig6->parsed()) {
            saccade::cmd_fig6(resolve(flags, o_fig6));
        } else if (scan->parsed()) {
            saccade::cmd_scan(resolve(flags, o_scan));
        } else if (grow->parsed()) {
            saccade::cmd_grow(resolve(flags, o_grow));
        } else if (plot->parsed()) {
            saccade::cmd_plot(resolve(flags, o_plot), control_path, background_path);
        }
    } catch (const saccade::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 2;
    } catch (const saccade::ExperimentError& e) {
        std::fprintf(stderr, "experiment failed: %s\n", e.what());
        return 3;
    } catch (const saccade::ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
