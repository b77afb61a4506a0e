#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saccade/signal.hpp"

namespace saccade {

/// A gaze shift: an integer sample offset applied relative to a trigger
/// coordinate. The "where" half of the representation.
struct Control {
    int u = 0;
};

/// A fixed-width window of a signal. The sample at source_center sits at
/// values[width/2], so for the default width 40 the landmark is component 20.
struct Fragment {
    std::vector<double> values;
    long long source_center = 0;
    int width = 40;
};

struct FragmentCloud {
    std::vector<Fragment> fragments;
    std::string provenance; // "positive", "background", "control:u=<k>", ...
    int width = 40;

    std::size_t size() const { return fragments.size(); }
};

/// True when the window of `width` centered at `center` lies fully inside
/// the signal.
bool window_interior(const Signal& signal, long long center, int width);

/// Pure slice: values[i] == samples[center - width/2 + i].
/// Throws BoundaryError when the window is not fully interior.
Fragment extract_fragment(const Signal& signal, long long center, int width);

/// Apply a control: cut the window at origin + u.
Fragment execute_control(const Signal& signal, long long origin, Control control, int width);

/// Add rounded Gaussian noise to each center. sigma == 0 returns the input
/// unchanged for every seed.
std::vector<int> jitter_centers(const std::vector<int>& centers, double sigma, std::uint64_t seed);

/// n fragments cut at uniformly random interior centers of uniformly chosen
/// signals: the general-population sample every control result is scored against.
FragmentCloud sample_background(const std::vector<Signal>& signals, int n, int width,
                                std::uint64_t seed);

struct ControlResults {
    FragmentCloud cloud;
    int skipped = 0; // trigger sites whose shifted window fell outside
};

/// Execute one control from every trigger site; out-of-bounds windows are
/// skipped and counted, not errors.
ControlResults collect_control_results(const std::vector<Signal>& signals,
                                       const std::vector<std::vector<int>>& trigger_positions,
                                       Control control, int width);

/// Per-fragment z-normalization (mean 0, unit variance; constant fragments
/// are left at zero). Off by default everywhere; real-data runs can opt in.
FragmentCloud znormalize(const FragmentCloud& cloud);

std::string save_cloud(const FragmentCloud& cloud);
FragmentCloud load_cloud(const std::string& json_text);

/// Flatten to plain points for the metrics layer.
std::vector<std::vector<double>> cloud_points(const FragmentCloud& cloud);

} // namespace saccade
