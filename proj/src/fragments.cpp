#include "saccade/fragments.hpp"

#include <cmath>
#include <random>

#include "saccade/errors.hpp"
#include "saccade/rng.hpp"

#include <json.hpp>

namespace saccade {

using nlohmann::json;

bool window_interior(const Signal& signal, long long center, int width) {
    const long long half = width / 2;
    return center - half >= 0 &&
           center + half <= static_cast<long long>(signal.samples.size());
}

Fragment extract_fragment(const Signal& signal, long long center, int width) {
    if (width < 2 || width % 2 != 0) throw ValidationError("fragment width must be a positive even integer");
    if (!window_interior(signal, center, width)) {
        throw BoundaryError("window [" + std::to_string(center - width / 2) + ", " +
                            std::to_string(center + width / 2) + ") not inside signal of length " +
                            std::to_string(signal.samples.size()));
    }
    Fragment f;
    f.width = width;
    f.source_center = center;
    const long long start = center - width / 2;
    f.values.assign(signal.samples.begin() + start, signal.samples.begin() + start + width);
    return f;
}

Fragment execute_control(const Signal& signal, long long origin, Control control, int width) {
    return extract_fragment(signal, origin + control.u, width);
}

std::vector<int> jitter_centers(const std::vector<int>& centers, double sigma, std::uint64_t seed) {
    if (!std::isfinite(sigma) || sigma < 0.0) throw ValidationError("jitter sigma must be finite and >= 0");
    if (sigma == 0.0) return centers;
    auto rng = make_engine(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<int> out;
    out.reserve(centers.size());
    for (int c : centers) {
        out.push_back(static_cast<int>(std::llround(static_cast<double>(c) + dist(rng))));
    }
    return out;
}

FragmentCloud sample_background(const std::vector<Signal>& signals, int n, int width,
                                std::uint64_t seed) {
    if (n < 1) throw ValidationError("background sample count must be >= 1");
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < signals.size(); ++i) {
        if (static_cast<long long>(signals[i].samples.size()) >= width + 1) usable.push_back(i);
    }
    if (usable.empty()) throw ValidationError("no signal admits an interior window of width " +
                                              std::to_string(width));
    auto rng = make_engine(seed);
    std::uniform_int_distribution<std::size_t> pick_signal(0, usable.size() - 1);
    FragmentCloud cloud;
    cloud.width = width;
    cloud.provenance = "background";
    cloud.fragments.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Signal& s = signals[usable[pick_signal(rng)]];
        const long long lo = width / 2;
        const long long hi = static_cast<long long>(s.samples.size()) - width / 2 - 1;
        std::uniform_int_distribution<long long> pick_center(lo, hi);
        cloud.fragments.push_back(extract_fragment(s, pick_center(rng), width));
    }
    return cloud;
}

ControlResults collect_control_results(const std::vector<Signal>& signals,
                                       const std::vector<std::vector<int>>& trigger_positions,
                                       Control control, int width) {
    if (trigger_positions.size() != signals.size()) {
        throw ValidationError("one trigger-position list per signal required");
    }
    ControlResults res;
    res.cloud.width = width;
    res.cloud.provenance = "control:u=" + std::to_string(control.u);
    for (std::size_t si = 0; si < signals.size(); ++si) {
        for (int site : trigger_positions[si]) {
            const long long center = static_cast<long long>(site) + control.u;
            if (!window_interior(signals[si], center, width)) {
                ++res.skipped;
                continue;
            }
            res.cloud.fragments.push_back(extract_fragment(signals[si], center, width));
        }
    }
    return res;
}

FragmentCloud znormalize(const FragmentCloud& cloud) {
    FragmentCloud out = cloud;
    for (auto& f : out.fragments) {
        double mean = 0.0;
        for (double v : f.values) mean += v;
        mean /= static_cast<double>(f.values.size());
        double var = 0.0;
        for (double v : f.values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(f.values.size());
        const double sd = std::sqrt(var);
        for (auto& v : f.values) v = sd > 0.0 ? (v - mean) / sd : 0.0;
    }
    return out;
}

std::string save_cloud(const FragmentCloud& cloud) {
    json doc;
    doc["width"] = cloud.width;
    doc["provenance"] = cloud.provenance;
    json frags = json::array();
    for (const auto& f : cloud.fragments) {
        frags.push_back({{"source_center", f.source_center}, {"values", f.values}});
    }
    doc["fragments"] = std::move(frags);
    return doc.dump();
}

FragmentCloud load_cloud(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("cloud document does not parse: ") + e.what());
    }
    FragmentCloud cloud;
    if (!doc.contains("width") || !doc["width"].is_number_integer()) {
        throw ValidationError("field width missing or not an integer");
    }
    cloud.width = doc["width"].get<int>();
    cloud.provenance = doc.value("provenance", std::string());
    if (!doc.contains("fragments") || !doc["fragments"].is_array()) {
        throw ValidationError("field fragments missing or not an array");
    }
    for (const auto& fj : doc["fragments"]) {
        Fragment f;
        f.width = cloud.width;
        f.source_center = fj.at("source_center").get<long long>();
        f.values = fj.at("values").get<std::vector<double>>();
        if (static_cast<int>(f.values.size()) != cloud.width) {
            throw ValidationError("fragment value count does not match cloud width");
        }
        cloud.fragments.push_back(std::move(f));
    }
    return cloud;
}

std::vector<std::vector<double>> cloud_points(const FragmentCloud& cloud) {
    std::vector<std::vector<double>> pts;
    pts.reserve(cloud.fragments.size());
    for (const auto& f : cloud.fragments) pts.push_back(f.values);
    return pts;
}

} // namespace saccade
