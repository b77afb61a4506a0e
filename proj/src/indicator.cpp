#include "saccade/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "saccade/errors.hpp"

#include <json.hpp>

namespace saccade {

using nlohmann::json;

std::string to_string(IndicatorKind k) {
    switch (k) {
        case IndicatorKind::SeededFromTeacher: return "seeded-from-teacher";
        case IndicatorKind::PointBorn: return "point-born";
        case IndicatorKind::Refined: return "refined";
    }
    return "seeded-from-teacher";
}

IndicatorKind indicator_kind_from_string(const std::string& s) {
    if (s == "seeded-from-teacher") return IndicatorKind::SeededFromTeacher;
    if (s == "point-born") return IndicatorKind::PointBorn;
    if (s == "refined") return IndicatorKind::Refined;
    throw ValidationError("unknown indicator kind: " + s);
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double rms(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc / static_cast<double>(v.size()));
}

struct Calibration {
    double threshold = 0.0;
    double balanced_error = 0.5;
    bool non_separable = false;
};

// Balanced-error threshold sweep over midpoints of consecutive distinct
// values in the merged distance list; smallest threshold wins ties.
Calibration calibrate_threshold(std::vector<double> pos_dists, std::vector<double> bg_dists,
                                double fallback) {
    std::vector<double> merged;
    merged.reserve(pos_dists.size() + bg_dists.size());
    merged.insert(merged.end(), pos_dists.begin(), pos_dists.end());
    merged.insert(merged.end(), bg_dists.begin(), bg_dists.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    Calibration cal;
    if (merged.size() < 2) {
        cal.threshold = !merged.empty() && merged[0] > 0.0 ? merged[0] : fallback;
        cal.non_separable = true;
        return cal;
    }
    std::sort(pos_dists.begin(), pos_dists.end());
    std::sort(bg_dists.begin(), bg_dists.end());
    double best_err = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double t = 0.5 * (merged[i] + merged[i + 1]);
        const auto fn = pos_dists.end() -
                        std::upper_bound(pos_dists.begin(), pos_dists.end(), t);
        const auto fp = std::upper_bound(bg_dists.begin(), bg_dists.end(), t) - bg_dists.begin();
        const double err = 0.5 * static_cast<double>(fn) / pos_dists.size() +
                           0.5 * static_cast<double>(fp) / bg_dists.size();
        if (err < best_err) { // strictly-less keeps the smallest optimal t
            best_err = err;
            best_t = t;
        }
    }
    cal.threshold = best_t;
    cal.balanced_error = best_err;
    cal.non_separable = best_err >= 0.5;
    return cal;
}

} // namespace

Indicator fit_initial_indicator(const FragmentCloud& positives, const FragmentCloud& background,
                                const std::string& id) {
    if (positives.fragments.empty() || background.fragments.empty()) {
        throw ValidationError("fit_initial_indicator needs non-empty positive and background clouds");
    }
    if (positives.width != background.width) {
        throw ValidationError("positive and background widths differ");
    }
    const int w = positives.width;
    Indicator ind;
    ind.id = id;
    ind.kind = IndicatorKind::SeededFromTeacher;
    ind.width = w;
    ind.template_values.assign(w, 0.0);
    for (const auto& f : positives.fragments) {
        for (int j = 0; j < w; ++j) ind.template_values[j] += f.values[j];
    }
    for (auto& v : ind.template_values) v /= static_cast<double>(positives.size());

    std::vector<double> pos_d, bg_d;
    pos_d.reserve(positives.size());
    bg_d.reserve(background.size());
    for (const auto& f : positives.fragments) pos_d.push_back(euclidean(ind.template_values, f.values));
    for (const auto& f : background.fragments) bg_d.push_back(euclidean(ind.template_values, f.values));

    double fallback = 1e-6 * rms(ind.template_values);
    if (fallback <= 0.0) fallback = 1e-12;
    const auto cal = calibrate_threshold(std::move(pos_d), std::move(bg_d), fallback);
    ind.threshold = cal.threshold;
    if (cal.non_separable) ind.meta["non_separable"] = "true";
    return ind;
}

Indicator make_point_indicator(const Fragment& b, const FragmentCloud& neighbor_cloud, int k,
                               const std::string& id) {
    if (k < 1) throw ValidationError("neighbor count k must be >= 1");
    if (neighbor_cloud.width != b.width) throw ValidationError("fragment and cloud widths differ");
    Indicator ind;
    ind.id = id;
    ind.kind = IndicatorKind::PointBorn;
    ind.width = b.width;
    ind.template_values = b.values;

    std::vector<double> dists;
    dists.reserve(neighbor_cloud.size());
    for (const auto& f : neighbor_cloud.fragments) {
        const double d = euclidean(b.values, f.values);
        if (d == 0.0) continue; // exact self-duplicates carry no scale information
        dists.push_back(d);
    }
    if (dists.empty()) {
        double fallback = 1e-6 * rms(ind.template_values);
        if (fallback <= 0.0) fallback = 1e-12;
        ind.threshold = fallback;
        ind.meta["degenerate_neighbors"] = "true";
        return ind;
    }
    const std::size_t use = std::min<std::size_t>(static_cast<std::size_t>(k), dists.size());
    std::partial_sort(dists.begin(), dists.begin() + use, dists.end());
    dists.resize(use);
    const std::size_t mid = use / 2;
    ind.threshold = use % 2 == 1 ? dists[mid] : 0.5 * (dists[mid - 1] + dists[mid]);
    return ind;
}

TriggerResult trigger(const Indicator& ind, const Fragment& fragment) {
    if (fragment.width != ind.width) throw ValidationError("fragment width does not match indicator");
    TriggerResult r;
    r.distance = euclidean(ind.template_values, fragment.values);
    r.fired = r.distance <= ind.threshold; // inclusive boundary
    r.corrected_center = fragment.source_center;
    return r;
}

TriggerResult microsaccade_search(const Indicator& ind, const Signal& signal,
                                  long long predicted_center, int radius) {
    if (radius < 0) throw ValidationError("microsaccade radius must be >= 0");
    bool found = false;
    TriggerResult best;
    long long best_offset = 0;
    for (long long c = predicted_center - radius; c <= predicted_center + radius; ++c) {
        if (!window_interior(signal, c, ind.width)) continue;
        const TriggerResult r = trigger(ind, extract_fragment(signal, c, ind.width));
        const long long offset = std::llabs(c - predicted_center);
        const bool better =
            !found || r.distance < best.distance ||
            (r.distance == best.distance &&
             (offset < best_offset || (offset == best_offset && c < best.corrected_center)));
        if (better) {
            best = r;
            best_offset = offset;
            found = true;
        }
    }
    if (!found) {
        throw BoundaryError("no interior window around center " + std::to_string(predicted_center) +
                            " within radius " + std::to_string(radius));
    }
    return best;
}

std::string save_indicator(const Indicator& ind) {
    json doc;
    doc["id"] = ind.id;
    doc["kind"] = to_string(ind.kind);
    doc["width"] = ind.width;
    doc["threshold"] = ind.threshold;
    doc["template"] = ind.template_values;
    if (!ind.meta.empty()) doc["meta"] = ind.meta;
    return doc.dump();
}

Indicator load_indicator(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("indicator document does not parse: ") + e.what());
    }
    Indicator ind;
    ind.id = doc.at("id").get<std::string>();
    ind.kind = indicator_kind_from_string(doc.at("kind").get<std::string>());
    ind.width = doc.at("width").get<int>();
    ind.threshold = doc.at("threshold").get<double>();
    ind.template_values = doc.at("template").get<std::vector<double>>();
    if (doc.contains("meta")) ind.meta = doc["meta"].get<std::map<std::string, std::string>>();
    if (static_cast<int>(ind.template_values.size()) != ind.width) {
        throw ValidationError("indicator template length does not match width");
    }
    if (!(ind.threshold > 0.0)) throw ValidationError("indicator threshold must be > 0");
    return ind;
}

bool operator==(const Indicator& a, const Indicator& b) {
    return a.id == b.id && a.kind == b.kind && a.template_values == b.template_values &&
           a.threshold == b.threshold && a.width == b.width && a.meta == b.meta;
}

} // namespace saccade
