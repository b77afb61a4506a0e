#pragma once

#include <map>
#include <string>
#include <vector>

#include "saccade/fragments.hpp"
#include "saccade/signal.hpp"

namespace saccade {

enum class IndicatorKind { SeededFromTeacher, PointBorn, Refined };

std::string to_string(IndicatorKind k);
IndicatorKind indicator_kind_from_string(const std::string& s);

/// A binary detector over fixed-width fragments: fires when the Euclidean
/// distance from its template is at most its threshold. Immutable once built.
struct Indicator {
    std::string id;
    IndicatorKind kind = IndicatorKind::SeededFromTeacher;
    std::vector<double> template_values;
    double threshold = 1.0;
    int width = 40;
    std::map<std::string, std::string> meta; // degenerate-fit flags and the like
};

struct TriggerResult {
    bool fired = false;
    double distance = 0.0;
    long long corrected_center = 0;
};

/// Calibrate a detector from teacher-pointed positives against background.
/// Template is the positive mean; the threshold minimizes balanced error
/// over midpoints of consecutive distinct values in the merged distance
/// list, smallest threshold on ties. A hopeless fit (best balanced error
/// >= 0.5) is flagged in meta["non_separable"].
Indicator fit_initial_indicator(const FragmentCloud& positives, const FragmentCloud& background,
                                const std::string& id = "A");

/// One-example detector: template is the chosen fragment, threshold the
/// median distance to its k nearest non-duplicate neighbors. An all-duplicate
/// neighborhood falls back to a tiny threshold and is flagged.
Indicator make_point_indicator(const Fragment& b, const FragmentCloud& neighbor_cloud, int k,
                               const std::string& id = "B");

TriggerResult trigger(const Indicator& ind, const Fragment& fragment);

/// Brute-force correction: evaluate the indicator at every interior center in
/// [predicted_center - radius, predicted_center + radius] and keep the
/// minimum-distance result. Ties prefer the smallest |center - predicted|,
/// then the smaller center.
TriggerResult microsaccade_search(const Indicator& ind, const Signal& signal,
                                  long long predicted_center, int radius);

std::string save_indicator(const Indicator& ind);
Indicator load_indicator(const std::string& json_text);

bool operator==(const Indicator& a, const Indicator& b);

} // namespace saccade
