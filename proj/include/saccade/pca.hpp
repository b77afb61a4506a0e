#pragma once

#include <vector>

#include "saccade/fragments.hpp"

namespace saccade {

/// Principal components of a fragment cloud. Rows of `components` are
/// orthonormal; explained_variance is sorted descending. Sign convention:
/// the first nonzero entry of each component is positive, which makes the
/// decomposition deterministic.
struct PcaModel {
    std::vector<double> mean;                      // length W
    std::vector<std::vector<double>> components;   // d rows of length W
    std::vector<double> explained_variance;        // d values, non-increasing
};

PcaModel pca_fit(const FragmentCloud& cloud, int d);

/// v -> components * (v - mean), one d-vector per fragment.
std::vector<std::vector<double>> pca_project(const PcaModel& model, const FragmentCloud& cloud);

} // namespace saccade
