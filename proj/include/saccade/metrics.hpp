#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saccade/fragments.hpp"

namespace saccade {

/// Kozachenko-Leonenko differential entropy estimate.
/// `degenerate` is set when duplicate points forced the distance floor.
struct EntropyEstimate {
    double nats = 0.0;
    bool degenerate = false;
};

/// H = psi(n) - psi(k) + log V_m + (m/n) * sum_i log eps_i, with eps_i the
/// Euclidean distance from point i to its k-th nearest neighbor and V_m the
/// unit-ball volume in dimension m. Requires n > k >= 1.
EntropyEstimate knn_entropy(const std::vector<std::vector<double>>& points, int k);

/// Fraction of pooled points whose nearest neighbor (self excluded, ties to
/// the lowest pooled index) carries the same cloud label. 0.5 means the two
/// clouds are indistinguishable, 1.0 fully separated. Unequal sizes are
/// reconciled by a seeded subsample of the larger cloud.
double nn_purity(const std::vector<std::vector<double>>& cloud_a,
                 const std::vector<std::vector<double>>& cloud_b, std::uint64_t seed = 0);

/// The quantitative stand-in for "is this control's result predictable":
/// separability of a control-result cloud from the background population.
struct SeparabilityReport {
    double nn_purity = 0.0;
    double entropy_nats = 0.0;
    double entropy_background_nats = 0.0;
    double entropy_drop = 0.0; // background - cloud, always this exact difference
    bool degenerate = false;   // either entropy estimate hit the duplicate floor
};

SeparabilityReport separability(const FragmentCloud& control_cloud,
                                const FragmentCloud& background_cloud, int k,
                                std::uint64_t seed = 0);

std::string save_report(const SeparabilityReport& r);
SeparabilityReport load_report(const std::string& json_text);

} // namespace saccade
