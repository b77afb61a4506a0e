#include "saccade/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/special_functions/digamma.hpp>

#include "saccade/errors.hpp"
#include "saccade/rng.hpp"

#include <json.hpp>

namespace saccade {

using nlohmann::json;

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// log volume of the m-dimensional Euclidean unit ball
double log_unit_ball_volume(int m) {
    return 0.5 * m * std::log(M_PI) - std::lgamma(0.5 * m + 1.0);
}

} // namespace

EntropyEstimate knn_entropy(const std::vector<std::vector<double>>& points, int k) {
    const int n = static_cast<int>(points.size());
    if (k < 1) throw ValidationError("k must be >= 1");
    if (n <= k) throw ValidationError("need more points than neighbors (n > k)");
    const int m = static_cast<int>(points[0].size());
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != m) throw ValidationError("points must share one dimension");
    }

    constexpr double kDistanceFloor = 1e-12;
    EntropyEstimate est;
    double log_eps_sum = 0.0;
    std::vector<double> dists(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) dists[j] = sq_dist(points[i], points[j]);
        dists[i] = std::numeric_limits<double>::infinity(); // exclude self
        std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
        double eps = std::sqrt(dists[k - 1]);
        if (eps < kDistanceFloor) {
            eps = kDistanceFloor;
            est.degenerate = true;
        }
        log_eps_sum += std::log(eps);
    }
    est.nats = boost::math::digamma(static_cast<double>(n)) -
               boost::math::digamma(static_cast<double>(k)) + log_unit_ball_volume(m) +
               (static_cast<double>(m) / n) * log_eps_sum;
    return est;
}

double nn_purity(const std::vector<std::vector<double>>& cloud_a,
                 const std::vector<std::vector<double>>& cloud_b, std::uint64_t seed) {
    if (cloud_a.empty() || cloud_b.empty()) throw ValidationError("purity needs two non-empty clouds");

    // Equal sizes: seeded subsample of the larger cloud, original order kept.
    auto subsample = [&](const std::vector<std::vector<double>>& cloud, std::size_t target,
                         const char* tag) {
        std::vector<std::size_t> idx(cloud.size());
        std::iota(idx.begin(), idx.end(), 0);
        auto rng = make_engine(derive_seed(seed, tag));
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(target);
        std::sort(idx.begin(), idx.end());
        std::vector<std::vector<double>> out;
        out.reserve(target);
        for (auto i : idx) out.push_back(cloud[i]);
        return out;
    };
    const std::size_t target = std::min(cloud_a.size(), cloud_b.size());
    const auto& a = cloud_a.size() == target ? cloud_a : subsample(cloud_a, target, "purity.sub.a");
    const auto& b = cloud_b.size() == target ? cloud_b : subsample(cloud_b, target, "purity.sub.b");

    std::vector<const std::vector<double>*> pooled;
    std::vector<int> label;
    pooled.reserve(2 * target);
    for (const auto& p : a) {
        pooled.push_back(&p);
        label.push_back(0);
    }
    for (const auto& p : b) {
        pooled.push_back(&p);
        label.push_back(1);
    }

    const std::size_t n = pooled.size();
    std::size_t same = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = sq_dist(*pooled[i], *pooled[j]);
            if (d < best) { // ties keep the lowest index, found first
                best = d;
                best_j = j;
            }
        }
        if (label[best_j] == label[i]) ++same;
    }
    return static_cast<double>(same) / static_cast<double>(n);
}

SeparabilityReport separability(const FragmentCloud& control_cloud,
                                const FragmentCloud& background_cloud, int k,
                                std::uint64_t seed) {
    if (control_cloud.width != background_cloud.width) {
        throw ValidationError("separability requires equal fragment widths");
    }
    const auto control_points = cloud_points(control_cloud);
    const auto background_points = cloud_points(background_cloud);

    SeparabilityReport r;
    r.nn_purity = nn_purity(control_points, background_points, seed);
    const auto h_cloud = knn_entropy(control_points, k);
    const auto h_bg = knn_entropy(background_points, k);
    r.entropy_nats = h_cloud.nats;
    r.entropy_background_nats = h_bg.nats;
    r.entropy_drop = r.entropy_background_nats - r.entropy_nats;
    r.degenerate = h_cloud.degenerate || h_bg.degenerate;
    return r;
}

std::string save_report(const SeparabilityReport& r) {
    json doc;
    doc["nn_purity"] = r.nn_purity;
    doc["entropy_nats"] = r.entropy_nats;
    doc["entropy_background_nats"] = r.entropy_background_nats;
    doc["entropy_drop"] = r.entropy_drop;
    doc["degenerate"] = r.degenerate;
    return doc.dump();
}

SeparabilityReport load_report(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("report document does not parse: ") + e.what());
    }
    SeparabilityReport r;
    r.nn_purity = doc.at("nn_purity").get<double>();
    r.entropy_nats = doc.at("entropy_nats").get<double>();
    r.entropy_background_nats = doc.at("entropy_background_nats").get<double>();
    r.entropy_drop = doc.at("entropy_drop").get<double>();
    r.degenerate = doc.value("degenerate", false);
    return r;
}

} // namespace saccade
