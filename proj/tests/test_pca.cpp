#include <doctest.h>

#include <cmath>
#include <random>

#include "saccade/errors.hpp"
#include "saccade/pca.hpp"
#include "saccade/rng.hpp"

using namespace saccade;

namespace {

FragmentCloud cloud_from_points(const std::vector<std::vector<double>>& pts) {
    FragmentCloud c;
    c.width = static_cast<int>(pts[0].size());
    for (const auto& p : pts) {
        Fragment f;
        f.width = c.width;
        f.values = p;
        c.fragments.push_back(std::move(f));
    }
    return c;
}

std::vector<double> reconstruct(const PcaModel& m, const std::vector<double>& proj) {
    std::vector<double> out = m.mean;
    for (std::size_t r = 0; r < m.components.size(); ++r) {
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += proj[r] * m.components[r][j];
    }
    return out;
}

} // namespace

TEST_CASE("pca recovers the direction of a line") {
    std::vector<std::vector<double>> pts;
    for (int i = -5; i <= 5; ++i) pts.push_back({static_cast<double>(i), 2.0 * i});
    const FragmentCloud cloud = cloud_from_points(pts);
    const PcaModel m = pca_fit(cloud, 1);
    REQUIRE(m.components.size() == 1);
    const double inv_norm = 1.0 / std::sqrt(5.0);
    CHECK(m.components[0][0] == doctest::Approx(inv_norm).epsilon(1e-9));
    CHECK(m.components[0][1] == doctest::Approx(2.0 * inv_norm).epsilon(1e-9));
    CHECK(m.explained_variance.size() == 1);
    CHECK(m.explained_variance[0] > 0.0);
}

TEST_CASE("pca on isotropic data splits variance roughly evenly") {
    auto rng = make_engine(404);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 10000; ++i) pts.push_back({dist(rng), dist(rng)});
    const PcaModel m = pca_fit(cloud_from_points(pts), 2);
    CHECK(m.explained_variance[0] >= m.explained_variance[1]);
    CHECK(m.explained_variance[1] / m.explained_variance[0] > 0.95);
}

TEST_CASE("project-reconstruct-project is idempotent") {
    auto rng = make_engine(7);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> p(8);
        for (auto& v : p) v = dist(rng);
        pts.push_back(std::move(p));
    }
    const FragmentCloud cloud = cloud_from_points(pts);
    const PcaModel m = pca_fit(cloud, 3);
    const auto proj = pca_project(m, cloud);
    std::vector<std::vector<double>> recon;
    for (const auto& p : proj) recon.push_back(reconstruct(m, p));
    const auto proj2 = pca_project(m, cloud_from_points(recon));
    for (std::size_t i = 0; i < proj.size(); ++i) {
        for (std::size_t r = 0; r < proj[i].size(); ++r) {
            CHECK(proj[i][r] == doctest::Approx(proj2[i][r]).epsilon(1e-9));
        }
    }
}

TEST_CASE("pca components are orthonormal, variance is bounded by the data") {
    auto rng = make_engine(91);
    std::normal_distribution<double> dist(0.0, 2.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> p(40);
        for (auto& v : p) v = dist(rng);
        pts.push_back(std::move(p));
    }
    const FragmentCloud cloud = cloud_from_points(pts);
    const PcaModel m = pca_fit(cloud, 40);
    for (std::size_t a = 0; a < m.components.size(); ++a) {
        for (std::size_t b = 0; b < m.components.size(); ++b) {
            double dot = 0.0;
            for (int j = 0; j < 40; ++j) dot += m.components[a][j] * m.components[b][j];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
    }
    for (std::size_t r = 1; r < m.explained_variance.size(); ++r) {
        CHECK(m.explained_variance[r] <= m.explained_variance[r - 1]);
    }
    // total data variance (same n-1 denominator)
    std::vector<double> mean(40, 0.0);
    for (const auto& p : pts)
        for (int j = 0; j < 40; ++j) mean[j] += p[j];
    for (auto& v : mean) v /= pts.size();
    double total = 0.0;
    for (const auto& p : pts)
        for (int j = 0; j < 40; ++j) total += (p[j] - mean[j]) * (p[j] - mean[j]);
    total /= (pts.size() - 1);
    double explained = 0.0;
    for (double v : m.explained_variance) explained += v;
    CHECK(explained <= total + 1e-9);
}

TEST_CASE("projection centers the mean at the origin and preserves distances at full rank") {
    auto rng = make_engine(55);
    std::normal_distribution<double> dist(1.0, 3.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 60; ++i) {
        std::vector<double> p(6);
        for (auto& v : p) v = dist(rng);
        pts.push_back(std::move(p));
    }
    const FragmentCloud cloud = cloud_from_points(pts);
    const PcaModel m = pca_fit(cloud, 6);

    FragmentCloud mean_cloud = cloud_from_points({m.mean});
    const auto origin = pca_project(m, mean_cloud);
    for (double v : origin[0]) CHECK(std::abs(v) < 1e-9);

    const auto proj = pca_project(m, cloud);
    for (std::size_t i = 0; i < pts.size(); i += 7) {
        for (std::size_t j = i + 1; j < pts.size(); j += 11) {
            double d_orig = 0.0, d_proj = 0.0;
            for (int k = 0; k < 6; ++k) d_orig += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
            for (int k = 0; k < 6; ++k)
                d_proj += (proj[i][k] - proj[j][k]) * (proj[i][k] - proj[j][k]);
            CHECK(std::sqrt(d_orig) == doctest::Approx(std::sqrt(d_proj)).epsilon(1e-9));
        }
    }
}

TEST_CASE("degenerate identical cloud yields zero variances and stays valid") {
    std::vector<std::vector<double>> pts(5, std::vector<double>{1.0, 2.0, 3.0});
    const PcaModel m = pca_fit(cloud_from_points(pts), 2);
    for (double v : m.explained_variance) CHECK(v == 0.0);
}

TEST_CASE("pca argument validation") {
    std::vector<std::vector<double>> pts(5, std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(pca_fit(cloud_from_points(pts), 0), ValidationError);
    CHECK_THROWS_AS(pca_fit(cloud_from_points(pts), 3), ValidationError);
    const PcaModel m = pca_fit(cloud_from_points(pts), 1);
    std::vector<std::vector<double>> wrong(3, std::vector<double>{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(pca_project(m, cloud_from_points(wrong)), ValidationError);
}
