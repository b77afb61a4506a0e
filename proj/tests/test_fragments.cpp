#include <doctest.h>

#include <cmath>
#include <random>

#include "saccade/errors.hpp"
#include "saccade/fragments.hpp"
#include "saccade/rng.hpp"
#include "saccade/signal.hpp"

using namespace saccade;

namespace {

Signal ramp_signal(int n) {
    Signal s;
    s.fs_hz = 500;
    for (int i = 0; i < n; ++i) s.samples.push_back(static_cast<double>(i));
    return s;
}

Signal random_signal(int n, std::uint64_t seed) {
    Signal s;
    s.fs_hz = 500;
    auto rng = make_engine(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < n; ++i) s.samples.push_back(dist(rng));
    return s;
}

Signal shifted(const Signal& s, int shift) {
    // prepend `shift` zeros; interior windows of the original reappear later
    Signal out;
    out.fs_hz = s.fs_hz;
    out.samples.assign(shift, 0.0);
    out.samples.insert(out.samples.end(), s.samples.begin(), s.samples.end());
    return out;
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("extract_fragment slices the ramp as advertised") {
    const Signal s = ramp_signal(100);
    const Fragment f = extract_fragment(s, 50, 40);
    REQUIRE(f.values.size() == 40);
    for (int i = 0; i < 40; ++i) CHECK(f.values[i] == doctest::Approx(30.0 + i));
    CHECK(f.values[20] == 50.0);
    CHECK(f.source_center == 50);
}

TEST_CASE("extract_fragment rejects boundary windows, strictly interior only") {
    const Signal s = ramp_signal(100);
    CHECK_THROWS_AS(extract_fragment(s, 10, 40), BoundaryError);
    CHECK_THROWS_AS(extract_fragment(s, 95, 40), BoundaryError);
    CHECK_NOTHROW(extract_fragment(s, 20, 40));
    CHECK_NOTHROW(extract_fragment(s, 80, 40));
    CHECK_THROWS_AS(extract_fragment(s, 50, 39), ValidationError); // odd width
}

TEST_CASE("extract_fragment equals a directly indexed oracle on random signals") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal s = random_signal(400, seed);
        auto rng = make_engine(derive_seed(seed, "centers"));
        std::uniform_int_distribution<int> pick(20, 379);
        for (int rep = 0; rep < 30; ++rep) {
            const int c = pick(rng);
            const Fragment f = extract_fragment(s, c, 40);
            for (int i = 0; i < 40; ++i) CHECK(f.values[i] == s.samples[c - 20 + i]);
        }
    }
}

TEST_CASE("extract_fragment is translation equivariant") {
    const Signal s = random_signal(300, 42);
    const int shift = 37;
    const Signal moved = shifted(s, shift);
    for (int c : {30, 100, 222}) {
        const Fragment a = extract_fragment(s, c, 40);
        const Fragment b = extract_fragment(moved, c + shift, 40);
        CHECK(a.values == b.values);
    }
}

TEST_CASE("execute_control with u=0 is extract_fragment, offsets compose") {
    const Signal s = random_signal(500, 5);
    CHECK(execute_control(s, 100, Control{0}, 40).values == extract_fragment(s, 100, 40).values);
    const Fragment two_steps = execute_control(s, 100, Control{60}, 40);
    const Fragment composed = execute_control(s, 100 + 25, Control{35}, 40);
    CHECK(two_steps.values == composed.values);
}

TEST_CASE("executing u=120 from an R peak lands on the T bump") {
    SynthEcgParams p;
    p.beats = 5;
    p.noise_sigma = 0.0;
    p.seed = 1;
    const auto [signal, ann] = synth_ecg(p);
    for (int r : ann.r_peaks) {
        const Fragment f = execute_control(signal, r, Control{120}, 40);
        // center sample sits on the T bump whose amplitude is 0.30
        CHECK(std::abs(f.values[20] - 0.30) < 1e-3);
    }
}

TEST_CASE("jitter_centers with sigma 0 is the identity for any seed") {
    const std::vector<int> centers{10, 20, 30, 77};
    for (std::uint64_t seed : {0ULL, 1ULL, 999ULL}) {
        CHECK(jitter_centers(centers, 0.0, seed) == centers);
    }
}

TEST_CASE("jitter_centers is reproducible and scales like its sigma") {
    const std::vector<int> centers(10000, 1000);
    const auto a = jitter_centers(centers, 4.0, 123);
    const auto b = jitter_centers(centers, 4.0, 123);
    CHECK(a == b);
    CHECK(a != centers);

    // law-of-large-numbers check on the sampler itself
    const auto big = jitter_centers(centers, 8.0, 77);
    double mean = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i) mean += big[i] - centers[i];
    mean /= static_cast<double>(big.size());
    double var = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        const double d = (big[i] - centers[i]) - mean;
        var += d * d;
    }
    var /= static_cast<double>(big.size());
    CHECK(std::sqrt(var) == doctest::Approx(8.0).epsilon(0.3 / 8.0));
}

TEST_CASE("sample_background stays interior and repeats with the seed") {
    const Signal s = random_signal(5000, 9);
    const FragmentCloud cloud = sample_background({s}, 500, 40, 31);
    CHECK(cloud.size() == 500);
    for (const auto& f : cloud.fragments) {
        CHECK(f.source_center >= 20);
        CHECK(f.source_center < 4980);
    }
    const FragmentCloud again = sample_background({s}, 500, 40, 31);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(cloud.fragments[i].source_center == again.fragments[i].source_center);
    }
    CHECK_THROWS_AS(sample_background({ramp_signal(30)}, 5, 40, 1), ValidationError);
}

TEST_CASE("sample_background centers are uniform (chi-square, 10 bins)") {
    const Signal s = random_signal(5000, 15);
    const FragmentCloud cloud = sample_background({s}, 100000, 40, 2024);
    // centers live in [20, 4980); bin uniformly
    const double lo = 20.0, hi = 4980.0;
    int bins[10] = {0};
    for (const auto& f : cloud.fragments) {
        int b = static_cast<int>((static_cast<double>(f.source_center) - lo) / (hi - lo) * 10.0);
        if (b > 9) b = 9;
        bins[b] += 1;
    }
    const double expected = 10000.0;
    double chi2 = 0.0;
    for (int b = 0; b < 10; ++b) chi2 += (bins[b] - expected) * (bins[b] - expected) / expected;
    CHECK(chi2 < 27.877); // chi-square(9) critical value at p = 0.001
}

TEST_CASE("collect_control_results on zero-noise data gives identical fragments") {
    SynthEcgParams p;
    p.beats = 8;
    p.noise_sigma = 0.0;
    p.seed = 1;
    const auto [signal, ann] = synth_ecg(p);
    const std::vector<Signal> signals{signal};
    const std::vector<std::vector<int>> sites{ann.r_peaks};

    const auto at0 = collect_control_results(signals, sites, Control{0}, 40);
    CHECK(at0.cloud.size() == 8);
    CHECK(at0.skipped == 0);
    for (std::size_t i = 1; i < at0.cloud.size(); ++i) {
        CHECK(l2(at0.cloud.fragments[0].values, at0.cloud.fragments[i].values) < 1e-9);
    }

    const auto at120 = collect_control_results(signals, sites, Control{120}, 40);
    for (std::size_t i = 1; i < at120.cloud.size(); ++i) {
        CHECK(l2(at120.cloud.fragments[0].values, at120.cloud.fragments[i].values) < 1e-9);
    }
    CHECK(l2(at0.cloud.fragments[0].values, at120.cloud.fragments[0].values) > 0.1);
    CHECK(at120.cloud.provenance == "control:u=120");
}

TEST_CASE("collect_control_results skips out-of-bounds sites and counts them") {
    const Signal s = ramp_signal(300);
    const auto res = collect_control_results({s}, {{5, 150, 250}}, Control{-100}, 40);
    CHECK(res.cloud.size() == 2); // site 5 -> center -95: skipped
    CHECK(res.skipped == 1);
}

TEST_CASE("fragment cloud JSON round-trip") {
    const Signal s = random_signal(300, 21);
    FragmentCloud cloud;
    cloud.width = 40;
    cloud.provenance = "positive";
    cloud.fragments.push_back(extract_fragment(s, 50, 40));
    cloud.fragments.push_back(extract_fragment(s, 200, 40));
    const FragmentCloud round = load_cloud(save_cloud(cloud));
    CHECK(round.width == cloud.width);
    CHECK(round.provenance == cloud.provenance);
    REQUIRE(round.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK(round.fragments[i].values == cloud.fragments[i].values);
        CHECK(round.fragments[i].source_center == cloud.fragments[i].source_center);
    }
}

TEST_CASE("znormalize gives zero-mean unit-variance fragments") {
    const Signal s = random_signal(200, 33);
    FragmentCloud cloud;
    cloud.width = 40;
    cloud.fragments.push_back(extract_fragment(s, 100, 40));
    const FragmentCloud z = znormalize(cloud);
    double mean = 0.0;
    for (double v : z.fragments[0].values) mean += v;
    mean /= 40.0;
    CHECK(std::abs(mean) < 1e-12);
    double var = 0.0;
    for (double v : z.fragments[0].values) var += (v - mean) * (v - mean);
    CHECK(var / 40.0 == doctest::Approx(1.0).epsilon(1e-9));
}
