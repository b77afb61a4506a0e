#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "saccade/errors.hpp"
#include "saccade/fragments.hpp"
#include "saccade/indicator.hpp"
#include "saccade/rng.hpp"
#include "saccade/signal.hpp"

using namespace saccade;

namespace {

Fragment fragment_of(std::vector<double> values, long long center = 0) {
    Fragment f;
    f.width = static_cast<int>(values.size());
    f.values = std::move(values);
    f.source_center = center;
    return f;
}

FragmentCloud cloud_of(std::vector<Fragment> frags, const std::string& tag) {
    FragmentCloud c;
    c.width = frags.front().width;
    c.provenance = tag;
    c.fragments = std::move(frags);
    return c;
}

} // namespace

TEST_CASE("fit_initial_indicator on a perfectly separated pair") {
    // positives all identical to v; background all at distance 10
    const std::vector<double> v{1.0, 2.0};
    std::vector<Fragment> pos(4, fragment_of(v));
    std::vector<Fragment> bg(4, fragment_of({1.0 + 10.0, 2.0}));
    const Indicator ind = fit_initial_indicator(cloud_of(pos, "positive"), cloud_of(bg, "background"));
    CHECK(ind.template_values == v);
    // merged distinct distances {0,10} -> single candidate midpoint 5
    CHECK(ind.threshold == doctest::Approx(5.0));
    CHECK(ind.kind == IndicatorKind::SeededFromTeacher);
    CHECK(ind.meta.count("non_separable") == 0);
    CHECK(trigger(ind, fragment_of(v)).fired);
}

TEST_CASE("fit_initial_indicator flags the hopeless case") {
    auto rng = make_engine(4);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<Fragment> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(fragment_of({dist(rng), dist(rng)}));
    const Indicator ind =
        fit_initial_indicator(cloud_of(pts, "positive"), cloud_of(pts, "background"));
    CHECK(ind.meta.at("non_separable") == "true");
    CHECK(ind.threshold > 0.0);
}

TEST_CASE("fit_initial_indicator is invariant under cloud reordering") {
    auto rng = make_engine(8);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<Fragment> pos, bg;
    for (int i = 0; i < 25; ++i) pos.push_back(fragment_of({dist(rng), dist(rng), dist(rng)}));
    for (int i = 0; i < 25; ++i)
        bg.push_back(fragment_of({dist(rng) + 4.0, dist(rng), dist(rng)}));
    const Indicator a = fit_initial_indicator(cloud_of(pos, "p"), cloud_of(bg, "b"));
    std::reverse(pos.begin(), pos.end());
    std::reverse(bg.begin(), bg.end());
    const Indicator b = fit_initial_indicator(cloud_of(pos, "p"), cloud_of(bg, "b"));
    CHECK(a.threshold == b.threshold);
    for (int j = 0; j < 3; ++j)
        CHECK(a.template_values[j] == doctest::Approx(b.template_values[j]).epsilon(1e-12));
}

TEST_CASE("seeded indicator generalizes on synthetic data") {
    SynthEcgParams p;
    p.beats = 80;
    p.noise_sigma = 0.01;
    p.seed = 6;
    const auto [signal, ann] = synth_ecg(p);
    const std::vector<Signal> signals{signal};

    // first half trains, second half is held out
    std::vector<int> train_sites(ann.r_peaks.begin(), ann.r_peaks.begin() + 40);
    std::vector<int> held_sites(ann.r_peaks.begin() + 40, ann.r_peaks.end());
    const auto train = collect_control_results(signals, {train_sites}, Control{0}, 40);
    const auto bg_train = sample_background(signals, 200, 40, 51);
    const Indicator ind = fit_initial_indicator(train.cloud, bg_train);

    const auto held = collect_control_results(signals, {held_sites}, Control{0}, 40);
    int fired = 0;
    for (const auto& f : held.cloud.fragments) fired += trigger(ind, f).fired ? 1 : 0;
    CHECK(fired == static_cast<int>(held.cloud.size()));

    const auto bg_held = sample_background(signals, 400, 40, 52);
    int false_pos = 0;
    for (const auto& f : bg_held.fragments) false_pos += trigger(ind, f).fired ? 1 : 0;
    CHECK(static_cast<double>(false_pos) / bg_held.size() < 0.05);
}

TEST_CASE("make_point_indicator takes the median of the k nearest distances") {
    const Fragment b = fragment_of({0.0});
    std::vector<Fragment> neighbors;
    for (double d : {1.0, 2.0, 3.0, 4.0, 5.0}) neighbors.push_back(fragment_of({d}));
    neighbors.push_back(fragment_of({0.0})); // exact duplicate, ignored
    const Indicator k5 = make_point_indicator(b, cloud_of(neighbors, "n"), 5);
    CHECK(k5.threshold == 3.0);
    CHECK(k5.kind == IndicatorKind::PointBorn);
    const Indicator k1 = make_point_indicator(b, cloud_of(neighbors, "n"), 1);
    CHECK(k1.threshold == 1.0);
    const Indicator k4 = make_point_indicator(b, cloud_of(neighbors, "n"), 4);
    CHECK(k4.threshold == 2.5);
}

TEST_CASE("make_point_indicator falls back when every neighbor is a duplicate") {
    const Fragment b = fragment_of({3.0, 4.0});
    std::vector<Fragment> dupes(6, fragment_of({3.0, 4.0}));
    const Indicator ind = make_point_indicator(b, cloud_of(dupes, "n"), 3);
    CHECK(ind.meta.at("degenerate_neighbors") == "true");
    // 1e-6 times the template RMS (RMS of {3,4} is sqrt(12.5))
    CHECK(ind.threshold == doctest::Approx(1e-6 * std::sqrt(12.5)));
    CHECK(ind.threshold > 0.0);
}

TEST_CASE("trigger fires inclusively at the threshold") {
    Indicator ind;
    ind.width = 2;
    ind.template_values = {0.0, 0.0};
    ind.threshold = 2.0;

    const TriggerResult self = trigger(ind, fragment_of({0.0, 0.0}, 123));
    CHECK(self.fired);
    CHECK(self.distance == 0.0);
    CHECK(self.corrected_center == 123);

    // exactly at the threshold: fired (the comparison is <=)
    CHECK(trigger(ind, fragment_of({2.0, 0.0})).fired);

    const TriggerResult far = trigger(ind, fragment_of({4.0, 0.0}));
    CHECK_FALSE(far.fired);
    CHECK(far.distance == doctest::Approx(4.0));

    CHECK_THROWS_AS(trigger(ind, fragment_of({1.0, 2.0, 3.0, 4.0})), ValidationError);
}

TEST_CASE("microsaccade with radius 0 equals a plain trigger") {
    SynthEcgParams p;
    p.beats = 3;
    p.noise_sigma = 0.0;
    p.seed = 2;
    const auto [signal, ann] = synth_ecg(p);
    Indicator ind;
    ind.width = 40;
    ind.template_values = extract_fragment(signal, ann.r_peaks[0], 40).values;
    ind.threshold = 0.5;

    const TriggerResult direct = trigger(ind, extract_fragment(signal, ann.r_peaks[1] + 3, 40));
    const TriggerResult searched = microsaccade_search(ind, signal, ann.r_peaks[1] + 3, 0);
    CHECK(searched.distance == direct.distance);
    CHECK(searched.corrected_center == direct.corrected_center);
    CHECK(searched.fired == direct.fired);
}

TEST_CASE("microsaccade recovers a planted offset exactly") {
    SynthEcgParams p;
    p.beats = 5;
    p.noise_sigma = 0.0;
    p.seed = 9;
    const auto [signal, ann] = synth_ecg(p);
    Indicator ind;
    ind.width = 40;
    ind.template_values = extract_fragment(signal, ann.r_peaks[2], 40).values;
    ind.threshold = 1e-6;

    for (int delta : {-10, -7, -1, 0, 4, 10}) {
        // predict off by -delta so the true landmark sits at predicted+delta
        const long long predicted = ann.r_peaks[3] - delta;
        const TriggerResult r = microsaccade_search(ind, signal, predicted, 10);
        CHECK(r.corrected_center - predicted == delta);
        CHECK(r.distance < 1e-9);
        CHECK(r.fired);
    }
}

TEST_CASE("microsaccade over a flat signal keeps the predicted center by the tie rule") {
    Signal flat;
    flat.fs_hz = 500;
    flat.samples.assign(200, 0.0);
    Indicator ind;
    ind.width = 40;
    ind.template_values.assign(40, 0.5);
    ind.threshold = 0.1;
    const TriggerResult r = microsaccade_search(ind, flat, 100, 10);
    CHECK_FALSE(r.fired);
    CHECK(r.distance == doctest::Approx(std::sqrt(40 * 0.25)));
    CHECK(r.corrected_center == 100);
}

TEST_CASE("growing the radius never increases the best distance") {
    SynthEcgParams p;
    p.beats = 4;
    p.noise_sigma = 0.05;
    p.seed = 14;
    const auto [signal, ann] = synth_ecg(p);
    Indicator ind;
    ind.width = 40;
    ind.template_values = extract_fragment(signal, ann.r_peaks[0], 40).values;
    ind.threshold = 1.0;
    auto rng = make_engine(77);
    std::uniform_int_distribution<int> pick(40, static_cast<int>(signal.samples.size()) - 40);
    for (int rep = 0; rep < 50; ++rep) {
        const int center = pick(rng);
        double prev = std::numeric_limits<double>::infinity();
        for (int radius : {0, 2, 5, 9, 15}) {
            const double d = microsaccade_search(ind, signal, center, radius).distance;
            CHECK(d <= prev);
            prev = d;
        }
    }
}

TEST_CASE("microsaccade is translation equivariant") {
    SynthEcgParams p;
    p.beats = 3;
    p.noise_sigma = 0.0;
    p.seed = 4;
    const auto [signal, ann] = synth_ecg(p);
    Signal moved;
    moved.fs_hz = signal.fs_hz;
    const int shift = 51;
    moved.samples.assign(shift, 0.0);
    moved.samples.insert(moved.samples.end(), signal.samples.begin(), signal.samples.end());

    Indicator ind;
    ind.width = 40;
    ind.template_values = extract_fragment(signal, ann.r_peaks[1], 40).values;
    ind.threshold = 0.25;

    const TriggerResult a = microsaccade_search(ind, signal, ann.r_peaks[1] + 4, 8);
    const TriggerResult b = microsaccade_search(ind, moved, ann.r_peaks[1] + 4 + shift, 8);
    CHECK(b.corrected_center - a.corrected_center == shift);
    CHECK(a.distance == b.distance);
}

TEST_CASE("microsaccade with no interior window is a boundary error") {
    Signal tiny;
    tiny.fs_hz = 500;
    tiny.samples.assign(30, 0.0);
    Indicator ind;
    ind.width = 40;
    ind.template_values.assign(40, 0.0);
    ind.threshold = 1.0;
    CHECK_THROWS_AS(microsaccade_search(ind, tiny, 15, 5), BoundaryError);
}

TEST_CASE("indicator JSON round-trip") {
    Indicator ind;
    ind.id = "A";
    ind.kind = IndicatorKind::Refined;
    ind.width = 4;
    ind.threshold = 0.625;
    ind.template_values = {0.1, -0.2, 0.3, 12.0};
    ind.meta["non_separable"] = "true";
    const Indicator round = load_indicator(save_indicator(ind));
    CHECK(round == ind);
}
