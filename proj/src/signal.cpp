#include "saccade/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "saccade/errors.hpp"
#include "saccade/rng.hpp"

#include <json.hpp>

namespace saccade {

using nlohmann::json;

std::vector<WaveSpec> default_wave_table() {
    return {
        {"P", -160, 0.15, 20.0},
        {"Q", -20, -0.10, 5.0},
        {"R", 0, 1.00, 8.0},
        {"S", 20, -0.20, 5.0},
        {"T", 120, 0.30, 40.0},
    };
}

void validate_signal(const Signal& s) {
    if (s.samples.empty()) throw ValidationError("samples must be non-empty");
    if (s.fs_hz < 1) throw ValidationError("fs_hz must be >= 1");
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        if (!std::isfinite(s.samples[i])) {
            throw ValidationError("samples[" + std::to_string(i) + "] is not finite");
        }
    }
}

namespace {

json parse_document(const std::string& text) {
    // Strict parse: NaN/Inf literals are rejected here.
    json doc = json::parse(text, nullptr, true);
    if (!doc.is_object()) throw ValidationError("document root must be a JSON object");
    return doc;
}

} // namespace

Signal load_signal(const std::string& json_text) {
    json doc;
    try {
        doc = parse_document(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("signal document does not parse: ") + e.what());
    }
    Signal s;
    if (!doc.contains("fs_hz") || !doc["fs_hz"].is_number_integer()) {
        throw ValidationError("field fs_hz missing or not an integer");
    }
    s.fs_hz = doc["fs_hz"].get<int>();
    if (!doc.contains("label") || !doc["label"].is_string()) {
        throw ValidationError("field label missing or not a string");
    }
    s.label = doc["label"].get<std::string>();
    if (!doc.contains("samples") || !doc["samples"].is_array()) {
        throw ValidationError("field samples missing or not an array");
    }
    s.samples.reserve(doc["samples"].size());
    for (const auto& v : doc["samples"]) {
        if (!v.is_number()) throw ValidationError("field samples contains a non-numeric entry");
        s.samples.push_back(v.get<double>());
    }
    validate_signal(s);
    return s;
}

std::string save_signal(const Signal& s) {
    validate_signal(s);
    json doc;
    doc["fs_hz"] = s.fs_hz;
    doc["label"] = s.label;
    doc["samples"] = s.samples;
    return doc.dump();
}

Signal load_signal_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open signal file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_signal(buf.str());
}

void save_signal_file(const Signal& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write signal file: " + path);
    out << save_signal(s);
}

AnnotationSet load_annotations(const std::string& json_text, const Signal& signal) {
    json doc;
    try {
        doc = parse_document(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("annotation document does not parse: ") + e.what());
    }
    if (!doc.contains("r_peaks") || !doc["r_peaks"].is_array()) {
        throw ValidationError("field r_peaks missing or not an array");
    }
    auto read_indices = [&](const json& arr, const char* field) {
        std::set<long long> uniq;
        for (const auto& v : arr) {
            if (!v.is_number_integer()) {
                throw ValidationError(std::string("field ") + field + " contains a non-integer entry");
            }
            long long idx = v.get<long long>();
            if (idx < 0 || idx >= static_cast<long long>(signal.samples.size())) {
                throw ValidationError(std::string(field) + " index " + std::to_string(idx) +
                                      " out of range for signal of length " +
                                      std::to_string(signal.samples.size()));
            }
            uniq.insert(idx);
        }
        return std::vector<int>(uniq.begin(), uniq.end());
    };
    AnnotationSet a;
    a.r_peaks = read_indices(doc["r_peaks"], "r_peaks");
    if (doc.contains("t_peaks")) {
        if (!doc["t_peaks"].is_array()) throw ValidationError("field t_peaks must be an array");
        a.t_peaks = read_indices(doc["t_peaks"], "t_peaks");
    }
    return a;
}

std::string save_annotations(const AnnotationSet& a) {
    json doc;
    doc["r_peaks"] = a.r_peaks;
    if (!a.t_peaks.empty()) doc["t_peaks"] = a.t_peaks;
    return doc.dump();
}

AnnotationSet load_annotations_file(const std::string& path, const Signal& signal) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open annotation file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_annotations(buf.str(), signal);
}

void save_annotations_file(const AnnotationSet& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write annotation file: " + path);
    out << save_annotations(a);
}

double beat_shape_value(const std::vector<WaveSpec>& waves, double offset) {
    double v = 0.0;
    for (const auto& w : waves) {
        const double d = offset - static_cast<double>(w.offset_from_r);
        v += w.amplitude * std::exp(-(d * d) / (2.0 * w.width_sigma * w.width_sigma));
    }
    return v;
}

std::pair<Signal, AnnotationSet> synth_ecg(const SynthEcgParams& params) {
    if (params.beats < 1) throw ValidationError("beats must be >= 1");
    if (params.fs_hz < 1) throw ValidationError("fs_hz must be >= 1");
    if (params.cycle_len < 2) throw ValidationError("cycle_len must be >= 2");
    if (params.noise_sigma < 0.0 || !std::isfinite(params.noise_sigma)) {
        throw ValidationError("noise_sigma must be finite and >= 0");
    }
    if (params.cycle_jitter_sigma < 0.0 || !std::isfinite(params.cycle_jitter_sigma)) {
        throw ValidationError("cycle_jitter_sigma must be finite and >= 0");
    }
    if (params.waves.empty()) throw ValidationError("wave table must be non-empty");
    int max_abs_offset = 0;
    int t_offset = 0;
    bool has_t = false;
    for (const auto& w : params.waves) {
        max_abs_offset = std::max(max_abs_offset, std::abs(w.offset_from_r));
        if (w.width_sigma <= 0.0) throw ValidationError("wave width_sigma must be > 0");
        if (w.name == "T") {
            t_offset = w.offset_from_r;
            has_t = true;
        }
    }
    if (params.cycle_len <= 2 * max_abs_offset) {
        throw ValidationError("cycle_len must exceed twice the largest wave offset");
    }

    const long long n = static_cast<long long>(params.beats) * params.cycle_len;
    Signal signal;
    signal.fs_hz = params.fs_hz;
    signal.label = "i";
    signal.samples.assign(static_cast<std::size_t>(n), 0.0);

    // Per-beat jitter of the whole beat: waves and annotation move together,
    // so the annotated centers stay exact ground truth.
    auto jitter_rng = make_engine(derive_seed(params.seed, "synth.jitter"));
    std::normal_distribution<double> jitter_dist(0.0, 1.0);
    AnnotationSet ann;
    ann.r_peaks.reserve(params.beats);
    for (int k = 0; k < params.beats; ++k) {
        const long long base = static_cast<long long>(k) * params.cycle_len + params.cycle_len / 2;
        long long center = base;
        if (params.cycle_jitter_sigma > 0.0) {
            center = base + std::llround(params.cycle_jitter_sigma * jitter_dist(jitter_rng));
        } else {
            jitter_dist(jitter_rng); // keep the stream position independent of sigma
        }
        if (center < 0 || center >= n) {
            throw ValidationError("beat jitter pushed an R center out of the signal");
        }
        ann.r_peaks.push_back(static_cast<int>(center));

        // Waves are confined to the beat's own slice; at zero jitter every
        // slice is computed from identical offsets, so the signal is exactly
        // periodic with period cycle_len.
        const long long lo = static_cast<long long>(k) * params.cycle_len;
        const long long hi = lo + params.cycle_len;
        for (long long i = lo; i < hi; ++i) {
            signal.samples[static_cast<std::size_t>(i)] +=
                beat_shape_value(params.waves, static_cast<double>(i - center));
        }
    }
    for (std::size_t k = 1; k < ann.r_peaks.size(); ++k) {
        if (ann.r_peaks[k] <= ann.r_peaks[k - 1]) {
            throw ValidationError("beat jitter produced non-increasing R centers");
        }
    }
    if (has_t) {
        ann.t_peaks.reserve(ann.r_peaks.size());
        for (int r : ann.r_peaks) {
            const long long t = static_cast<long long>(r) + t_offset;
            if (t >= 0 && t < n) ann.t_peaks.push_back(static_cast<int>(t));
        }
    }

    if (params.noise_sigma > 0.0) {
        auto noise_rng = make_engine(derive_seed(params.seed, "synth.noise"));
        std::normal_distribution<double> noise(0.0, params.noise_sigma);
        for (auto& s : signal.samples) s += noise(noise_rng);
    }
    return {std::move(signal), std::move(ann)};
}

} // namespace saccade
