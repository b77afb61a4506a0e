#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace saccade {

/// A sampled 1-D recording. Immutable after construction; all sensory data
/// the agent ever sees comes from one of these.
struct Signal {
    std::vector<double> samples;
    int fs_hz = 500;
    std::string label = "i";
};

/// Landmark positions supplied by a teacher (or, for synthetic data, by the
/// generator itself). t_peaks is ground truth and only present when known.
struct AnnotationSet {
    std::vector<int> r_peaks;
    std::vector<int> t_peaks; // empty when unknown
};

/// One Gaussian bump of the synthetic beat shape.
struct WaveSpec {
    std::string name;
    int offset_from_r = 0;   // samples relative to the R center
    double amplitude = 0.0;  // signal units
    double width_sigma = 1.0; // samples
};

/// Default beat shape at 500 Hz. The T bump sits 120 samples after R, so the
/// generator's ground-truth "largest interesting gaze shift to the right"
/// is 120 by construction.
std::vector<WaveSpec> default_wave_table();

struct SynthEcgParams {
    int beats = 50;
    int fs_hz = 500;
    int cycle_len = 500;
    std::vector<WaveSpec> waves = default_wave_table();
    double noise_sigma = 0.0;
    double cycle_jitter_sigma = 0.0;
    std::uint64_t seed = 1;
};

/// Throws ValidationError if the signal violates its invariants
/// (empty, non-finite sample, fs_hz < 1).
void validate_signal(const Signal& s);

/// Parse a Signal from its JSON document text.
/// Errors name the offending field; non-finite samples name the index.
Signal load_signal(const std::string& json_text);
std::string save_signal(const Signal& s);

Signal load_signal_file(const std::string& path);
void save_signal_file(const Signal& s, const std::string& path);

/// Parse annotations and normalize: sorted, deduplicated, bounds-checked
/// against the signal.
AnnotationSet load_annotations(const std::string& json_text, const Signal& signal);
std::string save_annotations(const AnnotationSet& a);

AnnotationSet load_annotations_file(const std::string& path, const Signal& signal);
void save_annotations_file(const AnnotationSet& a, const std::string& path);

/// Generate a synthetic quasi-periodic recording with exact landmark ground
/// truth. Each beat occupies one cycle_len slice; per-beat jitter moves the
/// whole beat (waves and annotation together), so annotations stay exact.
/// Deterministic in (params, seed).
std::pair<Signal, AnnotationSet> synth_ecg(const SynthEcgParams& params);

/// The noise-free beat shape evaluated at `offset` samples from the R center.
/// Shared by the generator and by tests that need an analytic oracle.
double beat_shape_value(const std::vector<WaveSpec>& waves, double offset);

} // namespace saccade
