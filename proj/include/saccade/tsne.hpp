#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saccade/fragments.hpp"

namespace saccade {

/// 2-D map of a fragment cloud, one point per input fragment.
struct Embedding2D {
    std::vector<std::pair<double, double>> points;
    double final_kl = 0.0;
    std::uint64_t seed = 0;
};

struct TsneParams {
    double perplexity = 30.0;
    int iters = 1000;
    int exaggeration_iters = 250;  // x12 lie about P for this many steps
    double exaggeration = 12.0;
    double learning_rate = 200.0;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    int momentum_switch_iter = 250;
};

/// Exact (quadratic) t-SNE with perplexity-calibrated Gaussian affinities and
/// the Student-t low-dimensional kernel. Deterministic given seed; meant for
/// desk-scale clouds (<= a few thousand points).
Embedding2D tsne_embed(const FragmentCloud& cloud, double perplexity, int iters,
                       std::uint64_t seed);
Embedding2D tsne_embed(const FragmentCloud& cloud, const TsneParams& params, std::uint64_t seed);

std::string save_embedding(const Embedding2D& e);
Embedding2D load_embedding(const std::string& json_text);

namespace tsne_detail {

/// Row-conditional affinities before symmetrization, exposed for testing.
/// Each row sums to 1 and matches the target perplexity to high precision
/// (bisection on the kernel bandwidth).
struct Affinities {
    std::vector<std::vector<double>> p;   // n x n, zero diagonal, rows sum to 1
    std::vector<double> row_perplexity;   // exp of the row entropy
};

Affinities gaussian_affinities(const std::vector<std::vector<double>>& points, double perplexity);

} // namespace tsne_detail

} // namespace saccade
