#include "saccade/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "saccade/errors.hpp"
#include "saccade/log.hpp"
#include "saccade/rng.hpp"

#include <json.hpp>

namespace saccade {

using nlohmann::json;

namespace {

std::vector<double> squared_distances(const std::vector<std::vector<double>>& x) {
    const std::size_t n = x.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < x[i].size(); ++k) {
                const double diff = x[i][k] - x[j][k];
                acc += diff * diff;
            }
            d[i * n + j] = acc;
            d[j * n + i] = acc;
        }
    }
    return d;
}

} // namespace

namespace tsne_detail {

Affinities gaussian_affinities(const std::vector<std::vector<double>>& points, double perplexity) {
    const std::size_t n = points.size();
    if (perplexity <= 0.0) throw ValidationError("perplexity must be > 0");
    if (static_cast<double>(n) < 3.0 * perplexity) {
        throw ValidationError("cloud size " + std::to_string(n) +
                              " violates the bound size >= 3*perplexity");
    }
    const std::vector<double> dist2 = squared_distances(points);
    const double target_entropy = std::log(perplexity);

    Affinities aff;
    aff.p.assign(n, std::vector<double>(n, 0.0));
    aff.row_perplexity.assign(n, 0.0);

    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        // Bisection on the kernel precision beta so the row entropy hits
        // log(perplexity). Bounds expand geometrically until they bracket.
        double beta = 1.0;
        double beta_lo = -std::numeric_limits<double>::max();
        double beta_hi = std::numeric_limits<double>::max();
        double entropy = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double sum_p = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = j == i ? 0.0 : std::exp(-beta * dist2[i * n + j]);
                sum_p += row[j];
            }
            if (sum_p <= 0.0) sum_p = std::numeric_limits<double>::min();
            double sum_dp = 0.0;
            for (std::size_t j = 0; j < n; ++j) sum_dp += beta * dist2[i * n + j] * row[j];
            entropy = std::log(sum_p) + sum_dp / sum_p;

            const double diff = entropy - target_entropy;
            if (std::abs(diff) < 1e-7) break;
            if (diff > 0.0) {
                beta_lo = beta;
                beta = beta_hi == std::numeric_limits<double>::max() ? beta * 2.0
                                                                     : (beta + beta_hi) / 2.0;
            } else {
                beta_hi = beta;
                beta = beta_lo == -std::numeric_limits<double>::max() ? beta / 2.0
                                                                      : (beta + beta_lo) / 2.0;
            }
        }
        double sum_p = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum_p += row[j];
        if (sum_p <= 0.0) sum_p = std::numeric_limits<double>::min();
        for (std::size_t j = 0; j < n; ++j) aff.p[i][j] = row[j] / sum_p;
        aff.row_perplexity[i] = std::exp(entropy);
    }
    return aff;
}

} // namespace tsne_detail

namespace {

double kl_divergence(const std::vector<double>& p, const std::vector<double>& y,
                     std::size_t n) {
    // Q from the Student-t kernel over the current map.
    double sum_q = 0.0;
    std::vector<double> qnum(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = y[2 * i] - y[2 * j];
            const double dy = y[2 * i + 1] - y[2 * j + 1];
            const double q = 1.0 / (1.0 + dx * dx + dy * dy);
            qnum[i * n + j] = q;
            qnum[j * n + i] = q;
            sum_q += 2.0 * q;
        }
    }
    if (sum_q <= 0.0) sum_q = std::numeric_limits<double>::min();
    double kl = 0.0;
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double pij = p[i * n + j];
            if (pij <= 0.0) continue;
            kl += pij * std::log(pij / std::max(qnum[i * n + j] / sum_q, tiny));
        }
    }
    return kl;
}

} // namespace

Embedding2D tsne_embed(const FragmentCloud& cloud, double perplexity, int iters,
                       std::uint64_t seed) {
    TsneParams params;
    params.perplexity = perplexity;
    params.iters = iters;
    return tsne_embed(cloud, params, seed);
}

Embedding2D tsne_embed(const FragmentCloud& cloud, const TsneParams& params, std::uint64_t seed) {
    const std::size_t n = cloud.size();
    if (params.iters < 1) throw ValidationError("iteration count must be >= 1");
    const auto points = cloud_points(cloud);
    auto aff = tsne_detail::gaussian_affinities(points, params.perplexity);

    // Symmetrize and normalize to a joint distribution.
    std::vector<double> p(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            p[i * n + j] = (aff.p[i][j] + aff.p[j][i]) / (2.0 * static_cast<double>(n));
        }
    }

    // Seeded small-scale Gaussian start.
    auto rng = make_engine(derive_seed(seed, "tsne.init"));
    std::normal_distribution<double> init(0.0, 1e-4);
    std::vector<double> y(2 * n);
    for (auto& v : y) v = init(rng);

    const double initial_kl = kl_divergence(p, y, n);

    std::vector<double> grad(2 * n, 0.0);
    std::vector<double> velocity(2 * n, 0.0);
    std::vector<double> gains(2 * n, 1.0);
    std::vector<double> qnum(n * n, 0.0);

    std::vector<double> p_run = p;
    for (auto& v : p_run) v *= params.exaggeration;

    double momentum = params.initial_momentum;
    for (int iter = 0; iter < params.iters; ++iter) {
        double sum_q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = y[2 * i] - y[2 * j];
                const double dy = y[2 * i + 1] - y[2 * j + 1];
                const double q = 1.0 / (1.0 + dx * dx + dy * dy);
                qnum[i * n + j] = q;
                qnum[j * n + i] = q;
                sum_q += 2.0 * q;
            }
        }
        if (sum_q <= 0.0) sum_q = std::numeric_limits<double>::min();

        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q = qnum[i * n + j];
                const double mult = (p_run[i * n + j] - q / sum_q) * q;
                grad[2 * i] += 4.0 * mult * (y[2 * i] - y[2 * j]);
                grad[2 * i + 1] += 4.0 * mult * (y[2 * i + 1] - y[2 * j + 1]);
            }
        }

        for (std::size_t k = 0; k < 2 * n; ++k) {
            const bool same_sign = (grad[k] > 0.0) == (velocity[k] > 0.0);
            gains[k] = same_sign ? gains[k] * 0.8 : gains[k] + 0.2;
            if (gains[k] < 0.1) gains[k] = 0.1;
            velocity[k] = momentum * velocity[k] - params.learning_rate * gains[k] * grad[k];
            y[k] += velocity[k];
        }
        // Re-center the map.
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += y[2 * i];
            my += y[2 * i + 1];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[2 * i] -= mx;
            y[2 * i + 1] -= my;
        }

        if (iter + 1 == params.exaggeration_iters) p_run = p;
        if (iter + 1 == params.momentum_switch_iter) momentum = params.final_momentum;
    }

    Embedding2D emb;
    emb.seed = seed;
    emb.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) emb.points.emplace_back(y[2 * i], y[2 * i + 1]);
    emb.final_kl = kl_divergence(p, y, n);
    log_debug("tsne: n=%zu perplexity=%.1f kl %.4f -> %.4f", n, params.perplexity, initial_kl,
              emb.final_kl);
    return emb;
}

std::string save_embedding(const Embedding2D& e) {
    json doc;
    doc["seed"] = e.seed;
    doc["final_kl"] = e.final_kl;
    json pts = json::array();
    for (const auto& [x, y] : e.points) pts.push_back({x, y});
    doc["points"] = std::move(pts);
    return doc.dump();
}

Embedding2D load_embedding(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("embedding document does not parse: ") + e.what());
    }
    Embedding2D e;
    e.seed = doc.at("seed").get<std::uint64_t>();
    e.final_kl = doc.at("final_kl").get<double>();
    for (const auto& pj : doc.at("points")) {
        if (!pj.is_array() || pj.size() != 2) throw ValidationError("embedding points must be [x,y] pairs");
        e.points.emplace_back(pj[0].get<double>(), pj[1].get<double>());
    }
    return e;
}

} // namespace saccade
