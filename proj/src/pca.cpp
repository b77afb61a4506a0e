#include "saccade/pca.hpp"

#include <Eigen/Dense>

#include "saccade/errors.hpp"

namespace saccade {

PcaModel pca_fit(const FragmentCloud& cloud, int d) {
    const int n = static_cast<int>(cloud.size());
    const int w = cloud.width;
    if (d < 1 || d > w) throw ValidationError("target dimension must satisfy 1 <= d <= width");
    if (n < d) throw ValidationError("cloud must contain at least d fragments");

    Eigen::MatrixXd x(n, w);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(cloud.fragments[i].values.size()) != w) {
            throw ValidationError("fragment width mismatch in cloud");
        }
        for (int j = 0; j < w; ++j) x(i, j) = cloud.fragments[i].values[j];
    }
    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    Eigen::MatrixXd cov = centered.transpose() * centered / denom;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw ValidationError("eigen-decomposition failed");

    PcaModel model;
    model.mean.assign(mean.data(), mean.data() + w);
    model.components.reserve(d);
    model.explained_variance.reserve(d);
    // Eigen returns eigenvalues ascending; take the top d in descending order.
    for (int r = 0; r < d; ++r) {
        const int src = w - 1 - r;
        Eigen::VectorXd comp = solver.eigenvectors().col(src);
        for (int j = 0; j < w; ++j) {
            if (comp(j) != 0.0) {
                if (comp(j) < 0.0) comp = -comp;
                break;
            }
        }
        model.components.emplace_back(comp.data(), comp.data() + w);
        double ev = solver.eigenvalues()(src);
        model.explained_variance.push_back(ev > 0.0 ? ev : 0.0);
    }
    return model;
}

std::vector<std::vector<double>> pca_project(const PcaModel& model, const FragmentCloud& cloud) {
    const int w = static_cast<int>(model.mean.size());
    if (cloud.width != w) throw ValidationError("cloud width does not match PCA model width");
    const int d = static_cast<int>(model.components.size());
    std::vector<std::vector<double>> out;
    out.reserve(cloud.size());
    for (const auto& f : cloud.fragments) {
        std::vector<double> proj(d, 0.0);
        for (int r = 0; r < d; ++r) {
            double acc = 0.0;
            for (int j = 0; j < w; ++j) acc += model.components[r][j] * (f.values[j] - model.mean[j]);
            proj[r] = acc;
        }
        out.push_back(std::move(proj));
    }
    return out;
}

} // namespace saccade
