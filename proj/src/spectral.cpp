#include "seqspec/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "seqspec/rng.hpp"

namespace seqspec {

AffinityMatrix build_affinity(const Eigen::MatrixXd& dhat, double sigma_a) {
    if (sigma_a <= 0.0) throw std::invalid_argument("build_affinity: sigma_a must be positive");
    if (dhat.rows() != dhat.cols()) throw std::invalid_argument("build_affinity: matrix not square");
    const int m = static_cast<int>(dhat.rows());
    AffinityMatrix out;
    out.sigma_a = sigma_a;
    out.a.resize(m, m);
    for (int i = 0; i < m; ++i) {
        out.a(i, i) = 0.0;
        for (int j = i + 1; j < m; ++j) {
            const double r = dhat(i, j) / sigma_a;
            const double v = std::exp(-0.5 * r * r);
            out.a(i, j) = out.a(j, i) = v;
        }
    }
    return out;
}

Eigen::MatrixXd build_normalized(const AffinityMatrix& a) {
    const int m = static_cast<int>(a.a.rows());
    if (m < 2) throw std::invalid_argument("build_normalized: need M >= 2");
    const Eigen::VectorXd deg = a.a.rowwise().sum();
    if ((deg.array() <= 0.0).any())
        throw std::logic_error("build_normalized: nonpositive degree");
    const Eigen::VectorXd dinv = deg.array().rsqrt();
    return dinv.asDiagonal() * a.a * dinv.asDiagonal();
}

SpectralEmbedding top_k_eigen(const Eigen::MatrixXd& l, int k) {
    const int m = static_cast<int>(l.rows());
    if (k < 1 || k > m) throw std::invalid_argument("top_k_eigen: K out of range");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
    if (es.info() != Eigen::Success) throw std::runtime_error("top_k_eigen: eigensolver failed");

    SpectralEmbedding emb;
    emb.eigenvalues.resize(k);
    emb.z.resize(m, k);
    // Eigen returns eigenvalues ascending; take the top K in descending order.
    for (int c = 0; c < k; ++c) {
        const int src = m - 1 - c;
        emb.eigenvalues(c) = es.eigenvalues()(src);
        Eigen::VectorXd v = es.eigenvectors().col(src);
        int imax = 0;
        double vmax = std::abs(v(0));
        for (int i = 1; i < m; ++i) {
            if (std::abs(v(i)) > vmax) {
                vmax = std::abs(v(i));
                imax = i;
            }
        }
        if (v(imax) < 0.0) v = -v;
        emb.z.col(c) = v;
    }
    return emb;
}

Eigen::MatrixXd spectral_points(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd y = z;
    for (int i = 0; i < z.rows(); ++i) {
        const double n = z.row(i).norm();
        if (n < 1e-12) throw std::domain_error("spectral_points: degenerate row");
        y.row(i) /= n;
    }
    return y;
}

namespace {

double assign_points(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& centers,
                     std::vector<int>& labels) {
    const int n = static_cast<int>(pts.rows());
    const int k = static_cast<int>(centers.rows());
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double bestd = (pts.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double d = (pts.row(i) - centers.row(c)).squaredNorm();
            if (d < bestd) {
                bestd = d;
                best = c;
            }
        }
        labels[i] = best;
        cost += bestd;
    }
    return cost;
}

Eigen::MatrixXd seed_pp(const Eigen::MatrixXd& pts, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(pts.rows());
    Eigen::MatrixXd centers(k, pts.cols());
    std::uniform_int_distribution<int> first(0, n - 1);
    centers.row(0) = pts.row(first(rng));
    Eigen::VectorXd d2(n);
    for (int i = 0; i < n; ++i) d2(i) = (pts.row(i) - centers.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        int pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng);
            for (int i = 0; i < n; ++i) {
                r -= d2(i);
                if (r <= 0.0) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            std::uniform_int_distribution<int> any(0, n - 1);
            pick = any(rng);
        }
        centers.row(c) = pts.row(pick);
        for (int i = 0; i < n; ++i)
            d2(i) = std::min(d2(i), (pts.row(i) - centers.row(c)).squaredNorm());
    }
    return centers;
}

}  // namespace

Clustering kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                  int restarts, int max_iter) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw std::invalid_argument("kmeans: K must be >= 1");
    if (n < k) throw std::invalid_argument("kmeans: fewer points than clusters");

    Clustering best;
    best.k = k;
    double best_cost = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(derive_seed(seed, 0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)));
        Eigen::MatrixXd centers = seed_pp(points, k, rng);
        std::vector<int> labels(n, 0);
        double cost = assign_points(points, centers, labels);

        for (int it = 0; it < max_iter; ++it) {
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
            std::vector<int> counts(k, 0);
            for (int i = 0; i < n; ++i) {
                sums.row(labels[i]) += points.row(i);
                ++counts[labels[i]];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) {
                    centers.row(c) = sums.row(c) / counts[c];
                } else {
                    // Re-seed an empty cluster from the farthest point.
                    int far = 0;
                    double fard = -1.0;
                    for (int i = 0; i < n; ++i) {
                        const double d = (points.row(i) - centers.row(labels[i])).squaredNorm();
                        if (d > fard) {
                            fard = d;
                            far = i;
                        }
                    }
                    centers.row(c) = points.row(far);
                }
            }
            const double new_cost = assign_points(points, centers, labels);
            const bool converged = new_cost >= cost - 1e-15;
            cost = new_cost;
            if (converged) break;
        }

        if (cost < best_cost) {
            best_cost = cost;
            best.labels = labels;
        }
    }
    return best;
}

SpecResult cluster_from_z(const Eigen::MatrixXd& z_topk,
                          const Eigen::VectorXd& eigenvalues, int k,
                          std::uint64_t seed) {
    SpecResult res;
    res.embedding.z = z_topk;
    res.embedding.eigenvalues = eigenvalues;

    const int m = static_cast<int>(z_topk.rows());
    res.embedding.y.resize(m, k);
    std::vector<int> degenerate;
    for (int i = 0; i < m; ++i) {
        const double n = z_topk.row(i).norm();
        if (n < 1e-12) {
            degenerate.push_back(i);
            res.embedding.y.row(i).setZero();
        } else {
            res.embedding.y.row(i) = z_topk.row(i) / n;
        }
    }

    res.clustering = kmeans(res.embedding.y, k, seed);
    if (!degenerate.empty()) {
        res.degenerate = true;
        for (int i : degenerate) {
            int arg = 0;
            res.embedding.z.row(i).maxCoeff(&arg);
            res.clustering.labels[i] = arg;
        }
    }
    return res;
}

SpecResult spec_cluster(const Eigen::MatrixXd& dhat, int k, double sigma_a,
                        std::uint64_t seed) {
    const AffinityMatrix a = build_affinity(dhat, sigma_a);
    const Eigen::MatrixXd l = build_normalized(a);
    const SpectralEmbedding top = top_k_eigen(l, k);
    return cluster_from_z(top.z, top.eigenvalues, k, seed);
}

}  // namespace seqspec
