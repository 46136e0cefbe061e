#include "seqspec/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "seqspec/rng.hpp"

namespace seqspec {

namespace {

double split_value(const Eigen::MatrixXd& a, const std::vector<int>& cluster,
                   const std::vector<double>& within_deg, std::uint32_t mask) {
    const int n = static_cast<int>(cluster.size());
    double sumd_in = 0.0, within = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(mask & (1u << i))) continue;
        sumd_in += within_deg[i];
        for (int j = i + 1; j < n; ++j)
            if (mask & (1u << j)) within += a(cluster[i], cluster[j]);
    }
    double sumd_all = 0.0;
    for (int i = 0; i < n; ++i) sumd_all += within_deg[i];
    const double cross = sumd_in - 2.0 * within;
    const double denom = std::min(sumd_in, sumd_all - sumd_in);
    return cross / denom;
}

std::vector<int> members_of(const Clustering& truth, int k) {
    std::vector<int> out;
    for (size_t i = 0; i < truth.labels.size(); ++i)
        if (truth.labels[i] == k) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

double conductance(const Eigen::MatrixXd& a, const std::vector<int>& cluster,
                   bool* exact, std::uint64_t seed) {
    const int n = static_cast<int>(cluster.size());
    if (n < 2) throw std::invalid_argument("conductance: singleton cluster is undefined");

    std::vector<double> within_deg(n, 0.0);  // d_i^(k)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) within_deg[i] += a(cluster[i], cluster[j]);

    double best = std::numeric_limits<double>::infinity();
    if (n <= 20) {
        if (exact) *exact = true;
        const std::uint32_t full = (1u << n) - 1u;
        for (std::uint32_t mask = 1; mask < full; ++mask)
            best = std::min(best, split_value(a, cluster, within_deg, mask));
    } else {
        if (exact) *exact = false;
        std::mt19937_64 rng(derive_seed(seed, 0x636f6e64ULL));
        std::uniform_int_distribution<std::uint32_t> bits(1, (1u << n) - 2u);
        for (int s = 0; s < 100000; ++s)
            best = std::min(best, split_value(a, cluster, within_deg, bits(rng)));
    }
    return best;
}

InstanceDiagnostics assumption_quantities(const Eigen::MatrixXd& a,
                                          const Clustering& truth,
                                          std::uint64_t seed) {
    InstanceDiagnostics out;
    const int m = static_cast<int>(a.rows());
    const int k = truth.k;
    std::vector<std::vector<int>> clusters(k);
    for (int c = 0; c < k; ++c) clusters[c] = members_of(truth, c);

    // d_i^(k): degree restricted to the own cluster.
    std::vector<double> own_deg(m, 0.0);
    for (int c = 0; c < k; ++c)
        for (int i : clusters[c])
            for (int j : clusters[c]) own_deg[i] += a(i, j);

    out.delta_lb = std::numeric_limits<double>::infinity();
    out.conductance_exact = true;
    for (int c = 0; c < k; ++c) {
        bool exact = true;
        const double h = conductance(a, clusters[c], &exact, seed);
        out.conductance_exact = out.conductance_exact && exact;
        out.delta_lb = std::min(out.delta_lb, 0.5 * h * h);
    }

    // eps1: max over ordered cluster pairs.
    out.eps1 = 0.0;
    for (int c1 = 0; c1 < k; ++c1) {
        for (int c2 = 0; c2 < k; ++c2) {
            if (c1 == c2) continue;
            double s = 0.0;
            for (int i : clusters[c1])
                for (int j : clusters[c2]) s += a(i, j) * a(i, j) / (own_deg[i] * own_deg[j]);
            out.eps1 = std::max(out.eps1, s);
        }
    }

    // eps2: leakage times the within-cluster quadratic mass, max over (k, i).
    out.eps2 = 0.0;
    for (int c = 0; c < k; ++c) {
        double quad = 0.0;
        for (int i1 : clusters[c])
            for (int j1 : clusters[c]) quad += a(i1, j1) * a(i1, j1) / (own_deg[i1] * own_deg[j1]);
        const double quad_sqrt = std::sqrt(quad);
        for (int i : clusters[c]) {
            double leak = 0.0;
            for (int j = 0; j < m; ++j)
                if (truth.labels[j] != c) leak += a(i, j);
            out.eps2 = std::max(out.eps2, (leak / own_deg[i]) * quad_sqrt);
        }
    }

    // C_row: mean own-cluster degree over own degree, max over (k, i).
    out.c_row = 0.0;
    for (int c = 0; c < k; ++c) {
        double total = 0.0;
        for (int i1 : clusters[c]) total += own_deg[i1];
        const double mean = total / clusters[c].size();
        for (int i : clusters[c]) out.c_row = std::max(out.c_row, mean / own_deg[i]);
    }
    return out;
}

void spectral_separation(const Eigen::MatrixXd& a, int k, const Clustering& truth,
                         InstanceDiagnostics& out) {
    const int m = static_cast<int>(a.rows());
    if (k < 2) throw std::invalid_argument("spectral_separation: need K >= 2");
    AffinityMatrix am{a, 1.0};
    const Eigen::MatrixXd l = build_normalized(am);
    const SpectralEmbedding full = top_k_eigen(l, m);

    // Widen the top-K eigenspace across near-ties at the boundary so the
    // projector is well defined.
    int sel = k;
    while (sel < m && full.eigenvalues(sel - 1) - full.eigenvalues(sel) < 1e-10) ++sel;
    const Eigen::MatrixXd z = full.z.leftCols(sel);
    const Eigen::MatrixXd proj = z * z.transpose();

    auto point_dist = [&](int i, int j) {
        const double denom = std::sqrt(proj(i, i) * proj(j, j));
        if (denom < 1e-300) return 0.0;
        const double c = std::min(1.0, std::max(-1.0, proj(i, j) / denom));
        return std::sqrt(std::max(0.0, 2.0 - 2.0 * c));
    };

    out.d_h = std::numeric_limits<double>::infinity();
    out.d_l = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double d = point_dist(i, j);
            if (truth.labels[i] == truth.labels[j])
                out.d_l = std::max(out.d_l, d);
            else
                out.d_h = std::min(out.d_h, d);
        }
    }
    if (!std::isfinite(out.d_h))
        throw std::invalid_argument("spectral_separation: no cross-cluster pair");

    // Minimum spectral gap among the unique top-K eigenvalues.
    std::vector<int> boundary;  // last (0-based) index of each unique group
    for (int i = 0; i < k;) {
        int j = i;
        while (j + 1 < m && full.eigenvalues(j) - full.eigenvalues(j + 1) <= 1e-10) ++j;
        boundary.push_back(j);
        i = j + 1;
    }
    auto gap_after = [&](int idx) {
        return idx + 1 < m ? full.eigenvalues(idx) - full.eigenvalues(idx + 1)
                           : std::numeric_limits<double>::infinity();
    };
    out.beta = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < boundary.size(); ++g) {
        double b = gap_after(boundary[g]);
        if (g > 0) b = std::min(b, gap_after(boundary[g - 1]));
        out.beta = std::min(out.beta, b);
    }

    const double s = std::sin(out.d_h);
    out.stop_ratio = s > 0.0 ? 1.0 / (s * s) : std::numeric_limits<double>::infinity();
}

InstanceDiagnostics diagnose(const Eigen::MatrixXd& a, int k, const Clustering& truth,
                             std::uint64_t seed) {
    InstanceDiagnostics out = assumption_quantities(a, truth, seed);
    spectral_separation(a, k, truth, out);
    return out;
}

}  // namespace seqspec
