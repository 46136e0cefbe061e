#include "seqspec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "seqspec/kernel_mmd.hpp"
#include "seqspec/rng.hpp"

namespace seqspec {

Clustering run_fss_spec(StreamSet& streams, int k, long t_fixed, double sigma_a,
                        double sigma_g, std::uint64_t seed) {
    if (t_fixed < 1) throw std::invalid_argument("run_fss_spec: t_fixed must be >= 1");
    PairwiseDistanceState mmd(streams.size(), streams.dim(), KernelConfig{sigma_g, 1.0});
    for (long t = 0; t < t_fixed; ++t) mmd.update(streams.draw());
    return spec_cluster(mmd.distances(), k, sigma_a,
                        derive_seed(seed, 0x6b6d73746570ULL, static_cast<std::uint64_t>(t_fixed)))
        .clustering;
}

namespace {

double medoid_cost(const Eigen::MatrixXd& dist, const std::vector<int>& medoids) {
    double cost = 0.0;
    for (int i = 0; i < dist.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int m : medoids) best = std::min(best, dist(i, m));
        cost += best;
    }
    return cost;
}

}  // namespace

Clustering kmedoids(const Eigen::MatrixXd& dist, int k) {
    const int n = static_cast<int>(dist.rows());
    if (k < 1 || k > n) throw std::invalid_argument("kmedoids: K out of range");

    // Greedy build.
    std::vector<int> medoids;
    std::vector<bool> used(n, false);
    while (static_cast<int>(medoids.size()) < k) {
        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int c = 0; c < n; ++c) {
            if (used[c]) continue;
            medoids.push_back(c);
            const double cost = medoid_cost(dist, medoids);
            medoids.pop_back();
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        medoids.push_back(best);
        used[best] = true;
    }

    // Swap phase: apply the best-improving swap until none improves.
    double cost = medoid_cost(dist, medoids);
    for (;;) {
        double best_cost = cost;
        int best_slot = -1, best_cand = -1;
        for (size_t s = 0; s < medoids.size(); ++s) {
            const int old = medoids[s];
            for (int c = 0; c < n; ++c) {
                if (used[c]) continue;
                medoids[s] = c;
                const double trial = medoid_cost(dist, medoids);
                if (trial < best_cost - 1e-15) {
                    best_cost = trial;
                    best_slot = static_cast<int>(s);
                    best_cand = c;
                }
            }
            medoids[s] = old;
        }
        if (best_slot < 0) break;
        used[medoids[best_slot]] = false;
        used[best_cand] = true;
        medoids[best_slot] = best_cand;
        cost = best_cost;
    }

    Clustering out;
    out.k = k;
    out.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int s = 1; s < k; ++s)
            if (dist(i, medoids[s]) < dist(i, medoids[best])) best = s;
        out.labels[i] = best;
    }
    return out;
}

Clustering single_linkage(const Eigen::MatrixXd& dist, int k) {
    const int n = static_cast<int>(dist.rows());
    if (k < 1 || k > n) throw std::invalid_argument("single_linkage: K out of range");
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    int clusters = n;
    while (clusters > k) {
        // Merge the closest pair of clusters; single linkage keeps the
        // point-to-point minimum as the inter-cluster distance.
        double best = std::numeric_limits<double>::infinity();
        int ba = -1, bb = -1;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (comp[i] == comp[j]) continue;
                if (dist(i, j) < best) {
                    best = dist(i, j);
                    ba = comp[i];
                    bb = comp[j];
                }
            }
        }
        const int keep = std::min(ba, bb), drop = std::max(ba, bb);
        for (int i = 0; i < n; ++i)
            if (comp[i] == drop) comp[i] = keep;
        --clusters;
    }
    // Relabel components to [0, k).
    Clustering out;
    out.k = k;
    out.labels.assign(n, -1);
    std::vector<int> remap(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (remap[comp[i]] < 0) remap[comp[i]] = next++;
        out.labels[i] = remap[comp[i]];
    }
    return out;
}

namespace {

double min_cross_cluster(const Eigen::MatrixXd& dist, const Clustering& c) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < dist.rows(); ++i) {
        for (int j = i + 1; j < dist.cols(); ++j) {
            if (c.labels[i] == c.labels[j]) continue;
            best = std::min(best, dist(i, j));
            found = true;
        }
    }
    return found ? best : 0.0;
}

template <typename ClusterFn>
SeqResult run_sequential_baseline(StreamSet& streams, const SeqConfig& cfg, ClusterFn cluster) {
    if (cfg.c <= 0.0) throw std::invalid_argument("sequential baseline: C must be positive");
    PairwiseDistanceState mmd(streams.size(), streams.dim(), KernelConfig{cfg.sigma_g, 1.0});
    const long max_t = cfg.effective_max_t();
    SeqResult res;
    for (long t = 1; t <= max_t; ++t) {
        mmd.update(streams.draw());
        const Clustering c = cluster(mmd.distances());
        const double stat = min_cross_cluster(mmd.distances(), c);
        const double threshold = stopping_threshold(t, cfg.c, ThresholdForm::ratio_form);
        if (cfg.keep_trace) res.trace.push_back({t, stat, threshold, true});
        res.n = t;
        res.clustering = c;
        if (stat >= threshold) return res;
    }
    res.stopped_by_cap = true;
    return res;
}

}  // namespace

SeqResult run_seq_kmed(StreamSet& streams, const SeqConfig& cfg) {
    return run_sequential_baseline(
        streams, cfg, [&](const Eigen::MatrixXd& d) { return kmedoids(d, cfg.k); });
}

SeqResult run_seq_slink(StreamSet& streams, const SeqConfig& cfg) {
    return run_sequential_baseline(
        streams, cfg, [&](const Eigen::MatrixXd& d) { return single_linkage(d, cfg.k); });
}

}  // namespace seqspec
