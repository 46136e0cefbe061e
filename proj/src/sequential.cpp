#include "seqspec/sequential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqspec/rng.hpp"

namespace seqspec {

long SeqConfig::effective_max_t() const {
    if (max_t > 0) return max_t;
    return 10 * static_cast<long>(std::ceil(c * c)) + 500;
}

double gamma_statistic(const Eigen::MatrixXd& y, const Clustering& clustering) {
    const int m = static_cast<int>(y.rows());
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (clustering.labels[i] == clustering.labels[j]) continue;
            found = true;
            best = std::min(best, (y.row(i) - y.row(j)).norm());
        }
    }
    return found ? best : 0.0;
}

double stopping_threshold(long t, double c, ThresholdForm form) {
    if (t < 1) throw std::invalid_argument("stopping_threshold: t must be >= 1");
    const double ratio = c / std::sqrt(static_cast<double>(t));
    if (form == ThresholdForm::ratio_form) return ratio;
    if (ratio > 1.0) return std::numeric_limits<double>::infinity();
    return std::asin(ratio);
}

bool stopping_rule(double gamma, long t, double c, ThresholdForm form) {
    return gamma >= stopping_threshold(t, c, form);
}

SeqResult run_seq_spec(StreamSet& streams, const SeqConfig& cfg) {
    if (cfg.c <= 0.0) throw std::invalid_argument("run_seq_spec: C must be positive");
    const int m = streams.size();
    const long long step_cost = static_cast<long long>(m) * m * m;
    const long max_t = cfg.effective_max_t();

    PairwiseDistanceState mmd(m, streams.dim(), KernelConfig{cfg.sigma_g, 1.0});
    SeqResult res;

    for (long t = 1; t <= max_t; ++t) {
        mmd.update(streams.draw());
        const SpecResult spec = spec_cluster(mmd.distances(), cfg.k, cfg.sigma_a,
                                             derive_seed(cfg.seed, 0x6b6d73746570ULL,
                                                         static_cast<std::uint64_t>(t)));
        res.eigen_ops += step_cost;

        const double gamma = spec.degenerate ? 0.0
                                             : gamma_statistic(spec.embedding.y, spec.clustering);
        const double threshold = stopping_threshold(t, cfg.c, cfg.threshold);
        if (cfg.keep_trace) res.trace.push_back({t, gamma, threshold, true});

        res.n = t;
        res.clustering = spec.clustering;
        if (!spec.degenerate && gamma >= threshold) return res;
    }

    res.stopped_by_cap = true;
    return res;
}

}  // namespace seqspec
