#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "seqspec/sequential.hpp"

using namespace seqspec;

namespace {

// Brute-force oracle for the cross-cluster minimum.
double gamma_oracle(const Eigen::MatrixXd& y, const Clustering& c) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.rows(); ++j)
            if (c.labels[i] != c.labels[j])
                best = std::min(best, (y.row(i) - y.row(j)).norm());
    return std::isinf(best) ? 0.0 : best;
}

}  // namespace

TEST_CASE("threshold values") {
    double c = 5.0;
    CHECK(std::isinf(stopping_threshold(10, c, ThresholdForm::arcsin_form)));
    CHECK(std::isinf(stopping_threshold(24, c, ThresholdForm::arcsin_form)));
    CHECK(stopping_threshold(25, c, ThresholdForm::arcsin_form) ==
          doctest::Approx(std::asin(1.0)));
    CHECK(stopping_threshold(100, c, ThresholdForm::arcsin_form) ==
          doctest::Approx(std::asin(0.5)));
    CHECK(stopping_threshold(100, c, ThresholdForm::ratio_form) == doctest::Approx(0.5));
    // the ratio form is defined below t = C^2 as well
    CHECK(stopping_threshold(16, c, ThresholdForm::ratio_form) == doctest::Approx(1.25));
}

TEST_CASE("stopping rule never fires before C^2 under the arcsin form") {
    double c = 4.0;
    for (long t = 1; t < 16; ++t) CHECK_FALSE(stopping_rule(10.0, t, c));
    CHECK(stopping_rule(std::asin(1.0) + 1e-9, 16, c));
    CHECK_FALSE(stopping_rule(0.3, 100, c));       // arcsin(0.4) > 0.3
    CHECK(stopping_rule(0.42, 100, c));            // arcsin(0.4) = 0.4115
}

TEST_CASE("gamma statistic matches the brute-force oracle") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        int m = 4 + static_cast<int>(rng() % 10);
        int k = 2 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd y = Eigen::MatrixXd::Random(m, k);
        Clustering c;
        c.k = k;
        for (int i = 0; i < m; ++i) c.labels.push_back(static_cast<int>(rng() % k));
        CHECK(gamma_statistic(y, c) == doctest::Approx(gamma_oracle(y, c)).epsilon(1e-12));
    }
}

TEST_CASE("gamma is zero when fewer than two clusters are populated") {
    Eigen::MatrixXd y = Eigen::MatrixXd::Random(4, 2);
    Clustering c;
    c.k = 2;
    c.labels = {1, 1, 1, 1};
    CHECK(gamma_statistic(y, c) == 0.0);
}

TEST_CASE("full run on a separated instance stops at t >= ceil(C^2)") {
    ProblemInstance inst = gen_two_block_instance();
    SeqConfig cfg;
    cfg.k = 2;
    cfg.c = 5.0;
    cfg.sigma_a = 0.8;
    cfg.seed = 3;
    StreamSet streams(inst, 3);
    SeqResult res = run_seq_spec(streams, cfg);
    CHECK_FALSE(res.stopped_by_cap);
    CHECK(res.n >= 25);
    CHECK(res.eigen_ops == res.n * 6 * 6 * 6);
    CHECK(res.trace.size() == static_cast<std::size_t>(res.n));
    // the final trace entry is the one that fired
    const TraceEntry& last = res.trace.back();
    CHECK(last.gamma >= last.threshold);
    for (std::size_t i = 0; i + 1 < res.trace.size(); ++i)
        CHECK(res.trace[i].gamma < res.trace[i].threshold);
}

TEST_CASE("identical seeds reproduce the run exactly") {
    ProblemInstance inst = gen_two_block_instance();
    SeqConfig cfg;
    cfg.k = 2;
    cfg.c = 4.0;
    cfg.sigma_a = 0.8;
    cfg.seed = 10;
    StreamSet s1(inst, 10), s2(inst, 10);
    SeqResult r1 = run_seq_spec(s1, cfg);
    SeqResult r2 = run_seq_spec(s2, cfg);
    CHECK(r1.n == r2.n);
    CHECK(r1.clustering.labels == r2.clustering.labels);
}

TEST_CASE("the cap is honored and flagged") {
    ProblemInstance inst = gen_two_block_instance();
    SeqConfig cfg;
    cfg.k = 2;
    cfg.c = 50.0;   // t_L = 2500, far beyond the cap
    cfg.sigma_a = 0.8;
    cfg.max_t = 40;
    StreamSet streams(inst, 2);
    SeqResult res = run_seq_spec(streams, cfg);
    CHECK(res.stopped_by_cap);
    CHECK(res.n == 40);
}

TEST_CASE("default cap is 10 ceil(C^2) + 500") {
    SeqConfig cfg;
    cfg.c = 3.5;  // ceil(12.25) = 13
    CHECK(cfg.effective_max_t() == 630);
    cfg.max_t = 77;
    CHECK(cfg.effective_max_t() == 77);
}

TEST_CASE("ratio form can stop earlier than arcsin") {
    ProblemInstance inst = gen_two_block_instance();
    SeqConfig cfg;
    cfg.k = 2;
    cfg.c = 5.0;
    cfg.sigma_a = 0.8;
    cfg.seed = 8;
    StreamSet s1(inst, 8), s2(inst, 8);
    SeqResult arcsin = run_seq_spec(s1, cfg);
    cfg.threshold = ThresholdForm::ratio_form;
    SeqResult ratio = run_seq_spec(s2, cfg);
    CHECK(ratio.n <= arcsin.n);
}
