#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "seqspec/baselines.hpp"
#include "seqspec/datagen.hpp"

using namespace seqspec;

namespace {

Eigen::MatrixXd block_distance(int n1, int n2, double within, double across) {
    int n = n1 + n2;
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, across);
    for (int i = 0; i < n; ++i) d(i, i) = 0.0;
    auto fill = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = lo; j < hi; ++j)
                if (i != j) d(i, j) = within;
    };
    fill(0, n1);
    fill(n1, n1 + n2);
    return d;
}

bool same_partition(const Clustering& a, const Clustering& b) {
    if (a.labels.size() != b.labels.size()) return false;
    for (std::size_t i = 0; i < a.labels.size(); ++i)
        for (std::size_t j = i + 1; j < a.labels.size(); ++j)
            if ((a.labels[i] == a.labels[j]) != (b.labels[i] == b.labels[j])) return false;
    return true;
}

}  // namespace

TEST_CASE("kmedoids splits two clean blocks") {
    Eigen::MatrixXd d = block_distance(4, 5, 0.1, 3.0);
    Clustering c = kmedoids(d, 2);
    Clustering truth;
    truth.k = 2;
    truth.labels = {0, 0, 0, 0, 1, 1, 1, 1, 1};
    CHECK(same_partition(c, truth));
    CHECK(c.k == 2);
}

TEST_CASE("kmedoids is deterministic") {
    Eigen::MatrixXd d = block_distance(5, 5, 0.4, 1.0);
    Clustering c1 = kmedoids(d, 2);
    Clustering c2 = kmedoids(d, 2);
    CHECK(c1.labels == c2.labels);
}

TEST_CASE("single linkage recovers chain-structured clusters") {
    // a chain 0-1-2 with small gaps, then a far block 3-4
    Eigen::MatrixXd d(5, 5);
    d << 0.0, 0.2, 0.5, 5.0, 5.2,
         0.2, 0.0, 0.2, 5.1, 5.0,
         0.5, 0.2, 0.0, 5.0, 5.3,
         5.0, 5.1, 5.0, 0.0, 0.3,
         5.2, 5.0, 5.3, 0.3, 0.0;
    Clustering c = single_linkage(d, 2);
    Clustering truth;
    truth.k = 2;
    truth.labels = {0, 0, 0, 1, 1};
    CHECK(same_partition(c, truth));
    // labels are canonical: first occurrence order
    CHECK(c.labels[0] == 0);
    CHECK(c.labels[3] == 1);
}

TEST_CASE("single linkage with k = n is the identity partition") {
    Eigen::MatrixXd d = block_distance(2, 2, 0.5, 1.0);
    Clustering c = single_linkage(d, 4);
    CHECK(c.labels == std::vector<int>({0, 1, 2, 3}));
}

TEST_CASE("fixed-sample-size run matches the sequential pipeline at the same t") {
    ProblemInstance inst = gen_two_block_instance();
    StreamSet s1(inst, 4);
    Clustering fss = run_fss_spec(s1, 2, 60, 0.8, 1.0, 4);
    Clustering truth = inst.true_clustering;
    CHECK(same_partition(fss, truth));
    // determinism
    StreamSet s2(inst, 4);
    Clustering again = run_fss_spec(s2, 2, 60, 0.8, 1.0, 4);
    CHECK(fss.labels == again.labels);
}

TEST_CASE("sequential kmedoids baseline stops and clusters separated data") {
    ProblemInstance inst = gen_two_block_instance();
    SeqConfig cfg;
    cfg.k = 2;
    cfg.c = 2.0;
    cfg.seed = 6;
    StreamSet streams(inst, 6);
    SeqResult res = run_seq_kmed(streams, cfg);
    CHECK_FALSE(res.stopped_by_cap);
    CHECK(same_partition(res.clustering, inst.true_clustering));
}

TEST_CASE("sequential single-linkage baseline stops and clusters separated data") {
    ProblemInstance inst = gen_two_block_instance();
    SeqConfig cfg;
    cfg.k = 2;
    cfg.c = 2.0;
    cfg.seed = 12;
    StreamSet streams(inst, 12);
    SeqResult res = run_seq_slink(streams, cfg);
    CHECK_FALSE(res.stopped_by_cap);
    CHECK(same_partition(res.clustering, inst.true_clustering));
}
