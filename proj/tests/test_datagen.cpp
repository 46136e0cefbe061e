#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "seqspec/datagen.hpp"

using namespace seqspec;

TEST_CASE("circle instance layout") {
    ProblemInstance inst = gen_circle_instance();
    CHECK(inst.m == 30);
    CHECK(inst.k == 2);
    CHECK(inst.dim == 2);
    CHECK(inst.has_true_distances);
    CHECK(inst.free_set.empty());
    for (int i = 0; i < 10; ++i) {
        CHECK(inst.dists[i].mean.norm() == doctest::Approx(1.0));
        CHECK(inst.true_clustering.labels[i] == 0);
        CHECK(inst.dists[i].sigma2 == doctest::Approx(0.4));
    }
    for (int i = 10; i < 30; ++i) {
        CHECK(inst.dists[i].mean.norm() == doctest::Approx(2.0));
        CHECK(inst.true_clustering.labels[i] == 1);
    }
    CHECK(inst.dists[0].mean[0] == doctest::Approx(1.0));
    CHECK(inst.dists[0].mean[1] == doctest::Approx(0.0));
    // equal angular spacing on each ring
    double ang = 2.0 * M_PI / 10.0;
    CHECK(inst.dists[1].mean[0] == doctest::Approx(std::cos(ang)));
    CHECK(inst.dists[1].mean[1] == doctest::Approx(std::sin(ang)));
}

TEST_CASE("bridge instance layout") {
    ProblemInstance inst = gen_bridge_instance();
    CHECK(inst.m == 30);
    CHECK(inst.k == 2);
    CHECK(inst.free_set == std::vector<int>({24, 25, 26, 27, 28, 29}));
    for (int i = 0; i < 12; ++i) CHECK(inst.true_clustering.labels[i] == 0);
    for (int i = 12; i < 24; ++i) CHECK(inst.true_clustering.labels[i] == 1);
    // the bridge runs along y = 0 from x = -0.5 to 0.5 in steps of 0.2
    for (int b = 0; b < 6; ++b) {
        CHECK(inst.dists[24 + b].mean[0] == doctest::Approx(-0.5 + 0.2 * b));
        CHECK(inst.dists[24 + b].mean[1] == doctest::Approx(0.0));
    }
    CHECK(inst.dists[0].sigma2 == doctest::Approx(0.1));
}

TEST_CASE("two-block instance separation") {
    ProblemInstance inst = gen_two_block_instance(3, 6.0, 0.25);
    CHECK(inst.m == 6);
    CHECK(inst.k == 2);
    double cross = (inst.dists[0].mean - inst.dists[3].mean).norm();
    CHECK(cross >= 6.0 - 1e-9);
}

TEST_CASE("streams are deterministic per seed and differ across seeds") {
    ProblemInstance inst = gen_circle_instance();
    StreamSet s1(inst, 42), s2(inst, 42), s3(inst, 43);
    Eigen::MatrixXd a = s1.draw(), b = s2.draw(), c = s3.draw();
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 30);
    // lockstep advance keeps the streams aligned
    Eigen::MatrixXd a2 = s1.draw(), b2 = s2.draw();
    CHECK((a2 - b2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a - a2).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sample moments match the sampler spec") {
    ProblemInstance inst = gen_circle_instance();
    StreamSet s(inst, 7);
    const int n = 4000;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(2);
    double sq = 0.0;
    for (int t = 0; t < n; ++t) {
        Eigen::MatrixXd d = s.draw();
        acc += d.col(0);
        sq += (d.col(0) - inst.dists[0].mean).squaredNorm();
    }
    Eigen::VectorXd mean = acc / n;
    CHECK((mean - inst.dists[0].mean).norm() <= 0.05);
    CHECK(sq / n == doctest::Approx(2 * 0.4).epsilon(0.1));
}

TEST_CASE("true distance matrix is symmetric, zero diagonal, monotone in mean gap") {
    ProblemInstance inst = gen_circle_instance();
    KernelConfig cfg;
    Eigen::MatrixXd d = true_distance_matrix(inst, cfg);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
    // sequence 0 (inner, angle 0) is closer to its ring neighbor than to the
    // opposite side of the outer ring
    CHECK(d(0, 1) < d(0, 20));
}

TEST_CASE("instance save/load round-trip") {
    ProblemInstance inst = gen_bridge_instance();
    std::string path = "/tmp/seqspec_test_inst.json";
    save_instance(inst, path);
    ProblemInstance back = load_instance(path);
    CHECK(back.m == inst.m);
    CHECK(back.k == inst.k);
    CHECK(back.dim == inst.dim);
    CHECK(back.free_set == inst.free_set);
    CHECK(back.true_clustering.labels == inst.true_clustering.labels);
    CHECK(back.has_true_distances == inst.has_true_distances);
    for (int i = 0; i < inst.m; ++i) {
        CHECK((back.dists[i].mean - inst.dists[i].mean).cwiseAbs().maxCoeff() == 0.0);
        CHECK(back.dists[i].sigma2 == inst.dists[i].sigma2);
    }
    // loaded instance drives identical streams
    StreamSet s1(inst, 5), s2(back, 5);
    CHECK((s1.draw() - s2.draw()).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("labeled ingestion splits each label into empirical pools") {
    std::string path = "/tmp/seqspec_test_labeled.txt";
    {
        std::ofstream f(path);
        f << "label x y\n";
        for (int i = 0; i < 40; ++i) f << "a " << 0.1 * i << " 1.0\n";
        for (int i = 0; i < 40; ++i) f << "b," << 5.0 + 0.1 * i << ",2.0\n";
    }
    ProblemInstance inst = ingest_labeled(path, 2, 9);
    CHECK(inst.m == 4);
    CHECK(inst.k == 2);
    CHECK(inst.dim == 2);
    CHECK_FALSE(inst.has_true_distances);
    int label_a = inst.true_clustering.labels[0];
    CHECK(inst.true_clustering.labels[1] == label_a);
    CHECK(inst.true_clustering.labels[2] != label_a);
    for (const auto& d : inst.dists) {
        CHECK(d.kind == SamplerSpec::Kind::empirical);
        CHECK(d.pool.cols() == 20);
    }
    StreamSet s(inst, 1);
    Eigen::MatrixXd draw = s.draw();
    CHECK(draw.cols() == 4);
    std::remove(path.c_str());
}
