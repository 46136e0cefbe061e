#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqspec/bench.hpp"

using namespace seqspec;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("partition error is the co-membership disagreement") {
    Clustering truth;
    truth.k = 2;
    truth.labels = {0, 0, 1, 1};
    Clustering same;
    same.k = 2;
    same.labels = {1, 1, 0, 0};  // relabeled, identical partition
    CHECK_FALSE(partition_error(same, truth, {}));
    Clustering wrong;
    wrong.k = 2;
    wrong.labels = {0, 1, 0, 1};
    CHECK(partition_error(wrong, truth, {}));
}

TEST_CASE("free-set indices are excluded from the comparison") {
    Clustering truth;
    truth.k = 2;
    truth.labels = {0, 0, 1, 1, 0};
    Clustering est;
    est.k = 2;
    est.labels = {0, 0, 1, 1, 1};  // index 4 differs
    CHECK(partition_error(est, truth, {}));
    CHECK_FALSE(partition_error(est, truth, {4}));
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::seq_spec, Method::ia_seq_spec, Method::fss_spec,
                     Method::seq_kmed, Method::seq_slink})
        CHECK(parse_method(method_name(m)) == m);
    CHECK_THROWS(parse_method("nope"));
}

TEST_CASE("empty grid emits a header-only file") {
    BenchSummary s;
    s.metadata["method"] = "seq-spec";
    emit_csv(s, "/tmp/seqspec_empty.csv");
    BenchSummary back = parse_csv("/tmp/seqspec_empty.csv");
    CHECK(back.rows.empty());
    CHECK(back.metadata.at("method") == "seq-spec");
    std::remove("/tmp/seqspec_empty.csv");
}

TEST_CASE("bench on a separated instance: rows, bounds, reproducibility") {
    ProblemInstance inst = gen_two_block_instance();
    BenchConfig cfg;
    cfg.method = Method::seq_spec;
    cfg.sigma_a = 0.8;
    cfg.trials = 12;
    cfg.seed = 31;
    cfg.c_grid = {2.0, 3.0};
    BenchSummary s = run_bench(inst, cfg);
    REQUIRE(s.rows.size() == 2);
    for (const BenchRow& r : s.rows) {
        CHECK(r.trials == 12);
        CHECK(r.mean_n >= std::ceil(r.c * r.c));
        CHECK(r.capped_count == 0);
        if (r.error_count == 0) {
            CHECK(std::isinf(r.ln_error_prob));
            CHECK(r.err_upper95 == doctest::Approx(3.0 / 12));
        }
    }
    // byte-identical re-run
    emit_csv(s, "/tmp/seqspec_b1.csv");
    BenchSummary s2 = run_bench(inst, cfg);
    emit_csv(s2, "/tmp/seqspec_b2.csv");
    CHECK(slurp("/tmp/seqspec_b1.csv") == slurp("/tmp/seqspec_b2.csv"));
    std::remove("/tmp/seqspec_b1.csv");
    std::remove("/tmp/seqspec_b2.csv");
}

TEST_CASE("results are independent of the parallelism degree") {
    ProblemInstance inst = gen_two_block_instance();
    BenchConfig cfg;
    cfg.method = Method::seq_spec;
    cfg.sigma_a = 0.8;
    cfg.trials = 10;
    cfg.seed = 5;
    cfg.c_grid = {2.5};
    cfg.jobs = 1;
    BenchSummary s1 = run_bench(inst, cfg);
    cfg.jobs = 4;
    BenchSummary s4 = run_bench(inst, cfg);
    emit_csv(s1, "/tmp/seqspec_j1.csv");
    emit_csv(s4, "/tmp/seqspec_j4.csv");
    CHECK(slurp("/tmp/seqspec_j1.csv") == slurp("/tmp/seqspec_j4.csv"));
    std::remove("/tmp/seqspec_j1.csv");
    std::remove("/tmp/seqspec_j4.csv");
}

TEST_CASE("capped trials count as errors and are reported separately") {
    ProblemInstance inst = gen_two_block_instance();
    BenchConfig cfg;
    cfg.method = Method::seq_spec;
    cfg.sigma_a = 0.8;
    cfg.trials = 5;
    cfg.seed = 2;
    cfg.c_grid = {50.0};  // t_L = 2500
    cfg.max_t = 30;
    BenchSummary s = run_bench(inst, cfg);
    CHECK(s.rows[0].capped_count == 5);
    CHECK(s.rows[0].error_count == 5);
    CHECK(s.rows[0].ln_error_prob == doctest::Approx(0.0));
}

TEST_CASE("csv round-trip reproduces every value bit-exactly") {
    BenchSummary s;
    s.metadata["method"] = "ia-seq-spec";
    s.metadata["q"] = "0.69999999999999996";
    BenchRow r;
    r.c = 7.1234567890123456;
    r.trials = 2000;
    r.mean_n = 81.000000000000014;
    r.ln_error_prob = -1.5863214487843055;
    r.error_count = 409;
    r.mean_eigen_ops = 2098.3333333333335;
    r.capped_count = 0;
    r.err_upper95 = 0.22216;
    s.rows.push_back(r);
    BenchRow inf_row = r;
    inf_row.error_count = 0;
    inf_row.ln_error_prob = -std::numeric_limits<double>::infinity();
    s.rows.push_back(inf_row);
    emit_csv(s, "/tmp/seqspec_rt.csv");
    BenchSummary back = parse_csv("/tmp/seqspec_rt.csv");
    REQUIRE(back.rows.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(back.rows[i].c == s.rows[i].c);
        CHECK(back.rows[i].mean_n == s.rows[i].mean_n);
        CHECK(back.rows[i].ln_error_prob == s.rows[i].ln_error_prob);
        CHECK(back.rows[i].mean_eigen_ops == s.rows[i].mean_eigen_ops);
        CHECK(back.rows[i].err_upper95 == s.rows[i].err_upper95);
        CHECK(back.rows[i].error_count == s.rows[i].error_count);
    }
    CHECK(back.metadata == s.metadata);
    // second emit of the parsed summary is byte-identical
    emit_csv(back, "/tmp/seqspec_rt2.csv");
    CHECK(slurp("/tmp/seqspec_rt.csv") == slurp("/tmp/seqspec_rt2.csv"));
    std::remove("/tmp/seqspec_rt.csv");
    std::remove("/tmp/seqspec_rt2.csv");
}

TEST_CASE("json emission carries the same rows") {
    BenchSummary s;
    s.metadata["method"] = "seq-spec";
    BenchRow r;
    r.c = 5;
    r.trials = 10;
    r.mean_n = 26.5;
    r.ln_error_prob = -0.5;
    r.error_count = 6;
    r.mean_eigen_ops = 27000;
    s.rows.push_back(r);
    emit_json(s, "/tmp/seqspec_b.json");
    std::string text = slurp("/tmp/seqspec_b.json");
    CHECK(text.find("\"mean_N\": 26.5") != std::string::npos);
    CHECK(text.find("\"method\": \"seq-spec\"") != std::string::npos);
    std::remove("/tmp/seqspec_b.json");
}
