#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "seqspec/baselines.hpp"
#include "seqspec/bench.hpp"
#include "seqspec/datagen.hpp"
#include "seqspec/diagnostics.hpp"
#include "seqspec/incremental.hpp"
#include "seqspec/sequential.hpp"

namespace {

struct Opts {
    std::string builtin;
    std::string instance_path;
    std::string ingest_path;
    int splits = 2;
    std::string method = "seq-spec";
    std::string out;
    std::string format = "csv";
    std::string threshold = "arcsin";
    std::string c_grid = "2:12:1";
    int k = 0;
    double c = 7.0;
    double sigma_a = 1.0;
    double sigma_g = 1.0;
    double cov = -1.0;
    int p = 4;
    double q = 0.7;
    long r = 50;
    long t_fixed = 0;
    long trials = 2000;
    long max_t = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
};

seqspec::ProblemInstance resolve_instance(const Opts& o) {
    if (!o.ingest_path.empty()) return seqspec::ingest_labeled(o.ingest_path, o.splits, o.seed);
    if (!o.instance_path.empty()) return seqspec::load_instance(o.instance_path);
    if (o.builtin == "circle")
        return seqspec::gen_circle_instance(o.cov >= 0 ? o.cov : 0.4);
    if (o.builtin == "bridge")
        return seqspec::gen_bridge_instance(o.cov >= 0 ? o.cov : 0.1);
    throw CLI::ValidationError("--builtin", "need --builtin {circle,bridge}, --instance, or --ingest");
}

std::vector<double> parse_grid(const std::string& s) {
    // "lo:hi:step" (inclusive) or a comma list
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        double lo, hi, step;
        if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
            throw CLI::ValidationError("--c-grid", "expected lo:hi:step with step > 0");
        for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
    } else {
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    }
    if (out.empty()) throw CLI::ValidationError("--c-grid", "empty grid");
    return out;
}

seqspec::BenchConfig to_bench_config(const Opts& o) {
    seqspec::BenchConfig bc;
    bc.method = seqspec::parse_method(o.method);
    bc.trials = o.trials;
    bc.seed = o.seed;
    bc.k = o.k;
    bc.sigma_a = o.sigma_a;
    bc.sigma_g = o.sigma_g;
    bc.max_t = o.max_t;
    bc.threshold = o.threshold == "ratio" ? seqspec::ThresholdForm::ratio_form
                                          : seqspec::ThresholdForm::arcsin_form;
    bc.ia.p = o.p;
    bc.ia.q = o.q;
    bc.ia.r = o.r;
    bc.jobs = o.jobs;
    return bc;
}

void add_instance_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--builtin", o.builtin, "Builtin instance {circle, bridge}");
    cmd->add_option("--instance", o.instance_path, "Instance file (JSON, from generate)");
    cmd->add_option("--ingest", o.ingest_path, "Labeled text dataset to split into sequences");
    cmd->add_option("--splits", o.splits, "Sequences per label when ingesting")
        ->default_val(2);
    cmd->add_option("--cov", o.cov, "Override builtin covariance scale");
    cmd->add_option("--seed", o.seed, "Master seed; all randomness derives from it")
        ->default_val(0);
}

void add_run_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--method", o.method,
                    "{seq-spec, ia-seq-spec, fss-spec, seq-kmed, seq-slink}")
        ->default_val("seq-spec");
    cmd->add_option("--k", o.k, "Cluster count (0: instance default)")->default_val(0);
    cmd->add_option("--sigma-a", o.sigma_a, "Affinity bandwidth")->default_val(1.0);
    cmd->add_option("--sigma-g", o.sigma_g, "Gaussian kernel bandwidth")->default_val(1.0);
    cmd->add_option("--p", o.p, "Block size (ia-seq-spec)")->default_val(4);
    cmd->add_option("--q", o.q, "Eigen energy fraction (ia-seq-spec)")->default_val(0.7);
    cmd->add_option("--r", o.r, "Exact refresh period (ia-seq-spec)")->default_val(50);
    cmd->add_option("--t-fixed", o.t_fixed, "Sample budget (fss-spec only)")->default_val(0);
    cmd->add_option("--max-t", o.max_t, "Step cap (0: 10*ceil(C^2)+500)")->default_val(0);
    cmd->add_option("--threshold-form", o.threshold, "{arcsin, ratio}")
        ->default_val("arcsin")
        ->check(CLI::IsMember({"arcsin", "ratio"}));
}

void check_consistency(const Opts& o) {
    if (o.t_fixed > 0 && o.method != "fss-spec")
        throw CLI::ValidationError("--t-fixed", "only valid with --method fss-spec");
    if (o.method == "fss-spec" && o.t_fixed <= 0)
        throw CLI::ValidationError("--t-fixed", "required with --method fss-spec");
}

int do_generate(const Opts& o) {
    seqspec::ProblemInstance inst = resolve_instance(o);
    if (o.out.empty()) throw CLI::ValidationError("--out", "generate requires --out");
    seqspec::save_instance(inst, o.out);
    std::cout << "wrote " << o.out << " (M=" << inst.m << ", K=" << inst.k
              << ", dim=" << inst.dim << ")\n";
    return 0;
}

int do_run(const Opts& o) {
    check_consistency(o);
    seqspec::ProblemInstance inst = resolve_instance(o);
    seqspec::BenchConfig bc = to_bench_config(o);
    double c = o.method == "fss-spec" ? static_cast<double>(o.t_fixed) : o.c;
    seqspec::SeqResult res = seqspec::run_trial(inst, bc, c, o.seed);
    std::cout << "N = " << res.n << (res.stopped_by_cap ? " (capped)" : "") << "\n";
    std::cout << "partition =";
    for (int lab : res.clustering.labels) std::cout << ' ' << lab;
    std::cout << "\n";
    std::cout << "eigen_ops = " << res.eigen_ops << "\n";
    bool err = seqspec::partition_error(res.clustering, inst.true_clustering, inst.free_set);
    std::cout << "matches_truth = " << (err ? "no" : "yes") << "\n";
    if (o.method == "seq-spec") {
        // replay with trace for the Gamma summary
        seqspec::StreamSet streams(inst, o.seed);
        seqspec::SeqConfig sc;
        sc.k = o.k > 0 ? o.k : inst.k;
        sc.c = o.c;
        sc.sigma_a = o.sigma_a;
        sc.sigma_g = o.sigma_g;
        sc.max_t = o.max_t;
        sc.seed = o.seed;
        sc.threshold = bc.threshold;
        sc.keep_trace = true;
        seqspec::SeqResult tr = seqspec::run_seq_spec(streams, sc);
        if (!tr.trace.empty()) {
            const auto& last = tr.trace.back();
            std::cout << "gamma trace: " << tr.trace.size() << " steps, final gamma = "
                      << last.gamma << ", final threshold = " << last.threshold << "\n";
        }
    }
    return 0;
}

int do_bench(const Opts& o) {
    check_consistency(o);
    seqspec::ProblemInstance inst = resolve_instance(o);
    seqspec::BenchConfig bc = to_bench_config(o);
    bc.c_grid = parse_grid(o.c_grid);
    seqspec::BenchSummary s = seqspec::run_bench(inst, bc);
    if (o.out.empty()) throw CLI::ValidationError("--out", "bench requires --out");
    if (o.format == "json")
        seqspec::emit_json(s, o.out);
    else
        seqspec::emit_csv(s, o.out);
    std::cout << "wrote " << o.out << " (" << s.rows.size() << " grid points)\n";
    return 0;
}

int do_diag(const Opts& o) {
    seqspec::ProblemInstance inst = resolve_instance(o);
    if (!inst.has_true_distances)
        throw std::runtime_error("diag needs closed-form true distances (Gaussian instance)");
    seqspec::KernelConfig kc;
    kc.sigma_g = o.sigma_g;
    Eigen::MatrixXd d = seqspec::true_distance_matrix(inst, kc);
    Eigen::MatrixXd a = seqspec::build_affinity(d, o.sigma_a).a;
    int k = o.k > 0 ? o.k : inst.k;
    seqspec::InstanceDiagnostics dg =
        seqspec::diagnose(a, k, inst.true_clustering, o.seed);
    std::printf("delta_lb   = %.6g\n", dg.delta_lb);
    std::printf("eps1       = %.6g\n", dg.eps1);
    std::printf("eps2       = %.6g\n", dg.eps2);
    std::printf("C_row      = %.6g\n", dg.c_row);
    std::printf("d_H        = %.6g\n", dg.d_h);
    std::printf("d_L        = %.6g\n", dg.d_l);
    std::printf("beta       = %.6g\n", dg.beta);
    std::printf("stop_ratio = %.6g  (asymptotic N / C^2)\n", dg.stop_ratio);
    std::printf("conductance_exact = %s\n", dg.conductance_exact ? "yes" : "no");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Opts o;
    CLI::App app{"Sequential nonparametric spectral clustering of data streams"};
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand("generate", "Write a problem instance file");
    add_instance_flags(gen, o);
    gen->add_option("--out", o.out, "Output path");

    CLI::App* run = app.add_subcommand("run", "One clustering run; prints N and partition");
    add_instance_flags(run, o);
    add_run_flags(run, o);
    run->add_option("--c", o.c, "Stopping constant C")->default_val(7.0);

    CLI::App* bench = app.add_subcommand("bench", "Monte Carlo sweep over a C grid");
    add_instance_flags(bench, o);
    add_run_flags(bench, o);
    bench->add_option("--c-grid", o.c_grid, "lo:hi:step (inclusive) or comma list")
        ->default_val("2:12:1");
    bench->add_option("--trials", o.trials, "Trials per grid point")->default_val(2000);
    bench->add_option("--jobs", o.jobs, "Trial parallelism (output independent of it)")
        ->default_val(1);
    bench->add_option("--out", o.out, "Output path");
    bench->add_option("--format", o.format, "{csv, json}")
        ->default_val("csv")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* diag = app.add_subcommand("diag", "Separation diagnostics of an instance");
    add_instance_flags(diag, o);
    diag->add_option("--k", o.k, "Cluster count (0: instance default)")->default_val(0);
    diag->add_option("--sigma-a", o.sigma_a, "Affinity bandwidth")->default_val(1.0);
    diag->add_option("--sigma-g", o.sigma_g, "Gaussian kernel bandwidth")->default_val(1.0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    try {
        if (gen->parsed()) return do_generate(o);
        if (run->parsed()) return do_run(o);
        if (bench->parsed()) return do_bench(o);
        if (diag->parsed()) return do_diag(o);
        return 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
