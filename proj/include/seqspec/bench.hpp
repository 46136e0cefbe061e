#ifndef SEQSPEC_BENCH_HPP
#define SEQSPEC_BENCH_HPP

#include <map>
#include <string>
#include <vector>

#include "seqspec/datagen.hpp"
#include "seqspec/incremental.hpp"
#include "seqspec/sequential.hpp"

namespace seqspec {

enum class Method { seq_spec, ia_seq_spec, fss_spec, seq_kmed, seq_slink };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct BenchConfig {
    Method method = Method::seq_spec;
    std::vector<double> c_grid;  // for fss_spec the entries are t_fixed values
    long trials = 2000;
    std::uint64_t seed = 0;
    int k = 0;                   // 0 -> instance K
    double sigma_a = 1.0;
    double sigma_g = 1.0;
    long max_t = 0;              // 0 -> per-run default
    ThresholdForm threshold = ThresholdForm::arcsin_form;
    IAConfig ia;
    int jobs = 1;
};

struct BenchRow {
    double c = 0.0;
    long trials = 0;
    double mean_n = 0.0;
    double ln_error_prob = 0.0;     // -inf sentinel when error_count == 0
    long error_count = 0;
    double mean_eigen_ops = 0.0;    // per-step eigen ops averaged over trials
    long capped_count = 0;
    double err_upper95 = 0.0;       // rule-of-three bound when error_count == 0
};

struct BenchSummary {
    std::vector<BenchRow> rows;
    std::map<std::string, std::string> metadata;
};

// True iff the two partitions differ after removing free_set indices,
// compared via the co-membership relation (label-permutation invariant).
bool partition_error(const Clustering& est, const Clustering& truth,
                     const std::vector<int>& free_set);

// Monte Carlo sweep: independent trials per grid value with per-trial
// derived seeds; capped trials count as errors and are reported separately.
// Results are reduced in trial-index order, independent of `jobs`.
BenchSummary run_bench(const ProblemInstance& inst, const BenchConfig& cfg);

// One trial of `method` with an explicit trial seed (shared by bench and the
// CLI run subcommand).
SeqResult run_trial(const ProblemInstance& inst, const BenchConfig& cfg, double c,
                    std::uint64_t trial_seed);

void emit_csv(const BenchSummary& summary, const std::string& path);
void emit_json(const BenchSummary& summary, const std::string& path);
BenchSummary parse_csv(const std::string& path);

}  // namespace seqspec

#endif  // SEQSPEC_BENCH_HPP
