#ifndef SEQSPEC_SEQUENTIAL_HPP
#define SEQSPEC_SEQUENTIAL_HPP

#include <cstdint>
#include <vector>

#include "seqspec/datagen.hpp"
#include "seqspec/spectral.hpp"

namespace seqspec {

enum class ThresholdForm {
    arcsin_form,  // arcsin(C / sqrt(t)); undefined (never met) while t < C^2
    ratio_form,   // C / sqrt(t)
};

struct SeqConfig {
    int k = 2;
    double c = 5.0;             // stopping constant, > 0
    double sigma_a = 1.0;
    double sigma_g = 1.0;
    long max_t = 0;             // 0 -> 10 * ceil(C^2) + 500
    std::uint64_t seed = 0;
    ThresholdForm threshold = ThresholdForm::arcsin_form;
    bool keep_trace = true;

    long effective_max_t() const;
};

struct TraceEntry {
    long t;
    double gamma;
    double threshold;     // +inf while the arcsin threshold is undefined
    bool exact = true;    // eigen state used this step was exact
};

struct SeqResult {
    long n = 0;                    // stopping time (samples per sequence)
    Clustering clustering;
    bool stopped_by_cap = false;
    std::vector<TraceEntry> trace;  // empty when keep_trace is off
    long long eigen_ops = 0;        // accumulated cost-model operations
    bool stop_verified_exact = true;
};

// Minimum distance between spectral points in different clusters. Returns 0
// when fewer than 2 clusters are nonempty (the driver then never stops).
double gamma_statistic(const Eigen::MatrixXd& y, const Clustering& clustering);

// Threshold value at time t; +inf where arcsin is undefined (t < C^2).
double stopping_threshold(long t, double c, ThresholdForm form);

// True iff gamma meets the threshold at time t. Always false while t < C^2
// under the arcsin form.
bool stopping_rule(double gamma, long t, double c,
                   ThresholdForm form = ThresholdForm::arcsin_form);

// Algorithm: per step draw one sample from each stream, update all pairwise
// MMD estimates, run the spectral pipeline, compute Gamma_t, stop when it
// clears the threshold. Charges M^3 eigen-ops per step.
SeqResult run_seq_spec(StreamSet& streams, const SeqConfig& cfg);

}  // namespace seqspec

#endif  // SEQSPEC_SEQUENTIAL_HPP
