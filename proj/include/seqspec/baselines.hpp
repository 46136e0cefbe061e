#ifndef SEQSPEC_BASELINES_HPP
#define SEQSPEC_BASELINES_HPP

#include "seqspec/sequential.hpp"

namespace seqspec {

// Fixed-sample-size spectral clustering: t_fixed update steps, then one
// spectral clustering pass.
Clustering run_fss_spec(StreamSet& streams, int k, long t_fixed, double sigma_a,
                        double sigma_g, std::uint64_t seed);

// K-medoids on the running MMD matrix (PAM: greedy build + best-improvement
// swaps). Deterministic; ties break toward the lowest index.
Clustering kmedoids(const Eigen::MatrixXd& dist, int k);

// Single-linkage agglomeration cut at k clusters.
Clustering single_linkage(const Eigen::MatrixXd& dist, int k);

// Sequential baselines. Both share the recursive MMD front end with
// SEQ-SPEC and stop when the minimum cross-cluster raw distance clears
// C / sqrt(t) (surrogate statistics; the threshold form and distance domain
// match the cited sequential methods).
SeqResult run_seq_kmed(StreamSet& streams, const SeqConfig& cfg);
SeqResult run_seq_slink(StreamSet& streams, const SeqConfig& cfg);

}  // namespace seqspec

#endif  // SEQSPEC_BASELINES_HPP
