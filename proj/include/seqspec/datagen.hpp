#ifndef SEQSPEC_DATAGEN_HPP
#define SEQSPEC_DATAGEN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "seqspec/kernel_mmd.hpp"
#include "seqspec/spectral.hpp"

namespace seqspec {

// Per-sequence sampler: isotropic Gaussian (closed-form true distances
// available) or an empirical pool sampled i.i.d. with replacement.
struct SamplerSpec {
    enum class Kind { gaussian, empirical };
    Kind kind = Kind::gaussian;
    Eigen::VectorXd mean;
    double sigma2 = 0.0;
    Eigen::MatrixXd pool;  // dim x n, empirical only
};

struct ProblemInstance {
    std::string id;
    int m = 0;
    int k = 0;
    int dim = 0;
    std::vector<SamplerSpec> dists;
    Clustering true_clustering;
    std::vector<int> free_set;        // indices whose assignment is unconstrained
    bool has_true_distances = false;  // all-Gaussian with shared isotropic covariance
};

// One live data sequence. next() is deterministic given the seed it was
// created with.
class SampleStream {
public:
    SampleStream(std::shared_ptr<const SamplerSpec> spec, std::uint64_t seed);
    Eigen::VectorXd next();

private:
    std::shared_ptr<const SamplerSpec> spec_;
    std::mt19937_64 rng_;
};

// All M streams of an instance, advanced in lockstep.
class StreamSet {
public:
    StreamSet(const ProblemInstance& inst, std::uint64_t trial_seed);
    // One new sample per sequence, dim x M.
    Eigen::MatrixXd draw();
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(streams_.size()); }

private:
    int dim_;
    std::vector<SampleStream> streams_;
};

// Synthetic Dataset 1: `inner` means on the unit circle, `outer` on the
// radius-2 circle, all with covariance cov_scale * I_2. True clustering is
// inner vs outer.
ProblemInstance gen_circle_instance(double cov_scale = 0.4, int inner = 10,
                                    int outer = 20);

// Synthetic Dataset 2: two 12-sequence clusters plus a 6-sequence bridge on
// y = 0 between them; bridge indices form the free set.
ProblemInstance gen_bridge_instance(double cov_scale = 0.1);

// Two well-separated isotropic Gaussian blocks (diagnostic/benchmark helper).
ProblemInstance gen_two_block_instance(int per_cluster = 3, double separation = 6.0,
                                       double cov_scale = 0.25);

// Labeled dataset ingestion: rows are "label f1 f2 ..." (comma or whitespace
// delimited). Each label's points are split evenly at random into
// splits_per_label pools; each pool becomes one empirical sequence.
ProblemInstance ingest_labeled(const std::string& path, int splits_per_label,
                               std::uint64_t seed);

// Closed-form true pairwise MMD matrix; requires has_true_distances.
Eigen::MatrixXd true_distance_matrix(const ProblemInstance& inst,
                                     const KernelConfig& cfg);

void save_instance(const ProblemInstance& inst, const std::string& path);
ProblemInstance load_instance(const std::string& path);

}  // namespace seqspec

#endif  // SEQSPEC_DATAGEN_HPP
