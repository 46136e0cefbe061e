#ifndef SEQSPEC_SPECTRAL_HPP
#define SEQSPEC_SPECTRAL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace seqspec {

// A partition of [M] into K labeled groups. Compared only up to label
// permutation.
struct Clustering {
    std::vector<int> labels;
    int k = 0;
};

struct AffinityMatrix {
    Eigen::MatrixXd a;  // symmetric, nonnegative, zero diagonal
    double sigma_a = 1.0;
};

// Eigen part plus row-normalized spectral points.
struct SpectralEmbedding {
    Eigen::VectorXd eigenvalues;  // descending
    Eigen::MatrixXd z;            // M x K, orthonormal columns
    Eigen::MatrixXd y;            // M x K, unit rows
};

// A_ij = exp(-d_ij^2 / (2 sigma_a^2)) off-diagonal, zero diagonal.
AffinityMatrix build_affinity(const Eigen::MatrixXd& dhat, double sigma_a);

// L = D^{-1/2} A D^{-1/2} with D_ii = sum_j A_ij. Requires M >= 2.
Eigen::MatrixXd build_normalized(const AffinityMatrix& a);

// Top-K eigenpairs of a symmetric matrix, eigenvalues descending, columns
// orthonormal. Sign convention: the largest-magnitude component of each
// vector is positive (ties broken by lowest index).
SpectralEmbedding top_k_eigen(const Eigen::MatrixXd& l, int k);

// Y_i = Z_i / ||Z_i||. Throws std::domain_error when a row norm is below
// 1e-12; callers that need a fallback handle degenerate rows themselves.
Eigen::MatrixXd spectral_points(const Eigen::MatrixXd& z);

// Lloyd's algorithm with k-means++ seeding, best of `restarts` by
// within-cluster sum of squares. Deterministic given the seed; assignment
// ties break toward the lowest center index, empty clusters are re-seeded
// from the farthest point.
Clustering kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                  int restarts = 10, int max_iter = 100);

struct SpecResult {
    Clustering clustering;
    SpectralEmbedding embedding;
    bool degenerate = false;  // some Z row had norm < 1e-12
};

// Spectral points + K-Means for an already-computed eigenvector block.
// Degenerate Z rows get their label overridden with argmax of the raw Z
// entries and the result is flagged instead of failing.
SpecResult cluster_from_z(const Eigen::MatrixXd& z_topk,
                          const Eigen::VectorXd& eigenvalues, int k,
                          std::uint64_t seed);

// Full pipeline: affinity -> normalized matrix -> top-K eigenvectors ->
// spectral points -> K-Means. Degenerate Z rows do not fail the pipeline:
// the row's label is overridden with argmax of its raw Z entries and the
// result is flagged (the sequential driver then refuses to stop that step).
SpecResult spec_cluster(const Eigen::MatrixXd& dhat, int k, double sigma_a,
                        std::uint64_t seed);

}  // namespace seqspec

#endif  // SEQSPEC_SPECTRAL_HPP
