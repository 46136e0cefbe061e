#ifndef SEQSPEC_INCREMENTAL_HPP
#define SEQSPEC_INCREMENTAL_HPP

#include <vector>

#include "seqspec/sequential.hpp"
#include "seqspec/spectral.hpp"

namespace seqspec {

enum class BlockSearch { exhaustive_pairs, greedy };

struct IAConfig {
    int p = 4;          // block size, 2 <= p <= M
    double q = 0.7;     // eigen energy fraction, (0, 1]
    long r = 50;        // exact refresh period, >= 1
    BlockSearch block_search = BlockSearch::exhaustive_pairs;
};

// Low-rank eigen state tracked between steps.
struct IncrementalEigenState {
    AffinityMatrix a_tilde;       // modified affinity
    Eigen::MatrixXd l_prev;       // normalized matrix at last update
    Eigen::MatrixXd q;            // M x l, orthonormal columns
    Eigen::VectorXd omega;        // length l, descending
    long steps_since_refresh = 0;
    long long op_count = 0;
};

// Index set S of size p maximizing the absolute sum of the S x S block of a
// symmetric matrix, under the chosen search strategy. Ties break toward the
// lexicographically smallest sorted set.
std::vector<int> select_block(const Eigen::MatrixXd& delta, int p, BlockSearch strategy);

// Zero everywhere except the S x S block.
Eigen::MatrixXd masked_delta(const Eigen::MatrixXd& delta, const std::vector<int>& s);

// U = L(A_new) - L(A_old). The affinities may differ only on the S x S
// block, which makes U structurally zero outside rows/columns touching S;
// violations beyond 1e-12 raise std::logic_error.
Eigen::MatrixXd lagrange_delta(const AffinityMatrix& a_new, const AffinityMatrix& a_old,
                               const std::vector<int>& s);

// Smallest l whose top-l eigenvalue energy (sum of squares) reaches fraction
// q of the total, clamped to [1, m].
int select_rank(const Eigen::VectorXd& eigenvalues_desc, double q, int m);

struct EigenUpdate {
    Eigen::VectorXd eigenvalues;  // descending
    Eigen::MatrixXd q;            // orthonormal columns
    bool fallback = false;        // subspace projection residual exceeded 1e-8
};

// Eigendecomposition of (rank-l approximation of the previous matrix) + U,
// via a small projected eigenproblem. The basis spans the previous top-l
// eigenvectors, the canonical vectors of S, and the out-of-basis residual of
// the touched columns of U, so the projected problem is exact for the
// approximated matrix. Rank-deficient directions are dropped, never fatal.
EigenUpdate incremental_update(const Eigen::MatrixXd& q_l, const Eigen::VectorXd& omega_l,
                               const Eigen::MatrixXd& u, const std::vector<int>& s);

// IA-SEQ-SPEC: per step only the dominant p x p affinity block is applied
// and the eigen state is updated at its adaptive rank. Exact decomposition
// every r steps, and every stop decision is re-verified exactly.
SeqResult run_ia_seq_spec(StreamSet& streams, const SeqConfig& cfg, const IAConfig& ia);

}  // namespace seqspec

#endif  // SEQSPEC_INCREMENTAL_HPP
