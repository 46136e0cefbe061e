#ifndef SEQSPEC_KERNEL_MMD_HPP
#define SEQSPEC_KERNEL_MMD_HPP

#include <Eigen/Dense>
#include <vector>

namespace seqspec {

// Bounded kernel configuration. For the Gaussian kernel the supremum is 1.
struct KernelConfig {
    double sigma_g = 1.0;  // kernel bandwidth, > 0
    double bound = 1.0;    // B, sup of the kernel, > 0
};

// k(x, y) = exp(-||x - y||^2 / (2 sigma_g^2)), in [0, B].
double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const KernelConfig& cfg);

// h(x1, x2, y1, y2) = k(x1, x2) + k(y1, y2) - 2 k(x1, y2), in [-2B, 2B].
double h_combine(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                 const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                 const KernelConfig& cfg);

// True MMD between N(mu1, s2 I) and N(mu2, s2 I) under the Gaussian kernel,
// via the closed-form Gaussian-Gaussian kernel expectation.
double gaussian_mmd_closed_form(const Eigen::VectorXd& mu1,
                                const Eigen::VectorXd& mu2, double s2,
                                const KernelConfig& cfg);

// Running biased MMD estimates for all M(M-1)/2 pairs of sequences.
//
// Keeps the full per-sequence sample history: the recursive update sums the
// kernel against every past sample of both sequences when a new sample
// arrives. The recursion carries t^2 * dhat^2 so that the result matches the
// batch biased estimator recomputed from scratch (up to round-off).
class PairwiseDistanceState {
public:
    PairwiseDistanceState(int m, int dim, KernelConfig cfg = {});

    // Advance one step: exactly one new sample per sequence (dim x M).
    // Pure per-pair updates; the result does not depend on pair order.
    void update(const Eigen::MatrixXd& new_samples);

    int num_sequences() const { return m_; }
    int dim() const { return dim_; }
    long time() const { return t_; }
    const KernelConfig& kernel() const { return cfg_; }

    // Symmetric M x M matrix of current estimates, zero diagonal.
    const Eigen::MatrixXd& distances() const { return dhat_; }

    // dim x t matrix of the samples of sequence i seen so far.
    Eigen::Ref<const Eigen::MatrixXd> history(int i) const;

private:
    int m_;
    int dim_;
    long t_ = 0;
    KernelConfig cfg_;
    std::vector<Eigen::MatrixXd> samples_;  // per sequence, dim x capacity
    Eigen::MatrixXd sum_;                   // t^2 * dhat^2, symmetric
    Eigen::MatrixXd dhat_;
};

}  // namespace seqspec

#endif  // SEQSPEC_KERNEL_MMD_HPP
