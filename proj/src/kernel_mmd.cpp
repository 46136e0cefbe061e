#include "seqspec/kernel_mmd.hpp"

#include <cmath>
#include <stdexcept>

namespace seqspec {

namespace {

void check_cfg(const KernelConfig& cfg) {
    if (cfg.sigma_g <= 0.0) throw std::invalid_argument("kernel bandwidth must be positive");
    if (cfg.bound <= 0.0) throw std::invalid_argument("kernel bound must be positive");
}

}  // namespace

double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const KernelConfig& cfg) {
    check_cfg(cfg);
    if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
    return std::exp(-(x - y).squaredNorm() / (2.0 * cfg.sigma_g * cfg.sigma_g));
}

double h_combine(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                 const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                 const KernelConfig& cfg) {
    return kernel_eval(x1, x2, cfg) + kernel_eval(y1, y2, cfg) - 2.0 * kernel_eval(x1, y2, cfg);
}

double gaussian_mmd_closed_form(const Eigen::VectorXd& mu1,
                                const Eigen::VectorXd& mu2, double s2,
                                const KernelConfig& cfg) {
    check_cfg(cfg);
    if (s2 < 0.0) throw std::invalid_argument("gaussian_mmd_closed_form: variance must be >= 0");
    if (mu1.size() != mu2.size())
        throw std::invalid_argument("gaussian_mmd_closed_form: dimension mismatch");
    const double sg2 = cfg.sigma_g * cfg.sigma_g;
    const int d = static_cast<int>(mu1.size());
    // E k(x, y) for x ~ N(mu1, s2 I), y ~ N(mu2, s2 I), independent.
    auto expected_kernel = [&](double mean_gap2) {
        const double v = sg2 + 2.0 * s2;
        return std::pow(sg2 / v, d / 2.0) * std::exp(-mean_gap2 / (2.0 * v));
    };
    const double gap2 = (mu1 - mu2).squaredNorm();
    const double mmd2 = expected_kernel(0.0) + expected_kernel(0.0) - 2.0 * expected_kernel(gap2);
    return std::sqrt(std::max(0.0, mmd2));
}

PairwiseDistanceState::PairwiseDistanceState(int m, int dim, KernelConfig cfg)
    : m_(m), dim_(dim), cfg_(cfg) {
    if (m < 2) throw std::invalid_argument("PairwiseDistanceState: need at least 2 sequences");
    if (dim < 1) throw std::invalid_argument("PairwiseDistanceState: dimension must be >= 1");
    check_cfg(cfg_);
    samples_.resize(m_);
    for (auto& s : samples_) s.resize(dim_, 0);
    sum_ = Eigen::MatrixXd::Zero(m_, m_);
    dhat_ = Eigen::MatrixXd::Zero(m_, m_);
}

Eigen::Ref<const Eigen::MatrixXd> PairwiseDistanceState::history(int i) const {
    return samples_.at(i).leftCols(t_);
}

void PairwiseDistanceState::update(const Eigen::MatrixXd& new_samples) {
    if (new_samples.rows() != dim_ || new_samples.cols() != m_)
        throw std::invalid_argument("mmd update: expected one dim-vector per sequence");

    const double inv2s = 1.0 / (2.0 * cfg_.sigma_g * cfg_.sigma_g);
    const long t = t_;

    // cross(i, j) = sum over past samples l <= t of k(X_l^(i), x_new^(j)).
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(m_, m_);
    if (t > 0) {
        const Eigen::VectorXd new_norms = new_samples.colwise().squaredNorm();
        for (int i = 0; i < m_; ++i) {
            const auto hist = samples_[i].leftCols(t);
            const Eigen::VectorXd hist_norms = hist.colwise().squaredNorm();
            // t x M squared distances, then vectorized exp.
            Eigen::MatrixXd d2 = (-2.0 * hist.transpose() * new_samples).eval();
            d2.colwise() += hist_norms;
            d2.rowwise() += new_norms.transpose();
            cross.row(i) = (-inv2s * d2.array()).exp().colwise().sum();
        }
    }

    // k(x_new^(i), x_new^(j)) for all pairs.
    Eigen::MatrixXd kn(m_, m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            kn(i, j) = std::exp(-inv2s * (new_samples.col(i) - new_samples.col(j)).squaredNorm());

    // Per unordered pair: add the two new h-sums of the recursion to the
    // running sum t^2 dhat^2 and renormalize. Bracket clamped at 0 before
    // the square root.
    for (int i = 0; i < m_; ++i) {
        const double si = cross(i, i);  // sum of k(X_l^(i), x_new^(i)), l <= t
        for (int j = i + 1; j < m_; ++j) {
            const double sj = cross(j, j);
            const double first = (si + 1.0) + (sj + 1.0) - 2.0 * (cross(i, j) + kn(i, j));
            const double second = si + sj - 2.0 * cross(j, i);
            const double s = std::max(0.0, sum_(i, j) + first + second);
            sum_(i, j) = sum_(j, i) = s;
            const double d = std::sqrt(s) / static_cast<double>(t + 1);
            dhat_(i, j) = dhat_(j, i) = d;
        }
    }

    // Append the new samples to the histories.
    for (int i = 0; i < m_; ++i) {
        if (samples_[i].cols() == t) {
            Eigen::MatrixXd grown(dim_, std::max<long>(16, 2 * t));
            grown.leftCols(t) = samples_[i].leftCols(t);
            samples_[i] = std::move(grown);
        }
        samples_[i].col(t) = new_samples.col(i);
    }
    ++t_;
}

}  // namespace seqspec
