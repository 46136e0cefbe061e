#include "seqspec/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqspec/kernel_mmd.hpp"
#include "seqspec/rng.hpp"

namespace seqspec {

namespace {

double block_score(const Eigen::MatrixXd& absd, const std::vector<int>& s) {
    double total = 0.0;
    for (int i : s)
        for (int j : s) total += absd(i, j);
    return total;
}

// Greedily extend S by the index adding the most absolute mass; ties go to
// the lowest index.
void extend_greedy(const Eigen::MatrixXd& absd, std::vector<int>& s, int p) {
    const int m = static_cast<int>(absd.rows());
    std::vector<bool> in(m, false);
    for (int i : s) in[i] = true;
    while (static_cast<int>(s.size()) < p) {
        int best = -1;
        double best_gain = -1.0;
        for (int u = 0; u < m; ++u) {
            if (in[u]) continue;
            double gain = absd(u, u);
            for (int v : s) gain += 2.0 * absd(u, v);
            if (gain > best_gain) {
                best_gain = gain;
                best = u;
            }
        }
        s.push_back(best);
        in[best] = true;
    }
    std::sort(s.begin(), s.end());
}

}  // namespace

std::vector<int> select_block(const Eigen::MatrixXd& delta, int p, BlockSearch strategy) {
    const int m = static_cast<int>(delta.rows());
    if (p < 2 || p > m) throw std::invalid_argument("select_block: p out of range");
    if (p == m) {
        std::vector<int> all(m);
        for (int i = 0; i < m; ++i) all[i] = i;
        return all;
    }
    const Eigen::MatrixXd absd = delta.cwiseAbs();

    if (strategy == BlockSearch::greedy) {
        // p indices with the largest absolute row sums.
        const Eigen::VectorXd rowsum = absd.rowwise().sum();
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return rowsum(a) > rowsum(b); });
        std::vector<int> s(order.begin(), order.begin() + p);
        std::sort(s.begin(), s.end());
        return s;
    }

    // Exhaustive over all pairs, then greedy extension for p > 2. The first
    // strictly-better pair wins, so ties resolve to the lexicographically
    // smallest {i, j}.
    std::vector<int> best_pair = {0, 1};
    double best = -1.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double sc = absd(i, i) + absd(j, j) + 2.0 * absd(i, j);
            if (sc > best) {
                best = sc;
                best_pair = {i, j};
            }
        }
    }
    if (p > 2) extend_greedy(absd, best_pair, p);
    return best_pair;
}

Eigen::MatrixXd masked_delta(const Eigen::MatrixXd& delta, const std::vector<int>& s) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(delta.rows(), delta.cols());
    for (int i : s)
        for (int j : s) out(i, j) = delta(i, j);
    return out;
}

Eigen::MatrixXd lagrange_delta(const AffinityMatrix& a_new, const AffinityMatrix& a_old,
                               const std::vector<int>& s) {
    Eigen::MatrixXd u = build_normalized(a_new) - build_normalized(a_old);
    const int m = static_cast<int>(u.rows());
    std::vector<bool> in(m, false);
    for (int i : s) in[i] = true;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (in[i] || in[j]) continue;
            if (std::abs(u(i, j)) > 1e-12)
                throw std::logic_error("lagrange_delta: structural zero violated");
            u(i, j) = 0.0;
        }
    }
    return u;
}

int select_rank(const Eigen::VectorXd& eigenvalues_desc, double q, int m) {
    if (eigenvalues_desc.size() == 0) throw std::invalid_argument("select_rank: empty spectrum");
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("select_rank: q must be in (0, 1]");
    const Eigen::VectorXd sq = eigenvalues_desc.array().square();
    const double total = sq.sum();
    if (total <= 0.0) return 1;
    double run = 0.0;
    for (int l = 0; l < sq.size(); ++l) {
        run += sq(l);
        if (run >= q * total * (1.0 - 1e-12)) return std::min(l + 1, m);
    }
    return std::min<int>(static_cast<int>(sq.size()), m);
}

namespace {

// Append `cand` to the orthonormal basis if its out-of-basis part is
// nontrivial. Two projection passes keep the basis orthonormal to roundoff.
bool orthonormal_append(Eigen::MatrixXd& h, int& cols, const Eigen::VectorXd& cand) {
    Eigen::VectorXd v = cand;
    for (int pass = 0; pass < 2; ++pass)
        v -= h.leftCols(cols) * (h.leftCols(cols).transpose() * v);
    const double n = v.norm();
    if (n < 1e-10) return false;
    h.col(cols++) = v / n;
    return true;
}

void sign_fix(Eigen::MatrixXd& q) {
    for (int c = 0; c < q.cols(); ++c) {
        int imax = 0;
        double vmax = std::abs(q(0, c));
        for (int i = 1; i < q.rows(); ++i) {
            if (std::abs(q(i, c)) > vmax) {
                vmax = std::abs(q(i, c));
                imax = i;
            }
        }
        if (q(imax, c) < 0.0) q.col(c) = -q.col(c);
    }
}

EigenUpdate dense_decompose(const Eigen::MatrixXd& a) {
    const SpectralEmbedding full = top_k_eigen(a, static_cast<int>(a.rows()));
    EigenUpdate up;
    up.eigenvalues = full.eigenvalues;
    up.q = full.z;
    return up;
}

}  // namespace

EigenUpdate incremental_update(const Eigen::MatrixXd& q_l, const Eigen::VectorXd& omega_l,
                               const Eigen::MatrixXd& u, const std::vector<int>& s) {
    const int m = static_cast<int>(q_l.rows());
    const int l = static_cast<int>(q_l.cols());

    Eigen::MatrixXd h(m, std::min<int>(m, l + 2 * static_cast<int>(s.size())));
    h.leftCols(l) = q_l;
    int cols = l;
    for (int idx : s) {
        if (cols == h.cols()) break;
        orthonormal_append(h, cols, Eigen::VectorXd::Unit(m, idx));
    }
    for (int idx : s) {
        if (cols == h.cols()) break;
        orthonormal_append(h, cols, u.col(idx));
    }
    const auto basis = h.leftCols(cols);

    // Projected matrix of (Q_l Omega_l Q_l^T + U) onto the basis.
    const Eigen::MatrixXd g = basis.transpose() * q_l;                  // cols x l
    const Eigen::MatrixXd uh = u * basis;                               // m x cols
    Eigen::MatrixXd t = g * omega_l.asDiagonal() * g.transpose() + basis.transpose() * uh;
    t = 0.5 * (t + t.transpose()).eval();

    // The basis captures the range of the approximated matrix; a nontrivial
    // residual means the state degraded and we pay for an exact solve.
    const Eigen::MatrixXd ah = q_l * (omega_l.asDiagonal() * (q_l.transpose() * basis)) + uh;
    const double resid = (ah - basis * t).cwiseAbs().maxCoeff();
    if (resid > 1e-8) {
        EigenUpdate up = dense_decompose(q_l * omega_l.asDiagonal() * q_l.transpose() + u);
        up.fallback = true;
        return up;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success) throw std::runtime_error("incremental_update: eigensolver failed");
    EigenUpdate up;
    up.eigenvalues = es.eigenvalues().reverse();
    up.q = basis * es.eigenvectors().rowwise().reverse();
    sign_fix(up.q);
    return up;
}

SeqResult run_ia_seq_spec(StreamSet& streams, const SeqConfig& cfg, const IAConfig& ia) {
    if (cfg.c <= 0.0) throw std::invalid_argument("run_ia_seq_spec: C must be positive");
    const int m = streams.size();
    const int p = std::min(ia.p, m);
    if (p < 2) throw std::invalid_argument("run_ia_seq_spec: p must be >= 2");
    if (ia.r < 1) throw std::invalid_argument("run_ia_seq_spec: R must be >= 1");
    const long long exact_cost = static_cast<long long>(m) * m * m;
    const long max_t = cfg.effective_max_t();

    PairwiseDistanceState mmd(m, streams.dim(), KernelConfig{cfg.sigma_g, 1.0});
    IncrementalEigenState st;
    bool bootstrapped = false;
    SeqResult res;

    auto refresh_exact = [&](const AffinityMatrix& a_hat) {
        st.a_tilde = a_hat;
        st.l_prev = build_normalized(a_hat);
        const EigenUpdate full = dense_decompose(st.l_prev);
        st.q = full.q;
        st.omega = full.eigenvalues;
        st.steps_since_refresh = 0;
        st.op_count += exact_cost;
    };

    for (long t = 1; t <= max_t; ++t) {
        mmd.update(streams.draw());
        const AffinityMatrix a_hat = build_affinity(mmd.distances(), cfg.sigma_a);
        const std::uint64_t km_seed =
            derive_seed(cfg.seed, 0x6b6d73746570ULL, static_cast<std::uint64_t>(t));

        bool exact_step = !bootstrapped || st.steps_since_refresh + 1 >= ia.r;
        if (exact_step) {
            refresh_exact(a_hat);
            bootstrapped = true;
        } else {
            const Eigen::MatrixXd delta = a_hat.a - st.a_tilde.a;
            const std::vector<int> block = select_block(delta, p, ia.block_search);
            AffinityMatrix a_next = st.a_tilde;
            a_next.a += masked_delta(delta, block);
            const Eigen::MatrixXd u = lagrange_delta(a_next, st.a_tilde, block);

            int l = std::max(cfg.k, select_rank(st.omega, ia.q, m));
            l = std::min<int>(l, static_cast<int>(st.q.cols()));
            const EigenUpdate up = incremental_update(st.q.leftCols(l), st.omega.head(l), u, block);
            if (up.fallback) {
                st.op_count += exact_cost;
            } else {
                const long long lp = l + p;
                st.op_count += (static_cast<long long>(l) * l + static_cast<long long>(p) * p) * lp +
                               static_cast<long long>(m) * p * lp;
            }
            st.q = up.q;
            st.omega = up.eigenvalues;
            st.a_tilde = a_next;
            st.l_prev = build_normalized(a_next);
            ++st.steps_since_refresh;
        }

        SpecResult spec = cluster_from_z(st.q.leftCols(cfg.k), st.omega.head(cfg.k),
                                         cfg.k, km_seed);
        double gamma = spec.degenerate ? 0.0 : gamma_statistic(spec.embedding.y, spec.clustering);
        const double threshold = stopping_threshold(t, cfg.c, cfg.threshold);
        bool would_stop = !spec.degenerate && gamma >= threshold;

        // An approximate stop must be confirmed by the exact decomposition;
        // on failure the exact state replaces the approximate one.
        bool verified = exact_step;
        if (would_stop && !exact_step) {
            refresh_exact(a_hat);
            spec = cluster_from_z(st.q.leftCols(cfg.k), st.omega.head(cfg.k), cfg.k, km_seed);
            gamma = spec.degenerate ? 0.0 : gamma_statistic(spec.embedding.y, spec.clustering);
            would_stop = !spec.degenerate && gamma >= threshold;
            verified = true;
        }

        if (cfg.keep_trace) res.trace.push_back({t, gamma, threshold, verified});
        res.n = t;
        res.clustering = spec.clustering;
        res.eigen_ops = st.op_count;
        if (would_stop) {
            res.stop_verified_exact = verified;
            return res;
        }
    }

    res.stopped_by_cap = true;
    res.eigen_ops = st.op_count;
    return res;
}

}  // namespace seqspec
