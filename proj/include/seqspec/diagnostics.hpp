#ifndef SEQSPEC_DIAGNOSTICS_HPP
#define SEQSPEC_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include "seqspec/spectral.hpp"

namespace seqspec {

// Measurable cluster-separation quantities of a problem instance, evaluated
// on its true affinity matrix.
struct InstanceDiagnostics {
    double delta_lb = 0.0;   // min_k h(D_k)^2 / 2
    double eps1 = 0.0;       // max cross-cluster normalized squared-affinity sum
    double eps2 = 0.0;       // max mixed leakage product
    double c_row = 0.0;      // max within-cluster degree ratio
    double d_h = 0.0;        // min inter-cluster spectral distance
    double d_l = 0.0;        // max intra-cluster spectral distance
    double beta = 0.0;       // min spectral gap among the top-K eigenvalues
    double stop_ratio = 1.0; // 1 / sin^2(d_h)
    bool conductance_exact = true;  // false when any cluster used sampled mode
};

// Conductance of one cluster: minimum over proper subsets of the cut weight
// over the smaller side's internal degree mass. Exhaustive up to cluster
// size 20; larger clusters are sampled (1e5 random proper subsets) and
// `exact` is set false. Singleton clusters are an error.
double conductance(const Eigen::MatrixXd& a, const std::vector<int>& cluster,
                   bool* exact = nullptr, std::uint64_t seed = 0);

// The assumption functionals (delta lower bound, eps1, eps2, C_row).
InstanceDiagnostics assumption_quantities(const Eigen::MatrixXd& a,
                                          const Clustering& truth,
                                          std::uint64_t seed = 0);

// Spectral separation: d_H, d_L, spectral gap beta, and the asymptotic
// stopping ratio 1/sin^2(d_H). Spectral-point distances are computed from
// the top-K eigenspace projector, so they are invariant to the basis chosen
// within repeated eigenvalues (near-ties at the K boundary widen the space).
void spectral_separation(const Eigen::MatrixXd& a, int k, const Clustering& truth,
                         InstanceDiagnostics& out);

// All of the above for an affinity matrix plus true clustering.
InstanceDiagnostics diagnose(const Eigen::MatrixXd& a, int k, const Clustering& truth,
                             std::uint64_t seed = 0);

}  // namespace seqspec

#endif  // SEQSPEC_DIAGNOSTICS_HPP
