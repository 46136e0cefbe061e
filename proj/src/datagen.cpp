#include "seqspec/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "seqspec/rng.hpp"

namespace seqspec {

SampleStream::SampleStream(std::shared_ptr<const SamplerSpec> spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {}

Eigen::VectorXd SampleStream::next() {
    if (spec_->kind == SamplerSpec::Kind::gaussian) {
        std::normal_distribution<double> n(0.0, 1.0);
        const double sd = std::sqrt(spec_->sigma2);
        Eigen::VectorXd x = spec_->mean;
        for (int i = 0; i < x.size(); ++i) x(i) += sd * n(rng_);
        return x;
    }
    std::uniform_int_distribution<long> pick(0, spec_->pool.cols() - 1);
    return spec_->pool.col(pick(rng_));
}

StreamSet::StreamSet(const ProblemInstance& inst, std::uint64_t trial_seed)
    : dim_(inst.dim) {
    streams_.reserve(inst.m);
    for (int i = 0; i < inst.m; ++i) {
        auto spec = std::make_shared<SamplerSpec>(inst.dists[i]);
        streams_.emplace_back(std::move(spec),
                              derive_seed(trial_seed, 0x73747265616dULL, static_cast<std::uint64_t>(i)));
    }
}

Eigen::MatrixXd StreamSet::draw() {
    Eigen::MatrixXd out(dim_, size());
    for (int i = 0; i < size(); ++i) out.col(i) = streams_[i].next();
    return out;
}

ProblemInstance gen_circle_instance(double cov_scale, int inner, int outer) {
    ProblemInstance inst;
    inst.id = "circle";
    inst.m = inner + outer;
    inst.k = 2;
    inst.dim = 2;
    inst.has_true_distances = true;
    inst.true_clustering.k = 2;
    const double tau = 2.0 * std::numbers::pi;
    for (int i = 0; i < inner; ++i) {
        SamplerSpec s;
        s.mean = Eigen::Vector2d(std::cos(tau * i / inner), std::sin(tau * i / inner));
        s.sigma2 = cov_scale;
        inst.dists.push_back(std::move(s));
        inst.true_clustering.labels.push_back(0);
    }
    for (int i = 0; i < outer; ++i) {
        SamplerSpec s;
        s.mean = Eigen::Vector2d(2.0 * std::cos(tau * i / outer), 2.0 * std::sin(tau * i / outer));
        s.sigma2 = cov_scale;
        inst.dists.push_back(std::move(s));
        inst.true_clustering.labels.push_back(1);
    }
    return inst;
}

ProblemInstance gen_bridge_instance(double cov_scale) {
    // Scatter coordinates of the two 12-sequence clusters.
    static const double left[12][2] = {
        {-0.96218932, -0.10454969}, {-1.08261271, -0.48829348}, {-0.64005852, 0.22883317},
        {-1.06508457, 0.15476132},  {-0.94375787, -0.11076457}, {-0.80448651, -0.06211131},
        {-1.06576478, -0.15842935}, {-0.90900839, -0.01983961}, {-0.89094226, -0.12143714},
        {-0.97463443, -0.17845481}, {-0.83170701, 0.03760702},  {-0.9338858, 0.08210078}};
    static const double right[12][2] = {
        {0.7978485, 0.1566362},   {1.41134056, -0.3276885}, {0.65411771, -0.30096628},
        {1.16829178, 0.02574313}, {1.21566849, 0.14448617}, {1.04211436, 0.05680763},
        {0.9660479, 0.17369204},  {0.77405681, -0.08437177}, {1.04858777, 0.36028417},
        {0.84710718, -0.21581209}, {0.88734256, 0.19385444}, {0.9529989, 0.2648694}};

    ProblemInstance inst;
    inst.id = "bridge";
    inst.m = 30;
    inst.k = 2;
    inst.dim = 2;
    inst.has_true_distances = true;
    inst.true_clustering.k = 2;
    auto add = [&](double x, double y, int label) {
        SamplerSpec s;
        s.mean = Eigen::Vector2d(x, y);
        s.sigma2 = cov_scale;
        inst.dists.push_back(std::move(s));
        inst.true_clustering.labels.push_back(label);
    };
    for (const auto& p : left) add(p[0], p[1], 0);
    for (const auto& p : right) add(p[0], p[1], 1);
    // Bridge means on y = 0, x = -0.5 .. 0.5 step 0.2; assignment free.
    for (int i = 0; i < 6; ++i) {
        const double x = -0.5 + 0.2 * i;
        add(x, 0.0, x < 0.0 ? 0 : 1);
        inst.free_set.push_back(24 + i);
    }
    return inst;
}

ProblemInstance gen_two_block_instance(int per_cluster, double separation, double cov_scale) {
    ProblemInstance inst;
    inst.id = "two_block";
    inst.m = 2 * per_cluster;
    inst.k = 2;
    inst.dim = 2;
    inst.has_true_distances = true;
    inst.true_clustering.k = 2;
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < per_cluster; ++i) {
            SamplerSpec s;
            // Tight blobs of means around each block center.
            s.mean = Eigen::Vector2d(c == 0 ? 0.0 : separation, 0.05 * i);
            s.sigma2 = cov_scale;
            inst.dists.push_back(std::move(s));
            inst.true_clustering.labels.push_back(c);
        }
    }
    return inst;
}

ProblemInstance ingest_labeled(const std::string& path, int splits_per_label,
                               std::uint64_t seed) {
    if (splits_per_label < 1) throw std::invalid_argument("ingest_labeled: splits_per_label >= 1");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_labeled: cannot open " + path);

    std::map<std::string, std::vector<Eigen::VectorXd>> by_label;
    std::string line;
    int dim = -1;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        std::string label;
        if (!(ss >> label)) continue;  // blank line
        std::vector<double> feats;
        double v;
        while (ss >> v) feats.push_back(v);
        if (feats.empty()) {
            if (lineno == 1) continue;  // optional header
            throw std::runtime_error("ingest_labeled: malformed row " + std::to_string(lineno));
        }
        if (dim < 0) dim = static_cast<int>(feats.size());
        if (static_cast<int>(feats.size()) != dim)
            throw std::runtime_error("ingest_labeled: inconsistent dimension at row " +
                                     std::to_string(lineno));
        by_label[label].push_back(Eigen::Map<Eigen::VectorXd>(feats.data(), dim));
    }
    if (by_label.empty()) throw std::runtime_error("ingest_labeled: no data rows");

    ProblemInstance inst;
    inst.id = "labeled:" + path;
    inst.dim = dim;
    inst.k = static_cast<int>(by_label.size());
    inst.true_clustering.k = inst.k;

    int label_idx = 0;
    for (auto& [label, points] : by_label) {
        if (static_cast<int>(points.size()) < splits_per_label)
            throw std::runtime_error("ingest_labeled: label '" + label + "' has fewer points than splits");
        std::vector<int> order(points.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::mt19937_64 rng(derive_seed(seed, 0x706f6f6cULL, static_cast<std::uint64_t>(label_idx)));
        std::shuffle(order.begin(), order.end(), rng);
        for (int s = 0; s < splits_per_label; ++s) {
            // Even split; remainders go to the first pools.
            std::vector<int> idx;
            for (size_t i = s; i < order.size(); i += splits_per_label) idx.push_back(order[i]);
            SamplerSpec spec;
            spec.kind = SamplerSpec::Kind::empirical;
            spec.pool.resize(dim, idx.size());
            for (size_t i = 0; i < idx.size(); ++i) spec.pool.col(i) = points[idx[i]];
            inst.dists.push_back(std::move(spec));
            inst.true_clustering.labels.push_back(label_idx);
        }
        ++label_idx;
    }
    inst.m = static_cast<int>(inst.dists.size());
    return inst;
}

Eigen::MatrixXd true_distance_matrix(const ProblemInstance& inst, const KernelConfig& cfg) {
    if (!inst.has_true_distances)
        throw std::invalid_argument("true_distance_matrix: instance has no closed-form distances");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(inst.m, inst.m);
    for (int i = 0; i < inst.m; ++i) {
        for (int j = i + 1; j < inst.m; ++j) {
            if (inst.dists[i].sigma2 != inst.dists[j].sigma2)
                throw std::invalid_argument("true_distance_matrix: covariances differ");
            d(i, j) = d(j, i) = gaussian_mmd_closed_form(inst.dists[i].mean, inst.dists[j].mean,
                                                         inst.dists[i].sigma2, cfg);
        }
    }
    return d;
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
    nlohmann::json j;
    j["id"] = inst.id;
    j["M"] = inst.m;
    j["K"] = inst.k;
    j["dim"] = inst.dim;
    j["free_set"] = inst.free_set;
    j["true_labels"] = inst.true_clustering.labels;
    j["has_true_distances"] = inst.has_true_distances;
    nlohmann::json dists = nlohmann::json::array();
    for (const auto& s : inst.dists) {
        nlohmann::json js;
        js["kind"] = s.kind == SamplerSpec::Kind::gaussian ? "gaussian" : "empirical";
        if (s.kind == SamplerSpec::Kind::gaussian) {
            js["mean"] = std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size());
            js["sigma2"] = s.sigma2;
        } else {
            nlohmann::json pool = nlohmann::json::array();
            for (long c = 0; c < s.pool.cols(); ++c)
                pool.push_back(std::vector<double>(s.pool.col(c).data(),
                                                   s.pool.col(c).data() + s.pool.rows()));
            js["pool"] = std::move(pool);
        }
        dists.push_back(std::move(js));
    }
    j["dists"] = std::move(dists);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_instance: cannot open " + path);
    out << j.dump(2) << "\n";
}

ProblemInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_instance: cannot open " + path);
    nlohmann::json j;
    in >> j;
    ProblemInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.m = j.at("M").get<int>();
    inst.k = j.at("K").get<int>();
    inst.dim = j.at("dim").get<int>();
    inst.free_set = j.at("free_set").get<std::vector<int>>();
    inst.true_clustering.labels = j.at("true_labels").get<std::vector<int>>();
    inst.true_clustering.k = inst.k;
    inst.has_true_distances = j.at("has_true_distances").get<bool>();
    for (const auto& js : j.at("dists")) {
        SamplerSpec s;
        if (js.at("kind").get<std::string>() == "gaussian") {
            auto mean = js.at("mean").get<std::vector<double>>();
            s.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), mean.size());
            s.sigma2 = js.at("sigma2").get<double>();
        } else {
            s.kind = SamplerSpec::Kind::empirical;
            const auto& pool = js.at("pool");
            s.pool.resize(inst.dim, pool.size());
            for (size_t c = 0; c < pool.size(); ++c) {
                auto col = pool[c].get<std::vector<double>>();
                s.pool.col(c) = Eigen::Map<Eigen::VectorXd>(col.data(), col.size());
            }
        }
        inst.dists.push_back(std::move(s));
    }
    if (static_cast<int>(inst.dists.size()) != inst.m)
        throw std::runtime_error("load_instance: M does not match sampler count");
    return inst;
}

}  // namespace seqspec
