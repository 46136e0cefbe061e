#include "seqspec/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "seqspec/baselines.hpp"
#include "seqspec/rng.hpp"

namespace seqspec {

namespace {

constexpr std::uint64_t kTrialTag = 0x747269616cULL;  // "trial"

std::string fmt_g17(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_g17(const std::string& s) {
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::seq_spec: return "seq-spec";
        case Method::ia_seq_spec: return "ia-seq-spec";
        case Method::fss_spec: return "fss-spec";
        case Method::seq_kmed: return "seq-kmed";
        case Method::seq_slink: return "seq-slink";
    }
    throw std::logic_error("unknown method");
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::seq_spec, Method::ia_seq_spec, Method::fss_spec,
                     Method::seq_kmed, Method::seq_slink})
        if (method_name(m) == name) return m;
    throw std::invalid_argument("unknown method: " + name);
}

bool partition_error(const Clustering& est, const Clustering& truth,
                     const std::vector<int>& free_set) {
    if (est.labels.size() != truth.labels.size())
        throw std::invalid_argument("partition_error: size mismatch");
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(truth.labels.size()); ++i)
        if (std::find(free_set.begin(), free_set.end(), i) == free_set.end())
            kept.push_back(i);
    for (std::size_t a = 0; a < kept.size(); ++a)
        for (std::size_t b = a + 1; b < kept.size(); ++b) {
            int i = kept[a], j = kept[b];
            bool same_est = est.labels[i] == est.labels[j];
            bool same_tru = truth.labels[i] == truth.labels[j];
            if (same_est != same_tru) return true;
        }
    return false;
}

SeqResult run_trial(const ProblemInstance& inst, const BenchConfig& cfg, double c,
                    std::uint64_t trial_seed) {
    StreamSet streams(inst, trial_seed);
    SeqConfig sc;
    sc.k = cfg.k > 0 ? cfg.k : inst.k;
    sc.c = c;
    sc.sigma_a = cfg.sigma_a;
    sc.sigma_g = cfg.sigma_g;
    sc.max_t = cfg.max_t;
    sc.seed = trial_seed;
    sc.threshold = cfg.threshold;
    sc.keep_trace = false;
    switch (cfg.method) {
        case Method::seq_spec:
            return run_seq_spec(streams, sc);
        case Method::ia_seq_spec:
            return run_ia_seq_spec(streams, sc, cfg.ia);
        case Method::fss_spec: {
            long t_fixed = static_cast<long>(std::lround(c));
            SeqResult res;
            res.clustering = run_fss_spec(streams, sc.k, t_fixed, sc.sigma_a,
                                          sc.sigma_g, trial_seed);
            res.n = t_fixed;
            long m = streams.size();
            res.eigen_ops = m * m * m;
            return res;
        }
        case Method::seq_kmed:
            return run_seq_kmed(streams, sc);
        case Method::seq_slink:
            return run_seq_slink(streams, sc);
    }
    throw std::logic_error("unknown method");
}

BenchSummary run_bench(const ProblemInstance& inst, const BenchConfig& cfg) {
    BenchSummary out;
    for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci) {
        double c = cfg.c_grid[ci];
        struct TrialOut {
            long n = 0;
            bool error = false;
            bool capped = false;
            double ops_per_step = 0.0;
        };
        std::vector<TrialOut> trials(static_cast<std::size_t>(cfg.trials));

        auto worker = [&](long lo, long hi) {
            for (long ti = lo; ti < hi; ++ti) {
                std::uint64_t seed = derive_seed(cfg.seed, kTrialTag,
                                                 ci * 1000003ULL + static_cast<std::uint64_t>(ti));
                SeqResult res = run_trial(inst, cfg, c, seed);
                TrialOut& o = trials[static_cast<std::size_t>(ti)];
                o.n = res.n;
                o.capped = res.stopped_by_cap;
                o.error = res.stopped_by_cap ||
                          partition_error(res.clustering, inst.true_clustering, inst.free_set);
                o.ops_per_step = res.n > 0
                                     ? static_cast<double>(res.eigen_ops) / static_cast<double>(res.n)
                                     : 0.0;
            }
        };

        int jobs = std::max(1, cfg.jobs);
        if (jobs == 1 || cfg.trials < 2) {
            worker(0, cfg.trials);
        } else {
            std::vector<std::thread> pool;
            long chunk = (cfg.trials + jobs - 1) / jobs;
            for (long lo = 0; lo < cfg.trials; lo += chunk)
                pool.emplace_back(worker, lo, std::min(lo + chunk, cfg.trials));
            for (auto& th : pool) th.join();
        }

        BenchRow row;
        row.c = c;
        row.trials = cfg.trials;
        double sum_n = 0.0, sum_ops = 0.0;
        for (const TrialOut& o : trials) {
            sum_n += static_cast<double>(o.n);
            sum_ops += o.ops_per_step;
            if (o.error) ++row.error_count;
            if (o.capped) ++row.capped_count;
        }
        row.mean_n = sum_n / static_cast<double>(cfg.trials);
        row.mean_eigen_ops = sum_ops / static_cast<double>(cfg.trials);
        double phat = static_cast<double>(row.error_count) / static_cast<double>(cfg.trials);
        if (row.error_count == 0) {
            row.ln_error_prob = -std::numeric_limits<double>::infinity();
            row.err_upper95 = 3.0 / static_cast<double>(cfg.trials);
        } else {
            row.ln_error_prob = std::log(phat);
            row.err_upper95 =
                phat + 1.96 * std::sqrt(phat * (1.0 - phat) / static_cast<double>(cfg.trials));
        }
        out.rows.push_back(row);
    }

    out.metadata["method"] = method_name(cfg.method);
    out.metadata["instance"] = inst.id;
    out.metadata["trials"] = std::to_string(cfg.trials);
    out.metadata["seed"] = std::to_string(cfg.seed);
    out.metadata["k"] = std::to_string(cfg.k > 0 ? cfg.k : inst.k);
    out.metadata["sigma_a"] = fmt_g17(cfg.sigma_a);
    out.metadata["sigma_g"] = fmt_g17(cfg.sigma_g);
    out.metadata["max_t"] = std::to_string(cfg.max_t);
    out.metadata["threshold"] =
        cfg.threshold == ThresholdForm::arcsin_form ? "arcsin" : "ratio";
    if (cfg.method == Method::ia_seq_spec) {
        out.metadata["p"] = std::to_string(cfg.ia.p);
        out.metadata["q"] = fmt_g17(cfg.ia.q);
        out.metadata["R"] = std::to_string(cfg.ia.r);
    }
    return out;
}

void emit_csv(const BenchSummary& summary, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    for (const auto& [key, val] : summary.metadata) f << "# " << key << " = " << val << "\n";
    f << "C,trials,mean_N,ln_error_prob,error_count,mean_eigen_ops,capped_count,err_upper95\n";
    for (const BenchRow& r : summary.rows) {
        f << fmt_g17(r.c) << ',' << r.trials << ',' << fmt_g17(r.mean_n) << ','
          << fmt_g17(r.ln_error_prob) << ',' << r.error_count << ','
          << fmt_g17(r.mean_eigen_ops) << ',' << r.capped_count << ','
          << fmt_g17(r.err_upper95) << "\n";
    }
}

void emit_json(const BenchSummary& summary, const std::string& path) {
    nlohmann::json j;
    j["metadata"] = summary.metadata;
    j["rows"] = nlohmann::json::array();
    for (const BenchRow& r : summary.rows) {
        nlohmann::json row;
        row["C"] = r.c;
        row["trials"] = r.trials;
        row["mean_N"] = r.mean_n;
        // JSON has no infinity; keep the string form used by the CSV.
        if (std::isinf(r.ln_error_prob))
            row["ln_error_prob"] = "-inf";
        else
            row["ln_error_prob"] = r.ln_error_prob;
        row["error_count"] = r.error_count;
        row["mean_eigen_ops"] = r.mean_eigen_ops;
        row["capped_count"] = r.capped_count;
        row["err_upper95"] = r.err_upper95;
        j["rows"].push_back(row);
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << j.dump(2) << "\n";
}

BenchSummary parse_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    BenchSummary out;
    std::string line;
    bool seen_header = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            std::string val = line.substr(eq + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t") + 1);
            };
            trim(key);
            trim(val);
            out.metadata[key] = val;
            continue;
        }
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) throw std::runtime_error("bad csv row: " + line);
        BenchRow r;
        r.c = parse_g17(cells[0]);
        r.trials = std::stol(cells[1]);
        r.mean_n = parse_g17(cells[2]);
        r.ln_error_prob = parse_g17(cells[3]);
        r.error_count = std::stol(cells[4]);
        r.mean_eigen_ops = parse_g17(cells[5]);
        r.capped_count = std::stol(cells[6]);
        r.err_upper95 = parse_g17(cells[7]);
        out.rows.push_back(r);
    }
    return out;
}

}  // namespace seqspec
