#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "qgraph/characteristic.hpp"

namespace qgraph {

struct ScanOptions {
    // Grid step in t = sign(lambda) sqrt(|lambda|); uniform in t so the
    // lambda resolution tracks the eigenvalue spacing.
    double step_t = 0.05;
    // A refined minimum is an eigenvalue when sigma_min <= accept_tol * max(1, sigma_max).
    double accept_tol = 1e-8;
    // Multiplicity counts singular values <= nullspace_tol * max(sigma_max, 1).
    double nullspace_tol = 1e-7;
    // Refinement stops when the bracket width is <= refine_tol * max(1, |lambda|).
    double refine_tol = 1e-10;
    // Refined minima closer than merge_factor * refine_tol * max(1, |lambda|) merge.
    double merge_factor = 10.0;
    // 0 reads QGRAPH_THREADS (default 1).
    int threads = 0;
};

struct SpectrumReport {
    struct Line {
        double lambda;
        int multiplicity;
    };
    std::vector<Line> eigenvalues;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
};

namespace detail {

inline double sign_sqrt(double lambda) {
    return lambda >= 0.0 ? std::sqrt(lambda) : -std::sqrt(-lambda);
}

inline double sign_square(double t) { return t >= 0.0 ? t * t : -t * t; }

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QGRAPH_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && n >= 1 && n <= 256) return static_cast<int>(n);
    }
    return 1;
}

struct SigmaProbe {
    double smin = 0.0;
    double smax = 0.0;
    int nullity = 0;
};

inline SigmaProbe probe(const MetricGraph& g, const std::vector<EdgePotential>& pots,
                        double lambda, double nullspace_tol) {
    const CharacteristicMatrix cm = assemble_regular(g, pots, lambda);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.m);
    const auto& s = svd.singularValues();
    SigmaProbe p;
    p.smax = s(0);
    p.smin = s(s.size() - 1);
    const double threshold = nullspace_tol * std::max(p.smax, 1.0);
    for (int i = 0; i < s.size(); ++i)
        if (s(i) <= threshold) ++p.nullity;
    return p;
}

inline double sigma_min(const MetricGraph& g, const std::vector<EdgePotential>& pots,
                        double lambda) {
    return smallest_singular_value(assemble_regular(g, pots, lambda));
}

// Golden-section minimization of sigma_min over [a, b] in lambda.
inline double golden_refine(const MetricGraph& g, const std::vector<EdgePotential>& pots,
                            double a, double b, double refine_tol) {
    constexpr double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = sigma_min(g, pots, c);
    double fd = sigma_min(g, pots, d);
    while (b - a > refine_tol * std::max(1.0, std::abs(0.5 * (a + b)))) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = sigma_min(g, pots, c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = sigma_min(g, pots, d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Locates eigenvalues in [lambda_lo, lambda_hi]: evaluates sigma_min of the
// regular characteristic matrix on a uniform t-grid, golden-section refines
// every local minimum, keeps the minima where the matrix is numerically
// singular. Deterministic for fixed inputs regardless of thread count.
inline SpectrumReport scan_spectrum(const MetricGraph& g,
                                    const std::vector<EdgePotential>& pots,
                                    double lambda_lo, double lambda_hi,
                                    const ScanOptions& opts = {}) {
    if (!(lambda_lo < lambda_hi))
        throw std::invalid_argument("scan range must satisfy lambda_lo < lambda_hi");
    if (pots.size() != static_cast<std::size_t>(g.edge_count()))
        throw std::invalid_argument("need exactly one potential per edge");

    const double t_lo = detail::sign_sqrt(lambda_lo);
    const double t_hi = detail::sign_sqrt(lambda_hi);
    const int n = std::max(2, static_cast<int>(std::ceil((t_hi - t_lo) / opts.step_t)));
    std::vector<double> lambdas(n + 1);
    for (int i = 0; i <= n; ++i)
        lambdas[i] = detail::sign_square(t_lo + (t_hi - t_lo) * i / n);
    lambdas.front() = lambda_lo;
    lambdas.back() = lambda_hi;

    std::vector<double> sig(n + 1);
    const int threads = std::min(detail::resolve_threads(opts.threads), n + 1);
    if (threads <= 1) {
        for (int i = 0; i <= n; ++i)
            sig[i] = detail::sigma_min(g, pots, lambdas[i]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w]() {
                for (int i = w; i <= n; i += threads)
                    sig[i] = detail::sigma_min(g, pots, lambdas[i]);
            });
        }
        for (auto& th : pool) th.join();
    }

    SpectrumReport report;
    report.lambda_lo = lambda_lo;
    report.lambda_hi = lambda_hi;

    for (int i = 0; i <= n; ++i) {
        const bool left_ok = (i == 0) ? (sig[i] < sig[i + 1]) : (sig[i] <= sig[i - 1]);
        const bool right_ok = (i == n) ? (sig[i] < sig[i - 1]) : (sig[i] <= sig[i + 1]);
        if (!left_ok || !right_ok) continue;

        const double a = lambdas[std::max(0, i - 1)];
        const double b = lambdas[std::min(n, i + 1)];
        const double star = detail::golden_refine(g, pots, a, b, opts.refine_tol);
        const detail::SigmaProbe p = detail::probe(g, pots, star, opts.nullspace_tol);
        if (p.smin > opts.accept_tol * std::max(1.0, p.smax)) continue;
        if (p.nullity < 1) continue;

        if (!report.eigenvalues.empty()) {
            const double prev = report.eigenvalues.back().lambda;
            const double gap = opts.merge_factor * opts.refine_tol * std::max(1.0, std::abs(star));
            if (star - prev < gap) {
                const double mid = 0.5 * (prev + star);
                const detail::SigmaProbe pm = detail::probe(g, pots, mid, opts.nullspace_tol);
                if (pm.nullity >= 1)
                    report.eigenvalues.back() = {mid, pm.nullity};
                continue;
            }
        }
        report.eigenvalues.push_back({star, p.nullity});
    }
    return report;
}

// Refines a user-supplied bracket that is known to contain a sigma_min dip.
// Returns the eigenvalue and its multiplicity.
inline std::pair<double, int> refine_eigenvalue(const MetricGraph& g,
                                                const std::vector<EdgePotential>& pots,
                                                std::pair<double, double> bracket,
                                                const ScanOptions& opts = {}) {
    if (!(bracket.first < bracket.second))
        throw std::invalid_argument("bracket must satisfy lo < hi");
    if (pots.size() != static_cast<std::size_t>(g.edge_count()))
        throw std::invalid_argument("need exactly one potential per edge");
    const double star = detail::golden_refine(g, pots, bracket.first, bracket.second,
                                              opts.refine_tol);
    const detail::SigmaProbe p = detail::probe(g, pots, star, opts.nullspace_tol);
    if (p.smin > opts.accept_tol * std::max(1.0, p.smax) || p.nullity < 1)
        throw std::runtime_error("no eigenvalue in bracket");
    return {star, p.nullity};
}

// Smallest eigenvalue. The search window is guaranteed by the form bound
// min q <= lambda_min and the constant-test-function bound
// lambda_min <= (integral of q over the graph) / |E|.
inline double smallest_eigenvalue(const MetricGraph& g,
                                  const std::vector<EdgePotential>& pots,
                                  const ScanOptions& opts = {}) {
    if (pots.size() != static_cast<std::size_t>(g.edge_count()))
        throw std::invalid_argument("need exactly one potential per edge");
    double lo = pots.front().min_value();
    double mean = 0.0;
    for (const EdgePotential& q : pots) {
        lo = std::min(lo, q.min_value());
        mean += q.integral();
    }
    mean /= static_cast<double>(g.edge_count());

    ScanOptions fine = opts;
    fine.step_t = std::min(opts.step_t, 0.01);
    const SpectrumReport report = scan_spectrum(g, pots, lo - 1.0, mean + 0.5, fine);
    if (report.eigenvalues.empty())
        throw std::runtime_error("no eigenvalue found in search range");
    return report.eigenvalues.front().lambda;
}

// Eigenvalues attributed to the high-energy cluster around (2k+1)^2 pi^2.
struct ClusterRecord {
    int k = 0;
    double center = 0.0;
    struct Member {
        double lambda;
        int multiplicity;
        double shift;   // lambda - center
    };
    std::vector<Member> members;
    int total_multiplicity = 0;
};

struct ClusterOptions {
    // Cluster membership: |lambda - center| <= window. Cluster shifts stay
    // bounded while foreign eigenvalue branches recede linearly in k, so a
    // fixed lambda half-width separates them for every k.
    double window = 3.0;
    // Lambda resolution of the fine scan used by scan_cluster.
    double resolution = 0.01;
};

inline double cluster_center(int k) {
    const double n = 2.0 * k + 1.0;
    return n * n * M_PI * M_PI;
}

// Groups the eigenvalues of an existing report into clusters k_lo..k_hi.
// The report must cover every requested window.
inline std::vector<ClusterRecord> cluster_analysis(const SpectrumReport& report,
                                                   int k_lo, int k_hi,
                                                   const ClusterOptions& copts = {}) {
    if (k_lo < 0 || k_hi < k_lo)
        throw std::invalid_argument("cluster range must satisfy 0 <= k_lo <= k_hi");
    std::vector<ClusterRecord> records;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double center = cluster_center(k);
        if (report.lambda_lo > center - copts.window || report.lambda_hi < center + copts.window)
            throw std::runtime_error("report range insufficient");
        ClusterRecord rec;
        rec.k = k;
        rec.center = center;
        for (const auto& line : report.eigenvalues) {
            if (std::abs(line.lambda - center) > copts.window) continue;
            rec.members.push_back({line.lambda, line.multiplicity, line.lambda - center});
            rec.total_multiplicity += line.multiplicity;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

// Fine scan of one cluster window, resolving members ~resolution apart.
inline SpectrumReport scan_cluster(const MetricGraph& g,
                                   const std::vector<EdgePotential>& pots,
                                   int k, const ClusterOptions& copts = {},
                                   const ScanOptions& opts = {}) {
    if (k < 0)
        throw std::invalid_argument("cluster index must be >= 0");
    const double center = cluster_center(k);
    ScanOptions fine = opts;
    fine.step_t = std::min(opts.step_t, copts.resolution / (2.0 * std::sqrt(center)));
    return scan_spectrum(g, pots, center - copts.window, center + copts.window, fine);
}

inline ClusterRecord cluster_record(const MetricGraph& g,
                                    const std::vector<EdgePotential>& pots,
                                    int k, const ClusterOptions& copts = {},
                                    const ScanOptions& opts = {}) {
    return cluster_analysis(scan_cluster(g, pots, k, copts, opts), k, k, copts).front();
}

}  // namespace qgraph
