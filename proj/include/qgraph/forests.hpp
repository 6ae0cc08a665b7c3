#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qgraph/graph.hpp"
#include "qgraph/transfer.hpp"

namespace qgraph {

// Thrown when a combinatorial enumeration would exceed its size guard.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// Spanning subgraph with |V| edges whose components are all unicyclic.
struct SaturatedForest {
    std::vector<int> edges;               // sorted edge indices
    int kappa = 0;                        // component count
    std::vector<CycleParity> parities;    // one per component

    // No component cycle has even length.
    bool odd() const {
        return std::none_of(parities.begin(), parities.end(),
                            [](CycleParity p) { return p == CycleParity::Even; });
    }
};

namespace detail {

inline double binomial_guard(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) {
        b = b * (n - k + i) / i;
        if (b > 1e18) return b;
    }
    return b;
}

}  // namespace detail

// All saturated forests, each as a sorted edge-index set, in lexicographic
// order. Enumerates complements of size |E|-|V|; guarded by
// C(|E|,|V|) <= 1e6.
inline std::vector<SaturatedForest> enumerate_saturated_forests(const MetricGraph& g) {
    const int E = g.edge_count();
    const int V = g.vertex_count();
    if (detail::binomial_guard(E, V) > 1e6)
        throw GuardError("saturated-forest enumeration guard exceeded: C(|E|,|V|) > 1e6");

    std::vector<SaturatedForest> forests;
    if (E < V) return forests;

    const int drop = E - V;
    std::vector<int> out(drop);
    for (int i = 0; i < drop; ++i) out[i] = i;

    std::vector<char> removed(E, 0);
    auto consider = [&]() {
        std::fill(removed.begin(), removed.end(), 0);
        for (int j : out) removed[j] = 1;
        std::vector<int> kept;
        kept.reserve(V);
        for (int j = 0; j < E; ++j)
            if (!removed[j]) kept.push_back(j);
        ComponentSummary summary = subgraph_components(g, kept);
        if (!summary.saturated()) return;
        SaturatedForest f;
        f.edges = std::move(kept);
        f.kappa = summary.component_count();
        for (const auto& c : summary.components) f.parities.push_back(c.parity);
        forests.push_back(std::move(f));
    };

    if (drop == 0) {
        consider();
    } else {
        while (true) {
            consider();
            int i = drop - 1;
            while (i >= 0 && out[i] == E - drop + i) --i;
            if (i < 0) break;
            ++out[i];
            for (int k = i + 1; k < drop; ++k) out[k] = out[k - 1] + 1;
        }
    }

    std::sort(forests.begin(), forests.end(),
              [](const SaturatedForest& a, const SaturatedForest& b) { return a.edges < b.edges; });
    return forests;
}

// Exact determinant of the square incidence submatrix picked out by the
// forest's edge columns, by fraction-free Bareiss elimination. Intermediate
// values are k x k minors of a 0/1/2 matrix, bounded by 2^|V|.
inline long long exact_incidence_determinant(const MetricGraph& g, const SaturatedForest& f) {
    const int n = g.vertex_count();
    if (static_cast<int>(f.edges.size()) != n)
        throw std::invalid_argument("forest must have exactly |V| edges");
    IntegerMatrix inc = incidence_matrix(g);
    std::vector<long long> a(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a[static_cast<std::size_t>(r) * n + c] = inc.at(r, f.edges[c]);

    long long sign = 1;
    long long denom = 1;
    for (int k = 0; k < n - 1; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r)
            if (a[static_cast<std::size_t>(r) * n + k] != 0) { pivot = r; break; }
        if (pivot < 0) return 0;
        if (pivot != k) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                          a[static_cast<std::size_t>(k) * n + c]);
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] =
                    (a[static_cast<std::size_t>(r) * n + c] * a[static_cast<std::size_t>(k) * n + k] -
                     a[static_cast<std::size_t>(r) * n + k] * a[static_cast<std::size_t>(k) * n + c]) /
                    denom;
            a[static_cast<std::size_t>(r) * n + k] = 0;
        }
        denom = a[static_cast<std::size_t>(k) * n + k];
    }
    return sign * a[static_cast<std::size_t>(n) * n - 1];
}

// Leading large-lambda approximation of the regular-form determinant:
// (-1)^|V| sum over odd saturated forests of 4^kappa prod_{e not in forest}
// sqrt(lambda) s_e(1). Only meaningful for lambda > 0.
inline double forest_expansion(const MetricGraph& g,
                               const std::vector<EdgePotential>& potentials,
                               double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("positive lambda required");
    if (potentials.size() != static_cast<std::size_t>(g.edge_count()))
        throw std::invalid_argument("need exactly one potential per edge");

    const double root = std::sqrt(lambda);
    std::vector<double> scaled_s(g.edge_count());
    for (int j = 0; j < g.edge_count(); ++j)
        scaled_s[j] = root * propagate(potentials[j], lambda).s1;

    double sum = 0.0;
    for (const SaturatedForest& f : enumerate_saturated_forests(g)) {
        if (!f.odd()) continue;
        double term = std::pow(4.0, f.kappa);
        std::size_t next = 0;
        for (int j = 0; j < g.edge_count(); ++j) {
            if (next < f.edges.size() && f.edges[next] == j) { ++next; continue; }
            term *= scaled_s[j];
        }
        sum += term;
    }
    return (g.vertex_count() % 2 == 0) ? sum : -sum;
}

// Bouquet specialization: -4 sum_i prod_{j != i} (sum over edges l of cycle j
// of sqrt(lambda) s_{jl}(1)). Potentials are given per cycle, one per edge.
inline double bouquet_expansion(const BouquetShape& shape,
                                const std::vector<std::vector<EdgePotential>>& potentials,
                                double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("positive lambda required");
    const int r = shape.cycle_count();
    if (static_cast<int>(potentials.size()) != r)
        throw std::invalid_argument("need one potential list per cycle");
    std::vector<double> cycle_sums(r, 0.0);
    for (int j = 0; j < r; ++j) {
        if (static_cast<int>(potentials[j].size()) != shape.cycle_lengths[j])
            throw std::invalid_argument("need exactly one potential per cycle edge");
        const double root = std::sqrt(lambda);
        for (const EdgePotential& q : potentials[j])
            cycle_sums[j] += root * propagate(q, lambda).s1;
    }
    double sum = 0.0;
    for (int i = 0; i < r; ++i) {
        double prod = 1.0;
        for (int j = 0; j < r; ++j)
            if (j != i) prod *= cycle_sums[j];
        sum += prod;
    }
    return -4.0 * sum;
}

// p(d) = sum_i prod_{j != i} (n_j d - Q_j) where n_j is the length of cycle j
// and Q_j its total potential integral. The large-k eigenvalue shifts within a
// cluster converge to the roots of p.
struct ShiftPolynomial {
    std::vector<double> coefficients;     // ascending degree, size = cycle count
    std::vector<int> cycle_lengths;
    std::vector<double> cycle_integrals;  // Q_j

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    double leading() const { return coefficients.back(); }

    double evaluate(double d) const {
        double v = 0.0;
        for (std::size_t i = coefficients.size(); i-- > 0;)
            v = v * d + coefficients[i];
        return v;
    }
};

inline ShiftPolynomial shift_polynomial(const BouquetShape& shape,
                                        const std::vector<std::vector<EdgePotential>>& potentials) {
    const int r = shape.cycle_count();
    if (static_cast<int>(potentials.size()) != r)
        throw std::invalid_argument("need one potential list per cycle");
    ShiftPolynomial p;
    p.cycle_lengths = shape.cycle_lengths;
    p.cycle_integrals.resize(r, 0.0);
    for (int j = 0; j < r; ++j) {
        if (static_cast<int>(potentials[j].size()) != shape.cycle_lengths[j])
            throw std::invalid_argument("need exactly one potential per cycle edge");
        for (const EdgePotential& q : potentials[j])
            p.cycle_integrals[j] += q.integral();
    }
    p.coefficients.assign(r, 0.0);
    for (int i = 0; i < r; ++i) {
        std::vector<double> prod{1.0};
        for (int j = 0; j < r; ++j) {
            if (j == i) continue;
            std::vector<double> next(prod.size() + 1, 0.0);
            for (std::size_t t = 0; t < prod.size(); ++t) {
                next[t] += prod[t] * (-p.cycle_integrals[j]);
                next[t + 1] += prod[t] * p.cycle_lengths[j];
            }
            prod = std::move(next);
        }
        for (std::size_t t = 0; t < prod.size(); ++t)
            p.coefficients[t] += prod[t];
    }
    return p;
}

// Tests whether p(d) is a pure monomial (all lower coefficients vanish
// relative to the leading one). h_j = Q_j / n_j are the per-cycle mean
// integrals, reported sorted ascending.
struct MonomialAnalysis {
    bool is_monomial = false;
    std::vector<double> h;
    double implied_total_integral = 0.0;   // sum of Q_j
    double leading_coefficient = 0.0;
};

inline MonomialAnalysis monomial_analysis(const ShiftPolynomial& p, double tol = 1e-9) {
    MonomialAnalysis a;
    a.leading_coefficient = p.leading();
    a.is_monomial = true;
    for (std::size_t i = 0; i + 1 < p.coefficients.size(); ++i)
        if (std::abs(p.coefficients[i]) > tol * std::abs(a.leading_coefficient))
            a.is_monomial = false;
    for (std::size_t j = 0; j < p.cycle_integrals.size(); ++j) {
        a.h.push_back(p.cycle_integrals[j] / p.cycle_lengths[j]);
        a.implied_total_integral += p.cycle_integrals[j];
    }
    std::sort(a.h.begin(), a.h.end());
    return a;
}

// Real parts of the companion-matrix eigenvalues, sorted ascending. The shift
// polynomial has only real roots (its factors interlace), so the imaginary
// parts are numerical noise.
inline std::vector<double> real_roots(const ShiftPolynomial& p) {
    const int deg = p.degree();
    if (deg <= 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i)
        companion(i, deg - 1) = -p.coefficients[i] / p.coefficients[deg];
    for (int i = 1; i < deg; ++i)
        companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
    std::vector<double> roots(deg);
    for (int i = 0; i < deg; ++i)
        roots[i] = solver.eigenvalues()(i).real();
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace qgraph
