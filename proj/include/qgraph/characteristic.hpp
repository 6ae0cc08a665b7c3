#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qgraph/graph.hpp"
#include "qgraph/transfer.hpp"

namespace qgraph {

enum class MatrixForm { Regular, Scaled };

// (|V|+|E|) x (|V|+|E|) characteristic matrix of the vertex conditions.
// Unknowns: one value coefficient per vertex, one scaled derivative
// coefficient per edge. Rows: one current-balance row per vertex, one
// far-end continuity row per edge. lambda is an eigenvalue exactly when the
// matrix is singular.
struct CharacteristicMatrix {
    Eigen::MatrixXd m;
    MatrixForm form = MatrixForm::Regular;
    int vertex_count = 0;
    int edge_count = 0;
    double lambda = 0.0;
};

namespace detail {

// Accumulation handles loops (both endpoint contributions land in one cell,
// giving c-1 and s'-1 diagonals) and parallel edges (entries add up).
inline CharacteristicMatrix assemble(const MetricGraph& g,
                                     const std::vector<EdgePotential>& potentials,
                                     double lambda, MatrixForm form) {
    if (potentials.size() != static_cast<std::size_t>(g.edge_count()))
        throw std::invalid_argument("need exactly one potential per edge");
    const int V = g.vertex_count();
    const int E = g.edge_count();
    const double root = (form == MatrixForm::Scaled) ? std::sqrt(lambda) : 1.0;

    CharacteristicMatrix cm;
    cm.m = Eigen::MatrixXd::Zero(V + E, V + E);
    cm.form = form;
    cm.vertex_count = V;
    cm.edge_count = E;
    cm.lambda = lambda;

    for (int j = 0; j < E; ++j) {
        const TransferData t = propagate(potentials[j], lambda);
        const int u = g.edge(j).tail;
        const int v = g.edge(j).head;
        // Balance rows (scaled form divides them by sqrt(lambda)).
        cm.m(v, u) += t.c1p / root;
        cm.m(v, V + j) += t.s1p;
        cm.m(u, V + j) -= 1.0;
        // Far-end continuity rows (scaled form multiplies s by sqrt(lambda)).
        cm.m(V + j, u) += t.c1;
        cm.m(V + j, v) -= 1.0;
        cm.m(V + j, V + j) += root * t.s1;
    }
    return cm;
}

}  // namespace detail

// Real-entire form: well defined for every real lambda.
inline CharacteristicMatrix assemble_regular(const MetricGraph& g,
                                             const std::vector<EdgePotential>& potentials,
                                             double lambda) {
    return detail::assemble(g, potentials, lambda, MatrixForm::Regular);
}

// Scaled form: balance rows divided by sqrt(lambda), edge diagonal carries
// sqrt(lambda) s(1). Its determinant differs from the regular form by the
// factor lambda^((|E|-|V|)/2); only defined for lambda > 0.
inline CharacteristicMatrix assemble_scaled(const MetricGraph& g,
                                            const std::vector<EdgePotential>& potentials,
                                            double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("positive lambda required");
    return detail::assemble(g, potentials, lambda, MatrixForm::Scaled);
}

// Determinant via partial-pivot LU in long double; deterministic and stable
// for the well-scaled matrices assembled above.
inline double determinant(const CharacteristicMatrix& cm) {
    const int n = static_cast<int>(cm.m.rows());
    std::vector<long double> a(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a[static_cast<std::size_t>(r) * n + c] = static_cast<long double>(cm.m(r, c));

    long double det = 1.0L;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        long double best = std::fabs(a[static_cast<std::size_t>(k) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const long double cand = std::fabs(a[static_cast<std::size_t>(r) * n + k]);
            if (cand > best) { best = cand; pivot = r; }
        }
        if (best == 0.0L) return 0.0;
        if (pivot != k) {
            for (int c = k; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                          a[static_cast<std::size_t>(k) * n + c]);
            det = -det;
        }
        const long double p = a[static_cast<std::size_t>(k) * n + k];
        det *= p;
        for (int r = k + 1; r < n; ++r) {
            const long double f = a[static_cast<std::size_t>(r) * n + k] / p;
            if (f == 0.0L) continue;
            for (int c = k + 1; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(k) * n + c];
        }
    }
    return static_cast<double>(det);
}

struct SingularExtremes {
    double smallest = 0.0;
    double largest = 0.0;
};

inline SingularExtremes singular_extremes(const CharacteristicMatrix& cm) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.m);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

inline double smallest_singular_value(const CharacteristicMatrix& cm) {
    return singular_extremes(cm).smallest;
}

// Nullspace vector split into its vertex-value and edge-derivative parts.
struct CoefficientVector {
    std::vector<double> vertex_coefficients;
    std::vector<double> edge_coefficients;
};

struct NullspaceResult {
    int dimension = 0;
    std::vector<CoefficientVector> basis;
};

// Dimension counts singular values below tol * max(sigma_max, 1); the floor
// keeps the count meaningful when the whole matrix vanishes at an eigenvalue.
// Basis vectors are unit norm with the first significant component positive.
inline NullspaceResult nullspace(const CharacteristicMatrix& cm, double tol = 1e-7) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const int n = static_cast<int>(s.size());
    const double threshold = tol * std::max(s(0), 1.0);

    NullspaceResult result;
    for (int i = 0; i < n; ++i)
        if (s(i) <= threshold) ++result.dimension;

    for (int i = n - result.dimension; i < n; ++i) {
        Eigen::VectorXd v = svd.matrixV().col(i);
        for (int r = 0; r < n; ++r) {
            if (std::abs(v(r)) > 1e-9) {
                if (v(r) < 0.0) v = -v;
                break;
            }
        }
        CoefficientVector cv;
        cv.vertex_coefficients.assign(v.data(), v.data() + cm.vertex_count);
        cv.edge_coefficients.assign(v.data() + cm.vertex_count, v.data() + n);
        result.basis.push_back(std::move(cv));
    }
    return result;
}

}  // namespace qgraph
