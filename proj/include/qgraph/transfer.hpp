#pragma once

#include <cmath>
#include <stdexcept>

#include "qgraph/potential.hpp"

namespace qgraph {

// Endpoint data of the two fundamental solutions of -y'' + q y = lambda y on
// [0, 1]: c with c(0) = 1, c'(0) = 0 and s with s(0) = 0, s'(0) = 1.
struct TransferData {
    double c1;    // c(1)
    double c1p;   // c'(1)
    double s1;    // s(1)
    double s1p;   // s'(1)

    // Equals 1 for exact arithmetic, any q, any lambda.
    double wronskian() const { return c1 * s1p - c1p * s1; }
};

namespace detail {

// cos/sinc pair for one constant piece: C = cos(w h), S = sin(w h)/w with
// w = sqrt(z), valid for z of either sign (cosh/sinh for z < 0). The Taylor
// branch in u = z h^2 keeps full accuracy through the sign change.
inline void piece_cs(double z, double h, double& C, double& S) {
    const double u = z * h * h;
    if (std::abs(u) < 1e-8) {
        C = 1.0 + u * (-1.0 / 2 + u * (1.0 / 24 + u * (-1.0 / 720 + u / 40320)));
        S = h * (1.0 + u * (-1.0 / 6 + u * (1.0 / 120 + u * (-1.0 / 5040 + u / 362880))));
    } else if (z > 0.0) {
        const double w = std::sqrt(z);
        C = std::cos(w * h);
        S = std::sin(w * h) / w;
    } else {
        const double w = std::sqrt(-z);
        C = std::cosh(w * h);
        S = std::sinh(w * h) / w;
    }
}

}  // namespace detail

// Propagates (y, y') across the edge by multiplying the constant-piece
// transfer matrices [[C, S], [-z S, C]] left to right.
inline TransferData propagate(const EdgePotential& q, double lambda) {
    // Columns of the running transfer matrix: (c, c') and (s, s').
    double c = 1.0, cp = 0.0, s = 0.0, sp = 1.0;
    for (std::size_t i = 0; i < q.piece_count(); ++i) {
        const double z = lambda - q.values()[i];
        const double h = q.piece_length(i);
        double C, S;
        detail::piece_cs(z, h, C, S);
        const double nc = C * c + S * cp;
        const double ncp = -z * S * c + C * cp;
        const double ns = C * s + S * sp;
        const double nsp = -z * S * s + C * sp;
        c = nc; cp = ncp; s = ns; sp = nsp;
    }
    return {c, cp, s, sp};
}

// Closed form for q = 0 on a unit edge, used as an independent check of
// propagate(): c = cos(sqrt(lambda)), s = sin(sqrt(lambda))/sqrt(lambda),
// with the hyperbolic analogues for lambda < 0.
inline TransferData transfer_zero_oracle(double lambda) {
    if (std::abs(lambda) < 1e-8) {
        double C, S;
        detail::piece_cs(lambda, 1.0, C, S);
        return {C, -lambda * S, S, C};
    }
    if (lambda > 0.0) {
        const double w = std::sqrt(lambda);
        return {std::cos(w), -w * std::sin(w), std::sin(w) / w, std::cos(w)};
    }
    const double m = std::sqrt(-lambda);
    return {std::cosh(m), m * std::sinh(m), std::sinh(m) / m, std::cosh(m)};
}

// First-order large-lambda behavior near lambda = (2k+1)^2 pi^2 + d.
struct TransferPrediction {
    int k;
    double d;
    double lambda;
    double c_prime_scaled;  // c'(1) / sqrt(lambda)
    double s_prime;         // s'(1)
    double c;               // c(1)
    double s_scaled;        // sqrt(lambda) * s(1)
};

inline TransferPrediction asymptotic_predictions(const EdgePotential& q, int k, double d) {
    if (k < 0)
        throw std::invalid_argument("asymptotic predictions need k >= 0");
    const double n = 2.0 * k + 1.0;
    const double lambda = n * n * M_PI * M_PI + d;
    if (lambda <= 0.0)
        throw std::invalid_argument("asymptotic predictions need positive lambda");
    const double Q = q.integral();
    const double root = std::sqrt(lambda);
    TransferPrediction p;
    p.k = k;
    p.d = d;
    p.lambda = lambda;
    p.c_prime_scaled = (d - Q) / (2.0 * root);
    p.s_prime = -1.0;
    p.c = -1.0;
    p.s_scaled = (Q - d) / (2.0 * root);
    return p;
}

}  // namespace qgraph
