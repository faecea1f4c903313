#pragma once

#include "modheat/errors.hpp"
#include "modheat/line_spectral.hpp"
#include "modheat/psl2.hpp"
#include "modheat/weighted_graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace modheat {

/// Cayley graph of PSL2(F_p) with the paper's edge weights: the order-two
/// generator a contributes a double edge (weight 2), b and b^2 single edges.
/// Every vertex has degree 4 and the graph is connected.
inline WeightedGraph build_cayley(std::uint32_t p, std::size_t vertex_budget = 2'000'000) {
    const auto elements = enumerate_psl(p, vertex_budget);
    WeightedGraph g;
    for (const auto& x : elements) g.add_vertex(x.str());
    const PslElement a = PslElement::generator_a(p);
    const PslElement b = PslElement::generator_b(p);
    const PslElement b2 = b * b;
    for (const auto& x : elements) {
        const std::size_t u = g.vertex(x.str());
        g.set_weight(u, g.vertex((x * a).str()), Rational(2));
        g.set_weight(u, g.vertex((x * b).str()), Rational(1));
        g.set_weight(u, g.vertex((x * b2).str()), Rational(1));
    }
    return g;
}

struct JacobiResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns aligned with eigenvalues
    int sweeps = 0;
    double off_norm = 0.0;  // final off-diagonal Frobenius norm
};

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, iterated
/// until the off-diagonal Frobenius norm drops below tol. Deterministic given
/// tol. Throws on non-symmetric input (beyond 1e-14 relative) and on failure
/// to converge within the sweep cap.
inline JacobiResult symmetric_eigenvalues(Eigen::MatrixXd a, double tol, int max_sweeps = 60) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
        throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric");
    }
    if (!(tol > 0)) throw std::invalid_argument("symmetric_eigenvalues: tol must be > 0");

    JacobiResult out;
    out.eigenvectors = Eigen::MatrixXd::Identity(n, n);

    auto off_norm = [&]() {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) acc += a(i, j) * a(i, j);
        }
        return std::sqrt(2.0 * acc);
    };

    double off = off_norm();
    int sweep = 0;
    while (off >= tol) {
        if (sweep++ >= max_sweeps) {
            throw NumericError("symmetric_eigenvalues: no convergence after " +
                               std::to_string(max_sweeps) + " sweeps (off-norm " +
                               std::to_string(off) + ")");
        }
        // Threshold strategy: within a sweep, rotate only pairs that still
        // matter at the current off-norm level.
        const double threshold = off / (static_cast<double>(n) * 4.0);
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= threshold * 1e-3) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J^T A J on rows/columns p, q (in place, no temporaries).
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    double& vp = out.eigenvectors(k, p);
                    double& vq = out.eigenvectors(k, q);
                    const double tp = vp, tq = vq;
                    vp = c * tp - s * tq;
                    vq = s * tp + c * tq;
                }
            }
        }
        off = off_norm();
    }
    out.sweeps = sweep;
    out.off_norm = off;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
    out.eigenvalues.resize(n);
    Eigen::MatrixXd sorted_vectors(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
        sorted_vectors.col(k) = out.eigenvectors.col(order[static_cast<std::size_t>(k)]);
    }
    out.eigenvectors = std::move(sorted_vectors);
    return out;
}

struct FiniteSpectrum {
    std::uint32_t p = 0;
    std::vector<double> eigenvalues;  // ascending, length |PSL2(F_p)|
    double gap = 0.0;       // smallest eigenvalue above the zero threshold
    double residual = 0.0;  // max_i ||A v_i - lambda_i v_i||_2
    int zero_multiplicity = 0;
};

/// Full normalized-Laplacian spectrum of the Cayley graph of PSL2(F_p),
/// with a residual certificate from the accumulated rotations.
inline FiniteSpectrum spectrum_of(std::uint32_t p, double zero_threshold = 1e-8,
                                  double jacobi_tol = 1e-9,
                                  std::size_t vertex_budget = 2'000'000) {
    const WeightedGraph g = build_cayley(p, vertex_budget);
    const Eigen::MatrixXd lap = g.normalized_laplacian();
    JacobiResult jac = symmetric_eigenvalues(lap, jacobi_tol);

    FiniteSpectrum out;
    out.p = p;
    out.eigenvalues.assign(jac.eigenvalues.data(), jac.eigenvalues.data() + jac.eigenvalues.size());

    const Eigen::MatrixXd resid =
        lap * jac.eigenvectors - jac.eigenvectors * jac.eigenvalues.asDiagonal();
    out.residual = resid.colwise().norm().maxCoeff();

    for (double lambda : out.eigenvalues) {
        if (lambda <= zero_threshold) {
            ++out.zero_multiplicity;
        } else {
            out.gap = lambda;
            break;
        }
    }
    return out;
}

struct ConjectureRow {
    std::uint32_t p = 0;
    std::int64_t order = 0;
    double gap = 0.0;
    double gap_minus_lambda0 = 0.0;
    bool contains_three_quarters = false;
    bool contains_seven_quarters = false;
    double residual = 0.0;
    bool conjecture_holds = false;  // gap >= lambda0
};

inline bool spectrum_contains(const std::vector<double>& sorted_eigenvalues, double value,
                              double tol) {
    auto it = std::lower_bound(sorted_eigenvalues.begin(), sorted_eigenvalues.end(), value - tol);
    return it != sorted_eigenvalues.end() && *it <= value + tol;
}

/// One row per prime: spectral gap against the conjectured bound lambda_0,
/// membership of 3/4 and 7/4, and the eigensolver residual.
inline std::vector<ConjectureRow> conjecture_report(const std::vector<std::uint32_t>& primes,
                                                    double zero_threshold = 1e-8,
                                                    double membership_tol = 1e-6,
                                                    std::size_t vertex_budget = 2'000'000) {
    std::vector<ConjectureRow> rows;
    const double l0 = lambda0();
    for (std::uint32_t p : primes) {
        FiniteSpectrum spec = spectrum_of(p, zero_threshold, 1e-9, vertex_budget);
        ConjectureRow row;
        row.p = p;
        row.order = static_cast<std::int64_t>(spec.eigenvalues.size());
        row.gap = spec.gap;
        row.gap_minus_lambda0 = spec.gap - l0;
        row.contains_three_quarters = spectrum_contains(spec.eigenvalues, 0.75, membership_tol);
        row.contains_seven_quarters = spectrum_contains(spec.eigenvalues, 1.75, membership_tol);
        row.residual = spec.residual;
        row.conjecture_holds = spec.gap >= l0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace modheat
