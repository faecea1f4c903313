#pragma once

#include "modheat/rational.hpp"
#include "modheat/weighted_graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modheat {

/// Weights of the infinite line L_infty covered by the Cayley graph. For n >= 0:
///   w(2n, 2n) = 0,   w(2n+1, 2n+1) = 2^{n+1},
///   w(2n-1, 2n) = w(2n, 2n+1) = 2^{n+1},
/// and everything else follows from the mirror symmetry w(i,j) = w(-i-1,-j-1).
inline std::int64_t line_weight(std::int64_t i, std::int64_t j) {
    if (i > j) std::swap(i, j);
    if (j == i) {
        const std::int64_t m = i >= 0 ? i : -i - 1;  // mirror to the nonnegative side
        if (m % 2 == 0) return 0;                    // no loops at even positions
        return std::int64_t{1} << ((m + 1) / 2);     // w(2n+1, 2n+1) = 2^{n+1}
    }
    if (j != i + 1) return 0;
    const std::int64_t lo = i >= -1 ? i : -i - 2;  // mirror pair (i, i+1) -> (-i-2, -i-1)
    return std::int64_t{1} << (ceil_half(lo) + 1);
}

/// Degree of vertex m on the infinite line: 2^{n+2} at m = 2n, 2^{n+3} at m = 2n+1
/// for n >= 0, mirrored for m < 0.
inline std::int64_t line_degree(std::int64_t m) {
    const std::int64_t mm = m >= 0 ? m : -m - 1;
    const std::int64_t n = mm / 2;
    return std::int64_t{1} << (mm % 2 == 0 ? n + 2 : n + 3);
}

/// The window [n_min, n_max] of L_infty as a weighted graph (labels are the
/// decimal indices). Truncated edges are simply absent, so boundary degrees are
/// smaller than on the infinite line; consumers that need infinite-line degrees
/// pass line_window_degrees as an override.
inline WeightedGraph line_window_graph(std::int64_t n_min, std::int64_t n_max) {
    if (n_min > 0 || n_max < 0) throw std::invalid_argument("line window must contain 0");
    WeightedGraph g;
    for (std::int64_t m = n_min; m <= n_max; ++m) g.add_vertex(std::to_string(m));
    for (std::int64_t m = n_min; m <= n_max; ++m) {
        const std::size_t u = static_cast<std::size_t>(m - n_min);
        if (std::int64_t w = line_weight(m, m); w > 0) g.set_weight(u, u, Rational(w));
        if (m < n_max) {
            g.set_weight(u, u + 1, Rational(line_weight(m, m + 1)));
        }
    }
    return g;
}

/// Infinite-line degrees for the window, aligned with line_window_graph's order.
inline std::vector<double> line_window_degrees(std::int64_t n_min, std::int64_t n_max) {
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (std::int64_t m = n_min; m <= n_max; ++m) {
        d.push_back(static_cast<double>(line_degree(m)));
    }
    return d;
}

/// Entry L^pr(i, j) of the projected normalized Laplacian, exact in Q[sqrt(2)].
/// Nonzero pattern: diagonal 1 (even side) or 3/4 (odd side), off-diagonal -1/2
/// on (2n-1, 2n) pairs and -1/(2 sqrt 2) on (2n, 2n+1) pairs, mirrored.
inline Sqrt2Number projected_laplacian_entry_exact(std::int64_t i, std::int64_t j) {
    if (i > j) std::swap(i, j);
    if (i == j) {
        const std::int64_t m = i >= 0 ? i : -i - 1;
        return m % 2 == 0 ? Sqrt2Number(Rational(1)) : Sqrt2Number(Rational(3, 4));
    }
    if (j != i + 1) return Sqrt2Number{};
    const std::int64_t lo = i >= -1 ? i : -i - 2;
    if (((lo % 2) + 2) % 2 == 1) return Sqrt2Number(Rational(-1, 2));  // (2n-1, 2n)
    return Sqrt2Number(0, Rational(-1, 4));  // (2n, 2n+1): -1/(2 sqrt 2) = -sqrt(2)/4
}

inline double projected_laplacian_entry(std::int64_t i, std::int64_t j) {
    return projected_laplacian_entry_exact(i, j).value();
}

/// Stencil application of L^pr at m, following the two parity branches and
/// their mirror images; f is any callable on integer indices.
template <class F>
double apply_projected_laplacian(F&& f, std::int64_t m) {
    static const double inv2sqrt2 = 1.0 / (2.0 * std::sqrt(2.0));
    if (m >= 0) {
        if (m % 2 == 0) return f(m) - 0.5 * f(m - 1) - inv2sqrt2 * f(m + 1);
        return 0.75 * f(m) - inv2sqrt2 * f(m - 1) - 0.5 * f(m + 1);
    }
    const std::int64_t mm = -m - 1;  // mirror index, >= 0
    if (mm % 2 == 0) return f(m) - 0.5 * f(m + 1) - inv2sqrt2 * f(m - 1);
    return 0.75 * f(m) - inv2sqrt2 * f(m + 1) - 0.5 * f(m - 1);
}

/// Bounds-checked stencil on a window vector indexed from n_min.
inline double apply_projected_laplacian(std::span<const double> window, std::int64_t n_min,
                                        std::int64_t m) {
    const std::int64_t n_max = n_min + static_cast<std::int64_t>(window.size()) - 1;
    if (m - 1 < n_min || m + 1 > n_max) {
        throw std::out_of_range("projected Laplacian stencil leaves the window");
    }
    return apply_projected_laplacian(
        [&](std::int64_t i) { return window[static_cast<std::size_t>(i - n_min)]; }, m);
}

/// Dense matrix of L^pr restricted to the window, assembled from the closed-form
/// entries (infinite-line normalization, Dirichlet truncation at the ends).
inline Eigen::MatrixXd window_matrix(std::int64_t n_min, std::int64_t n_max) {
    if (n_min > 0 || n_max < 0) throw std::invalid_argument("line window must contain 0");
    const Eigen::Index n = static_cast<Eigen::Index>(n_max - n_min + 1);
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (std::int64_t i = n_min; i <= n_max; ++i) {
        const Eigen::Index r = static_cast<Eigen::Index>(i - n_min);
        l(r, r) = projected_laplacian_entry(i, i);
        if (i < n_max) {
            l(r, r + 1) = projected_laplacian_entry(i, i + 1);
            l(r + 1, r) = l(r, r + 1);
        }
    }
    return l;
}

}  // namespace modheat
