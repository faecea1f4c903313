#pragma once

#include "modheat/errors.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace modheat {

/// Gauss--Legendre nodes and weights on [-1, 1], computed once per order by
/// Newton iteration on the Legendre recurrence.
class GaussLegendre {
public:
    explicit GaussLegendre(int order) : nodes_(order), weights_(order) {
        if (order < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
        const int n = order;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[static_cast<std::size_t>(i)] = -x;  // ascending order
            nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
            weights_[static_cast<std::size_t>(i)] = w;
            weights_[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // difference of the last two panel refinements
    int panels = 0;
    bool converged = false;

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        error += o.error;
        panels = std::max(panels, o.panels);
        converged = converged && o.converged;
        return *this;
    }
};

namespace detail {

template <class F>
double composite_gauss(F&& f, double a, double b, int panels, const GaussLegendre& rule) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
            acc += rule.weights()[i] * f(mid + 0.5 * h * rule.nodes()[i]);
        }
        total += 0.5 * h * acc;
    }
    return total;
}

}  // namespace detail

/// Composite Gauss--Legendre with panel doubling: refines until two successive
/// refinements differ by less than tol (plus a roundoff floor) and reports the
/// last difference as the error estimate. Panel order is fixed left-to-right,
/// so the result is deterministic.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double tol, int initial_panels = 4,
                                    int max_doublings = 14, int nodes_per_panel = 16) {
    if (!(tol > 0)) throw std::invalid_argument("integrate_adaptive: tol must be > 0");
    static thread_local std::map<int, GaussLegendre> cache;
    auto it = cache.find(nodes_per_panel);
    if (it == cache.end()) {
        it = cache.emplace(nodes_per_panel, GaussLegendre(nodes_per_panel)).first;
    }
    const GaussLegendre* rule = &it->second;

    QuadratureResult out;
    int panels = initial_panels;
    double prev = detail::composite_gauss(f, a, b, panels, *rule);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        const double cur = detail::composite_gauss(f, a, b, panels, *rule);
        const double diff = std::abs(cur - prev);
        const double floor = 8.0 * 1e-16 * std::max(1.0, std::abs(cur));
        out.value = cur;
        out.error = diff;
        out.panels = panels;
        if (diff <= std::max(tol, floor)) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    throw NumericError("integrate_adaptive: no convergence after " +
                       std::to_string(out.panels) + " panels (last diff " +
                       std::to_string(out.error) + ")");
}

}  // namespace modheat
