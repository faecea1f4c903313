#pragma once

#include "modheat/quadrature.hpp"
#include "modheat/rational.hpp"
#include "modheat/word_group.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace modheat {

/// Discrete eigenvalues of L^pr: lambda_eps = (5 - 2 eps)/4.
inline constexpr double kLambdaDiscretePlus = 0.75;    // eps = +1
inline constexpr double kLambdaDiscreteMinus = 1.75;   // eps = -1

inline void check_sign(int s, const char* who) {
    if (s != 1 && s != -1) throw std::invalid_argument(std::string(who) + ": sign must be +-1");
}

inline void check_angle(double x, const char* who) {
    if (!(x >= 0.0 && x <= M_PI)) {
        throw std::invalid_argument(std::string(who) + ": x must lie in [0, pi]");
    }
}

/// R_x = sqrt(25/16 + sqrt(2) cos x), strictly decreasing on [0, pi] and bounded
/// away from zero since 25/16 > sqrt(2).
inline double r_of(double x) {
    check_angle(x, "r_of");
    return std::sqrt(25.0 / 16.0 + std::sqrt(2.0) * std::cos(x));
}

/// Generalized eigenvalue lambda_{mu,x} = 7/8 - (mu/2) R_x.
inline double lambda_of(int mu, double x) {
    check_sign(mu, "lambda_of");
    return 7.0 / 8.0 - 0.5 * mu * r_of(x);
}

/// Bottom of the spectrum, lambda_0 = 7/8 - (1/2) sqrt(25/16 + sqrt 2).
inline double lambda0() { return 7.0 / 8.0 - 0.5 * std::sqrt(25.0 / 16.0 + std::sqrt(2.0)); }
/// Left endpoint of the upper band, lambda_1 = 7/8 + (1/2) sqrt(25/16 - sqrt 2).
inline double lambda1() { return 7.0 / 8.0 + 0.5 * std::sqrt(25.0 / 16.0 - std::sqrt(2.0)); }

/// Discrete eigenfunction f_eps(m) of norm 1, defined for m >= 0 by
///   f_eps(2n)   = (-1/sqrt6) (-eps sqrt2)^{-n}
///   f_eps(2n+1) = (1/(2 sqrt3)) (-eps sqrt2)^{-n}
/// and extended by the symmetry f_eps(-m-1) = eps f_eps(m).
inline double eval_discrete(int eps, std::int64_t m) {
    check_sign(eps, "eval_discrete");
    double sym = 1.0;
    if (m < 0) {
        m = -m - 1;
        sym = eps;
    }
    const std::int64_t n = m / 2;
    // (-eps sqrt2)^{-n} = (-eps)^n 2^{-n/2}
    const double base = ((n % 2 != 0) && eps == 1) ? -1.0 : 1.0;
    const double mag = std::exp2(-0.5 * static_cast<double>(n));
    const double head = (m % 2 == 0) ? -1.0 / std::sqrt(6.0) : 1.0 / (2.0 * std::sqrt(3.0));
    return sym * head * base * mag;
}

/// Exact value of sqrt(6) * f_eps(m) in Q[sqrt(2)] (note 1/(2 sqrt3) = (sqrt2/2)/sqrt6),
/// used to cross-check the floating evaluator.
inline Sqrt2Number eval_discrete_sqrt6(int eps, std::int64_t m) {
    check_sign(eps, "eval_discrete_sqrt6");
    Rational sym = 1;
    if (m < 0) {
        m = -m - 1;
        sym = eps;
    }
    const std::int64_t n = m / 2;
    // (-eps sqrt2)^{-n} exactly: rational for even n, rational * sqrt2 for odd n.
    const Rational sgn = ((n % 2 != 0) && eps == 1) ? -1 : 1;
    Sqrt2Number power;
    if (n % 2 == 0) {
        power = Sqrt2Number(sgn / Rational(Integer(1) << static_cast<unsigned>(n / 2)));
    } else {
        // 2^{-n/2} = 2^{-(n+1)/2} sqrt2
        power = Sqrt2Number(0, sgn / Rational(Integer(1) << static_cast<unsigned>((n + 1) / 2)));
    }
    const Sqrt2Number head = (m % 2 == 0) ? Sqrt2Number(Rational(-1))
                                          : Sqrt2Number(0, Rational(1, 2));
    return Sqrt2Number(sym) * head * power;
}

/// Generalized eigenfunction f_{x,mu,eps}(m), defined for m >= 0 by
///   f(2n)   = (1 + eps/4 - eps mu R_x) sin(nx) + (1/sqrt2) sin((n+1)x)
///   f(2n+1) = (mu R_x + 1/4 - eps) sin((n+1)x) - (eps/sqrt2) sin(nx)
/// and extended by f(-m-1) = eps f(m). Bounded, not square-summable.
inline double eval_generalized(double x, int mu, int eps, std::int64_t m) {
    check_angle(x, "eval_generalized");
    check_sign(mu, "eval_generalized");
    check_sign(eps, "eval_generalized");
    double sym = 1.0;
    if (m < 0) {
        m = -m - 1;
        sym = eps;
    }
    const double n = static_cast<double>(m / 2);
    const double rx = r_of(x);
    if (m % 2 == 0) {
        return sym * ((1.0 + 0.25 * eps - eps * mu * rx) * std::sin(n * x) +
                      std::sin((n + 1) * x) / std::sqrt(2.0));
    }
    return sym * ((mu * rx + 0.25 - eps) * std::sin((n + 1) * x) -
                  eps * std::sin(n * x) / std::sqrt(2.0));
}

/// Spectral weight H_eps(x) = 2 pi R_x (2 R_x - eps (2 + sqrt2 cos x)), the
/// norming constant of the generalized eigenfunctions; strictly positive.
inline double spectral_weight(int eps, double x) {
    check_sign(eps, "spectral_weight");
    check_angle(x, "spectral_weight");
    const double rx = r_of(x);
    return 2.0 * M_PI * rx * (2.0 * rx - eps * (2.0 + std::sqrt(2.0) * std::cos(x)));
}

/// sum_eps f_{x,mu,eps}(m) f_{x,mu,eps}(n) / H_{mu*eps}(x), the integrand of the
/// continuous part of the spectral measure for the branch mu.
inline double continuous_pair_sum(int mu, double x, std::int64_t m, std::int64_t n) {
    double acc = 0.0;
    for (int eps : {1, -1}) {
        acc += eval_generalized(x, mu, eps, m) * eval_generalized(x, mu, eps, n) /
               spectral_weight(mu * eps, x);
    }
    return acc;
}

struct SpectralValue {
    double value = 0.0;
    double quad_error = 0.0;
};

/// Completeness matrix entry
///   C(m,n) = sum_eps f_eps(m) f_eps(n)
///          + int_0^pi sum_{mu,eps} f_{x,mu,eps}(m) f_{x,mu,eps}(n) dx / H_{mu eps}(x),
/// which equals delta_{m,n}.
inline SpectralValue completeness_entry(std::int64_t m, std::int64_t n, double quad_tol) {
    auto integral = integrate_adaptive(
        [&](double x) {
            return continuous_pair_sum(1, x, m, n) + continuous_pair_sum(-1, x, m, n);
        },
        0.0, M_PI, quad_tol);
    double discrete = 0.0;
    for (int eps : {1, -1}) discrete += eval_discrete(eps, m) * eval_discrete(eps, n);
    return {integral.value + discrete, integral.error};
}

/// Heat kernel of the projected Laplacian, K^pr_t(n) = h^pr_t(0, n):
///   e^{-3t/4} f_1(0) f_1(n) + e^{-7t/4} f_{-1}(0) f_{-1}(n)
///   + int_0^pi e^{-t lambda_{+,s}} sum_eps f_{s,eps,+1}(0) f_{s,eps,+1}(n) ds / H_eps(s)
///   + int_0^pi e^{-t lambda_{-,s}} sum_eps f_{s,eps,-1}(0) f_{s,eps,-1}(n) ds / H_{-eps}(s).
inline SpectralValue kernel_pr(double t, std::int64_t n, double quad_tol) {
    if (t < 0) throw std::invalid_argument("kernel_pr: t must be >= 0");
    SpectralValue out;
    out.value = std::exp(-t * kLambdaDiscretePlus) * eval_discrete(1, 0) * eval_discrete(1, n) +
                std::exp(-t * kLambdaDiscreteMinus) * eval_discrete(-1, 0) * eval_discrete(-1, n);
    for (int mu : {1, -1}) {
        auto integral = integrate_adaptive(
            [&](double s) {
                return std::exp(-t * lambda_of(mu, s)) * continuous_pair_sum(mu, s, 0, n);
            },
            0.0, M_PI, quad_tol);
        out.value += integral.value;
        out.quad_error += integral.error;
    }
    return out;
}

}  // namespace modheat
