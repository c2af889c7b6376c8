#pragma once

#include <Eigen/Core>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "ttqi/errors.hpp"

namespace ttqi {

struct QuadratureOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-30;
    int max_subdivisions = 2000;
};

template <class V>
struct QuadratureResult {
    V value;
    double error;
    int intervals;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }

template <class Derived>
double magnitude(const Eigen::ArrayBase<Derived>& v) {
    return v.abs().maxCoeff();
}

template <class V>
V zero_like(const V& v) {
    if constexpr (std::is_arithmetic_v<V>) {
        return V(0);
    } else {
        return V::Zero(v.size());
    }
}

template <class V>
struct Panel {
    double a, b;
    V value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class V, class F>
Panel<V> gk15(F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const V f0 = f(c);
    V kron = wk[0] * f0;
    V gauss = wg[0] * f0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const V fs = f(c - h * xk[i]) + f(c + h * xk[i]);
        kron += wk[i] * fs;
        if (i % 2 == 0) gauss += wg[i / 2] * fs;
    }
    kron *= h;
    gauss *= h;
    return Panel<V>{a, b, kron, magnitude(V(kron - gauss))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) integration.  V is double or an
/// Eigen array; vector errors use the max-norm.  Throws QuadratureFailure when
/// the tolerance is not met within the subdivision budget.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {})
    -> QuadratureResult<std::decay_t<decltype(f(a))>> {
    using V = std::decay_t<decltype(f(a))>;
    std::priority_queue<detail::Panel<V>> heap;
    detail::Panel<V> first = detail::gk15<V>(f, a, b);
    V total = first.value;
    double err = first.error;
    heap.push(first);
    int n = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) {
        if (n >= opt.max_subdivisions)
            throw Error(ErrorKind::QuadratureFailure, "tolerance not reached after " + std::to_string(n) +
                                                          " subdivisions (error " + std::to_string(err) + ")");
        detail::Panel<V> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Panel<V> left = detail::gk15<V>(f, worst.a, mid);
        detail::Panel<V> right = detail::gk15<V>(f, mid, worst.b);
        total += V(left.value + right.value - worst.value);
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    // Re-sum to shed the drift of the running updates.
    V sum = detail::zero_like(total);
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    return {sum, esum, n};
}

/// 64-node Gauss-Legendre rule on [-1, 1] as (node, weight) pairs.
inline const std::vector<std::array<double, 2>>& gauss_legendre_64() {
    static const std::vector<std::array<double, 2>> rule = [] {
        using G = boost::math::quadrature::gauss<double, 64>;
        std::vector<std::array<double, 2>> r;
        for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
            r.push_back({-G::abscissa()[i], G::weights()[i]});
            r.push_back({G::abscissa()[i], G::weights()[i]});
        }
        return r;
    }();
    return rule;
}

}  // namespace ttqi
