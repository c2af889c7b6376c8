#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ttqi/errors.hpp"

namespace ttqi {

/// Bisection on a sign-changing bracket [lo, hi] down to |hi - lo| <= tol.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw Error(ErrorKind::NoRootInBracket, "no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// All sign changes of f on an n-interval uniform scan of [lo, hi], each refined
/// by bisection.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int n,
                                      double tol) {
    std::vector<double> roots;
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i <= n; ++i) {
        const double x1 = lo + (hi - lo) * i / n;
        const double f1 = f(x1);
        if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(bisect(f, x0, x1, tol));
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

}  // namespace ttqi
