#pragma once

// Independent reference implementations used by the unit and acceptance tests.
// Nothing here calls into the library's algebra.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

namespace oracle {

using cd = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using V3 = Eigen::Vector3d;
using M3 = Eigen::Matrix3d;

inline const M2& pauli(int i) {
    static const M2 s[4] = {
        (M2() << 1, 0, 0, 1).finished(),
        (M2() << 0, 1, 1, 0).finished(),
        (M2() << 0, cd(0, -1), cd(0, 1), 0).finished(),
        (M2() << 1, 0, 0, -1).finished(),
    };
    return s[i];
}

inline M4 kron(const M2& a, const M2& b) {
    M4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return r;
}

/// (I + B+.s x I + B-.I x s + C_ij s_i x s_j) / 4 by explicit Kronecker products.
inline M4 density(const V3& bp, const V3& bm, const M3& c) {
    M4 rho = kron(pauli(0), pauli(0));
    for (int i = 0; i < 3; ++i) {
        rho += bp(i) * kron(pauli(i + 1), pauli(0));
        rho += bm(i) * kron(pauli(0), pauli(i + 1));
        for (int j = 0; j < 3; ++j) rho += c(i, j) * kron(pauli(i + 1), pauli(j + 1));
    }
    return rho / 4.0;
}

inline M3 correlations(const M4& rho) {
    M3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c(i, j) = (rho * kron(pauli(i + 1), pauli(j + 1))).trace().real();
    return c;
}

/// Wootters concurrence through the (non-Hermitian) spectrum of rho * rho_tilde.
inline double concurrence(const M4& rho) {
    const M4 yy = kron(pauli(2), pauli(2));
    const M4 tilde = yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<M4> es(rho * tilde);
    std::array<double, 4> l;
    for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

/// Smallest eigenvalue of the partial transpose, transposing qubit 2 by index swap.
inline double pt_min_eigenvalue(const M4& rho) {
    M4 pt;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) pt(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
    return Eigen::SelfAdjointEigenSolver<M4>(pt).eigenvalues()(0);
}

inline V3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    V3 v(g(rng), g(rng), g(rng));
    return v.normalized();
}

/// Mixture of k Haar-ish random pure states with Dirichlet-like weights.
inline M4 random_state(std::mt19937_64& rng, int k) {
    std::normal_distribution<double> g;
    std::exponential_distribution<double> e;
    M4 rho = M4::Zero();
    double wsum = 0.0;
    for (int n = 0; n < k; ++n) {
        Eigen::Vector4cd psi;
        for (int i = 0; i < 4; ++i) psi(i) = cd(g(rng), g(rng));
        psi.normalize();
        const double w = e(rng);
        rho += w * psi * psi.adjoint();
        wsum += w;
    }
    return rho / wsum;
}

/// CHSH maximum over unit vectors by alternating ascent from many starts:
/// max a1.C(b1 + b2) + a2.C(b1 - b2).
inline double chsh_bruteforce(const M3& c, std::mt19937_64& rng, int starts = 40, int sweeps = 200) {
    double best = 0.0;
    for (int s = 0; s < starts; ++s) {
        V3 b1 = random_unit(rng), b2 = random_unit(rng), a1, a2;
        double val = 0.0;
        for (int it = 0; it < sweeps; ++it) {
            const V3 u = c * (b1 + b2), w = c * (b1 - b2);
            a1 = u.norm() > 0 ? V3(u.normalized()) : random_unit(rng);
            a2 = w.norm() > 0 ? V3(w.normalized()) : random_unit(rng);
            const V3 p = c.transpose() * (a1 + a2), q = c.transpose() * (a1 - a2);
            b1 = p.norm() > 0 ? V3(p.normalized()) : random_unit(rng);
            b2 = q.norm() > 0 ? V3(q.normalized()) : random_unit(rng);
            const double nv = a1.dot(c * (b1 + b2)) + a2.dot(c * (b1 - b2));
            if (std::abs(nv - val) < 1e-14) {
                val = nv;
                break;
            }
            val = nv;
        }
        best = std::max(best, std::abs(val));
    }
    return best;
}

/// Plain adaptive Simpson, used where a quadrature oracle unrelated to the
/// library's Gauss-Kronrod code is wanted.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
    const std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const double flm = f(lm), frm = f(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
        };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

// Production coefficients typed in from the closed forms, (k, r, n) order.
struct LoCoeffs {
    double a, c_rr, c_nn, c_kk, c_rk;
};

inline LoCoeffs lo_qq(double beta, double cth) {
    const double fq = 1.0 / 18.0;
    const double s2 = 1.0 - cth * cth, s = std::sqrt(s2), b2 = beta * beta;
    return {fq * (2.0 - b2 * s2), fq * (2.0 - b2) * s2, -fq * b2 * s2, fq * (2.0 - (2.0 - b2) * s2),
            fq * std::sqrt(1.0 - b2) * 2.0 * s * cth};
}

inline LoCoeffs lo_gg(double beta, double cth) {
    const double s2 = 1.0 - cth * cth, s = std::sqrt(s2), b2 = beta * beta, b4 = b2 * b2, s4 = s2 * s2;
    const double fg = (7.0 + 9.0 * b2 * cth * cth) / (192.0 * std::pow(1.0 - b2 * cth * cth, 2));
    const double sin2t = 2.0 * s * cth;
    return {fg * (1.0 + 2.0 * b2 * s2 - b4 * (1.0 + s4)), -fg * (1.0 - b2 * (2.0 - b2) * (1.0 + s4)),
            -fg * (1.0 - 2.0 * b2 + b4 * (1.0 + s4)), -fg * (1.0 - b2 * sin2t * sin2t / 2.0 - b4 * (1.0 + s4)),
            fg * std::sqrt(1.0 - b2) * b2 * sin2t * s2};
}

}  // namespace oracle
