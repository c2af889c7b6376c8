#include "ttqi/angular.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "ttqi/errors.hpp"
#include "ttqi/quadrature.hpp"
#include "ttqi/roots.hpp"

namespace ttqi {

namespace {

constexpr double kSeriesBelow = 1e-2;
constexpr double kRootTol = 1e-9;

// atanh(beta) / beta
double ratio_l(double beta) {
    const double b = beta * beta;
    if (beta >= kSeriesBelow) return std::atanh(beta) / beta;
    double sum = 0.0, p = 1.0;
    for (int k = 0; k <= 6; ++k, p *= b) sum += p / (2 * k + 1);
    return sum;
}

// (atanh(beta) / beta - 1) / beta^2
double ratio_l1(double beta) {
    const double b = beta * beta;
    if (beta >= kSeriesBelow) return (std::atanh(beta) / beta - 1.0) / b;
    double sum = 0.0, p = 1.0;
    for (int k = 1; k <= 7; ++k, p *= b) sum += p / (2 * k + 1);
    return sum;
}

// f(beta) / beta^4 with f = (1 - sqrt(1 - beta^2))^2 / 2, written without cancellation.
double f_over_b4(double beta) {
    const double q = 1.0 + std::sqrt((1.0 - beta) * (1.0 + beta));
    return 0.5 / (q * q);
}

double f_of(double beta) {
    const double b = beta * beta;
    return b * b * f_over_b4(beta);
}

double g_of(double beta) {
    const double b = beta * beta;
    double bracket;
    if (beta >= kSeriesBelow) {
        const double l = ratio_l(beta);
        bracket = 49.0 - 149.0 / 3.0 * b + 24.0 / 5.0 * b * b - (49.0 - 66.0 * b + 17.0 * b * b) * l;
    } else {
        // The O(1..b^2) terms cancel exactly against the atanh series.
        bracket = 0.0;
        double p = b * b * b;
        for (int k = 3; k <= 10; ++k, p *= b)
            bracket -= (49.0 / (2 * k + 1) - 66.0 / (2 * k - 1) + 17.0 / (2 * k - 3)) * p;
    }
    return f_over_b4(beta) / 96.0 * bracket;
}

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw Error(ErrorKind::DomainError, "beta must lie in [0, 1)");
}

// Gauss-Legendre nodes in cos(theta) with weights for (1/2) int dcos.  Above
// beta = 0.1 the nodes are placed in v with cos = tanh(v atanh(beta)) / beta,
// which turns the forward gg peak (1 - beta^2 cos^2)^-2 into a smooth cosh^2.
std::vector<std::array<double, 2>> angular_nodes(double beta) {
    std::vector<std::array<double, 2>> out;
    const auto& rule = gauss_legendre_64();
    out.reserve(rule.size());
    if (beta < 0.1) {
        for (const auto& [x, w] : rule) out.push_back({x, 0.5 * w});
        return out;
    }
    const double lam = std::atanh(beta);
    for (const auto& [v, w] : rule) {
        const double t = std::tanh(v * lam);
        out.push_back({t / beta, 0.5 * w * lam * (1.0 - t * t) / beta});
    }
    return out;
}

}  // namespace

AngularAveraged AngularAveraged::normalized() const {
    if (!(a_tilde > 0.0)) throw Error(ErrorKind::DegenerateNormalization, "averaged A~ <= 0");
    return {1.0, c_perp / a_tilde, c_z / a_tilde, c_rr / a_tilde, c_nn / a_tilde, c_kk / a_tilde};
}

FanoState AngularAveraged::beam_state() const {
    const AngularAveraged n = normalized();
    Mat3 c = Mat3::Zero();
    c(0, 0) = c(1, 1) = n.c_perp;
    c(2, 2) = n.c_z;
    return FanoState::unpolarized(c);
}

FanoState AngularAveraged::helicity_state() const {
    const AngularAveraged n = normalized();
    Mat3 c = Mat3::Zero();
    c(K, K) = n.c_kk;
    c(R, R) = n.c_rr;
    c(N, N) = n.c_nn;
    return FanoState::unpolarized(c);
}

AngularAveraged& AngularAveraged::operator+=(const AngularAveraged& o) {
    a_tilde += o.a_tilde;
    c_perp += o.c_perp;
    c_z += o.c_z;
    c_rr += o.c_rr;
    c_nn += o.c_nn;
    c_kk += o.c_kk;
    return *this;
}

AngularAveraged AngularAveraged::operator*(double s) const {
    return {a_tilde * s, c_perp * s, c_z * s, c_rr * s, c_nn * s, c_kk * s};
}

AngularAveraged angular_avg(PartonChannel ch, double beta) {
    check_beta(beta);
    const double b = beta * beta;
    if (ch == PartonChannel::QQBAR) {
        const double f = f_of(beta);
        return {(1.0 - b / 3.0) / 9.0,  2.0 / 135.0 * f,         (1.0 - b / 3.0 - 4.0 / 15.0 * f) / 9.0,
                (2.0 - b) / 27.0,       -b / 27.0,               (1.0 + b) / 27.0};
    }
    const double l = ratio_l(beta);
    const double l1 = ratio_l1(beta);
    const double g = g_of(beta);
    const double b2 = b * b;
    AngularAveraged r;
    r.a_tilde = (-59.0 + 31.0 * b + (66.0 - 36.0 * b + 2.0 * b2) * l) / 192.0;
    r.c_perp = (1.0 - b) / 192.0 * (9.0 - 16.0 * l) + g;
    r.c_z = (-109.0 + 49.0 * b + (102.0 - 72.0 * b + 2.0 * b2) * l) / 192.0 - 2.0 * g;
    r.c_rr = -(87.0 - 31.0 * b + 66.0 * l1 - (102.0 - 38.0 * b + 2.0 * b2) * l) / 192.0;
    r.c_nn = -(41.0 - 31.0 * b - (34.0 - 36.0 * b + 2.0 * b2) * l) / 192.0;
    r.c_kk = -(-37.0 + 31.0 * b - 66.0 * l1 + (66.0 - 34.0 * b + 2.0 * b2) * l) / 192.0;
    return r;
}

AngularAveraged angular_avg_numeric(PartonChannel ch, double beta) {
    check_beta(beta);
    AngularAveraged sum;
    for (const auto& [c, w] : angular_nodes(beta)) {
        const FanoState r = r_coeffs(ch, Kinematics::from_beta(beta, c));
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double cz = c * c * r.c(K, K) + s * s * r.c(R, R) + 2.0 * s * c * r.c(K, R);
        const double tr = r.c.trace();
        sum += AngularAveraged{r.a, 0.5 * (tr - cz), cz, r.c(R, R), r.c(N, N), r.c(K, K)} * w;
    }
    return sum;
}

double knm(int n, int m, double x) {
    if (n < 0 || m < 0) throw Error(ErrorKind::DomainError, "K_{n,m} needs n, m >= 0");
    if (!(x >= 0.0 && x < 1.0)) throw Error(ErrorKind::DomainError, "K_{n,m}(x) needs 0 <= x < 1");
    // Column n = 0 first, then K_{n,m} = K_{n-1,m} - K_{n-1,m-1}.
    std::vector<double> col(m + 1);
    col[0] = 2.0 * x;
    if (m >= 1) col[1] = 2.0 * std::atanh(x);
    const double u = 1.0 - x * x;
    for (int j = 2; j <= m; ++j) col[j] = (x / std::pow(u, j - 1) + 0.5 * (2 * j - 3) * col[j - 1]) / (j - 1);
    for (int i = 1; i <= n; ++i) {
        std::vector<double> next(m + 1);
        next[0] = 2.0 * std::pow(x, 2 * i + 1) / (2 * i + 1);
        for (int j = 1; j <= m; ++j) next[j] = col[j] - col[j - 1];
        col.swap(next);
    }
    return col[m];
}

PointChsh point_chsh(PartonChannel ch, double beta, double cos_theta) {
    const FanoState r = r_coeffs(ch, Kinematics::from_beta(beta, cos_theta));
    return {r.a, chsh_value(r.c / r.a)};
}

double mixture_chsh(double beta, double w_gg) {
    check_beta(beta);
    if (!(w_gg >= 0.0 && w_gg <= 1.0)) throw Error(ErrorKind::DomainError, "w_gg must lie in [0, 1]");
    const double w_qq = 1.0 - w_gg;
    double sum = 0.0;
    for (const auto& [c, w] : angular_nodes(beta)) {
        Mat3 corr = Mat3::Zero();
        if (w_qq > 0.0) {
            const FanoState q = r_coeffs(PartonChannel::QQBAR, Kinematics::from_beta(beta, c));
            corr += w_qq * q.c / q.a;
        }
        if (w_gg > 0.0) {
            const FanoState g = r_coeffs(PartonChannel::GG, Kinematics::from_beta(beta, c));
            corr += w_gg * g.c / g.a;
        }
        sum += w * chsh_value(corr);
    }
    return sum;
}

double chsh_angular_avg(PartonChannel ch, double beta) {
    return mixture_chsh(beta, ch == PartonChannel::GG ? 1.0 : 0.0);
}

double delta_omega(PartonChannel ch, double beta) {
    const AngularAveraged n = angular_avg(ch, beta).normalized();
    return axial_delta(n.c_perp, n.c_z);
}

double mu_omega(PartonChannel ch, double beta) {
    const AngularAveraged n = angular_avg(ch, beta).normalized();
    const double p2 = n.c_perp * n.c_perp;
    return std::max(2.0 * p2, p2 + n.c_z * n.c_z) - 1.0;
}

AxialCriticals axial_criticals_gg(double m_top) {
    auto first_root = [](auto f, const char* what) {
        const std::vector<double> r = scan_roots(f, 0.0, 0.99, 2048, kRootTol);
        if (r.empty()) throw Error(ErrorKind::NoRootInBracket, what);
        return r.front();
    };
    const double b_ph = first_root([](double b) { return delta_omega(PartonChannel::GG, b); }, "delta_omega(gg)");
    const double b_ch = first_root([](double b) { return mu_omega(PartonChannel::GG, b); }, "mu_omega(gg)");
    return {b_ph, mass_of_beta(b_ph, m_top), b_ch, mass_of_beta(b_ch, m_top)};
}

double gg_cperp_crossover() {
    auto cperp = [](double b) { return angular_avg(PartonChannel::GG, b).c_perp; };
    const std::vector<double> r = scan_roots(cperp, 0.5, 0.9999, 2048, kRootTol);
    if (r.empty()) throw Error(ErrorKind::NoRootInBracket, "C_perp(gg) keeps its sign");
    return r.front();
}

}  // namespace ttqi
