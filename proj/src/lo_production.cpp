#include "ttqi/lo_production.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ttqi/errors.hpp"
#include "ttqi/roots.hpp"

namespace ttqi {

namespace {

constexpr double kFq = 1.0 / 18.0;
constexpr double kSingularGap = 1e-9;
constexpr int kRootScanPoints = 2048;
constexpr double kRootTol = 1e-9;

struct HelicityCoeffs {
    double a, crr, cnn, ckk, crk;
};

HelicityCoeffs coeffs(PartonChannel ch, double beta, double c, double s) {
    const double b2 = beta * beta;
    const double s2 = s * s;
    const double sin2t = 2.0 * s * c;
    const double rt = std::sqrt(std::max(0.0, 1.0 - b2));
    if (ch == PartonChannel::QQBAR) {
        return {kFq * (2.0 - b2 * s2), kFq * (2.0 - b2) * s2, -kFq * b2 * s2, kFq * (2.0 - (2.0 - b2) * s2),
                kFq * rt * sin2t};
    }
    const double bc2 = b2 * c * c;
    if (bc2 > 1.0 - kSingularGap)
        throw Error(ErrorKind::KinematicSingularity, "beta^2 cos^2(theta) too close to 1 for gg");
    const double fg = (7.0 + 9.0 * bc2) / (192.0 * (1.0 - bc2) * (1.0 - bc2));
    const double s4 = s2 * s2;
    const double b4 = b2 * b2;
    return {fg * (1.0 + 2.0 * b2 * s2 - b4 * (1.0 + s4)),
            -fg * (1.0 - b2 * (2.0 - b2) * (1.0 + s4)),
            -fg * (1.0 - 2.0 * b2 + b4 * (1.0 + s4)),
            -fg * (1.0 - 0.5 * b2 * sin2t * sin2t - b4 * (1.0 + s4)),
            fg * rt * b2 * sin2t * s2};
}

HelicityCoeffs normalized_coeffs(PartonChannel ch, double beta, double c) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    HelicityCoeffs h = coeffs(ch, beta, c, s);
    if (!(h.a > 0.0)) throw Error(ErrorKind::DegenerateNormalization, "A~ <= 0");
    return {1.0, h.crr / h.a, h.cnn / h.a, h.ckk / h.a, h.crk / h.a};
}

DiagEigs eigs_from(const HelicityCoeffs& h) {
    const double mean = 0.5 * (h.ckk + h.crr);
    const double half = 0.5 * (h.ckk - h.crr);
    const double rad = std::hypot(half, h.crk);
    return {mean + rad, h.cnn, mean - rad};
}

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw Error(ErrorKind::DomainError, "beta must lie in [0, 1)");
}

}  // namespace

const char* to_string(PartonChannel ch) { return ch == PartonChannel::QQBAR ? "qqbar" : "gg"; }

double beta_of_mass(double m_tt, double m_top) {
    if (!(m_top > 0.0)) throw Error(ErrorKind::DomainError, "m_top must be positive");
    if (m_tt < 2.0 * m_top) throw Error(ErrorKind::BelowThreshold, "m_tt below 2 m_top");
    const double r = 2.0 * m_top / m_tt;
    return std::sqrt((1.0 - r) * (1.0 + r));
}

double mass_of_beta(double beta, double m_top) {
    check_beta(beta);
    return 2.0 * m_top / std::sqrt((1.0 - beta) * (1.0 + beta));
}

Kinematics Kinematics::from_beta(double beta, double cos_theta, double m_top) {
    if (!(std::abs(cos_theta) <= 1.0)) throw Error(ErrorKind::DomainError, "cos_theta outside [-1, 1]");
    return Kinematics{m_top, mass_of_beta(beta, m_top), beta, cos_theta};
}

Kinematics Kinematics::from_mass(double m_tt, double cos_theta, double m_top) {
    if (!(std::abs(cos_theta) <= 1.0)) throw Error(ErrorKind::DomainError, "cos_theta outside [-1, 1]");
    const double beta = beta_of_mass(m_tt, m_top);
    if (!(beta < 1.0)) throw Error(ErrorKind::DomainError, "beta rounds to 1");
    return Kinematics{m_top, m_tt, beta, cos_theta};
}

double Kinematics::sin_theta() const { return std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta)); }

FanoState r_coeffs(PartonChannel ch, const Kinematics& kin) {
    check_beta(kin.beta);
    const HelicityCoeffs h = coeffs(ch, kin.beta, kin.cos_theta, kin.sin_theta());
    FanoState f;
    f.a = h.a;
    f.c(K, K) = h.ckk;
    f.c(R, R) = h.crr;
    f.c(N, N) = h.cnn;
    f.c(R, K) = f.c(K, R) = h.crk;
    return f;
}

FanoState pair_state(PartonChannel ch, const Kinematics& kin) { return r_coeffs(ch, kin).normalized(); }

DiagEigs diag_eigs(PartonChannel ch, const Kinematics& kin) {
    check_beta(kin.beta);
    return eigs_from(normalized_coeffs(ch, kin.beta, kin.cos_theta));
}

double delta_helicity(PartonChannel ch, double beta, double cos_theta) {
    check_beta(beta);
    const HelicityCoeffs h = normalized_coeffs(ch, beta, cos_theta);
    return 0.5 * (-h.cnn + std::abs(h.ckk + h.crr) - 1.0);
}

double chsh_margin_lo(PartonChannel ch, double beta, double cos_theta) {
    check_beta(beta);
    const DiagEigs e = eigs_from(normalized_coeffs(ch, beta, cos_theta));
    const double a = e.c_plus * e.c_plus, b = e.c_nn * e.c_nn, c = e.c_minus * e.c_minus;
    return a + b + c - std::min({a, b, c}) - 1.0;
}

BetaPair critical_beta_ph_gg(double theta) {
    if (!(theta > 0.0 && theta < M_PI)) throw Error(ErrorKind::DomainError, "theta must lie in (0, pi)");
    const double s = std::sin(theta);
    const double s2 = s * s;
    const double s4 = s2 * s2;
    return {std::sqrt((1.0 + s2 - std::sqrt(2.0) * s) / (1.0 + s4)), std::pow(1.0 + s4, -0.25)};
}

BetaPair critical_beta_ch(PartonChannel ch, double theta) {
    if (!(theta > 0.0 && theta < M_PI)) throw Error(ErrorKind::DomainError, "theta must lie in (0, pi)");
    if (ch == PartonChannel::QQBAR) return {0.0, 0.0};
    const double c = std::cos(theta);
    double beta_hi = 1.0 - 1e-12;
    if (std::abs(c) > 0.0) beta_hi = std::min(beta_hi, std::sqrt(1.0 - 2.0 * kSingularGap) / std::abs(c));
    auto mu = [&](double b) { return chsh_margin_lo(ch, b, c); };
    const std::vector<double> roots = scan_roots(mu, 0.0, beta_hi, kRootScanPoints, kRootTol);
    if (roots.size() < 2)
        throw Error(ErrorKind::NoRootInBracket, "CHSH margin has " + std::to_string(roots.size()) +
                                                    " sign changes at this angle");
    return {roots.front(), roots.back()};
}

double diff_xsec(PartonChannel ch, const Kinematics& kin, double alpha_s) {
    if (!(alpha_s > 0.0)) throw Error(ErrorKind::DomainError, "alpha_s must be positive");
    if (kin.m_tt < 2.0 * kin.m_top) throw Error(ErrorKind::BelowThreshold, "m_tt below 2 m_top");
    const FanoState r = r_coeffs(ch, kin);
    return alpha_s * alpha_s * kin.beta * r.a / (kin.m_tt * kin.m_tt);
}

HelicityFrame helicity_frame(const Vec3& k_hat, const Vec3& p_hat) {
    const double c = k_hat.dot(p_hat);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    if (s < 1e-6) throw Error(ErrorKind::CollinearDegeneracy, "top direction collinear with the beam");
    const Vec3 r = ((p_hat - c * k_hat) / s).normalized();
    const Vec3 n = r.cross(k_hat).normalized();
    return {k_hat, r, n};
}

}  // namespace ttqi
