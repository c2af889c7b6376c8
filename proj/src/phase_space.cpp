#include "ttqi/phase_space.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "ttqi/errors.hpp"
#include "ttqi/roots.hpp"

namespace ttqi {

namespace {

constexpr double kGeV2ToPb = 0.3893793721e9;
constexpr double kEmptyCut = 1e-30;

using Vec6 = Eigen::Array<double, 6, 1>;

Vec6 pack(const AngularAveraged& a) {
    Vec6 v;
    v << a.a_tilde, a.c_perp, a.c_z, a.c_rr, a.c_nn, a.c_kk;
    return v;
}

AngularAveraged unpack(const Vec6& v) { return {v(0), v(1), v(2), v(3), v(4), v(5)}; }

// (beta / M^2) sum_I L_I R_Omega^I at mass m.
AngularAveraged weighted_means(const ColliderConfig& cfg, double m) {
    const double beta = beta_of_mass(m, cfg.m_top);
    const Luminosities l = luminosities(cfg, m);
    AngularAveraged s = angular_avg(PartonChannel::QQBAR, beta) * l.qqbar;
    s += angular_avg(PartonChannel::GG, beta) * l.gg;
    return s * (beta / (m * m));
}

void check_window(const ColliderConfig& cfg, const MassWindow& w) {
    if (w.lo < cfg.threshold() * (1.0 - 1e-12)) throw Error(ErrorKind::BelowThreshold, "window starts below 2 m_top");
    if (w.hi > cfg.sqrt_s * (1.0 + 1e-12)) throw Error(ErrorKind::AboveEnergy, "window ends above sqrt(s)");
    if (!(w.hi > w.lo)) throw Error(ErrorKind::DomainError, "window needs lo < hi");
}

Vec6 integrate_window(const ColliderConfig& cfg, double lo, double hi, bool beta_sub) {
    lo = std::max(lo, cfg.threshold());
    hi = std::min(hi, cfg.sqrt_s);
    if (!(hi > lo)) return Vec6::Zero();
    if (!beta_sub) {
        auto f = [&](double m) -> Vec6 { return pack(weighted_means(cfg, m)); };
        return integrate_adaptive(f, lo, hi, cfg.quad).value;
    }
    const double m2 = 2.0 * cfg.m_top;
    auto f = [&](double b) -> Vec6 {
        const double g = 1.0 / std::sqrt((1.0 - b) * (1.0 + b));
        const double m = m2 * g;
        return pack(weighted_means(cfg, m)) * (m2 * b * g * g * g);
    };
    return integrate_adaptive(f, beta_of_mass(lo, cfg.m_top), beta_of_mass(hi, cfg.m_top), cfg.quad).value;
}

WindowState finish(const ColliderConfig& cfg, const Vec6& v) {
    if (!(v(0) > kEmptyCut)) throw Error(ErrorKind::EmptyWindow, "integrated cross-section below 1e-30");
    WindowState s;
    s.sums = unpack(v);
    s.beam = s.sums.beam_state();
    s.helicity = s.sums.helicity_state();
    s.sigma_pb = 4.0 * M_PI * cfg.alpha_s * cfg.alpha_s * v(0) * kGeV2ToPb;
    return s;
}

}  // namespace

WindowState mass_integrated_state(const ColliderConfig& cfg, const MassWindow& w, const MassIntegrationOptions& opt) {
    cfg.validate();
    check_window(cfg, w);
    return finish(cfg, integrate_window(cfg, w.lo, w.hi, opt.beta_substitution));
}

WindowState threshold_state(const ColliderConfig& cfg) {
    cfg.validate();
    const Luminosities l = luminosities(cfg, cfg.threshold());
    AngularAveraged s = angular_avg(PartonChannel::QQBAR, 0.0) * l.qqbar;
    s += angular_avg(PartonChannel::GG, 0.0) * l.gg;
    WindowState out;
    if (!(s.a_tilde > 0.0)) throw Error(ErrorKind::EmptyWindow, "no luminosity at threshold");
    out.sums = s;
    out.beam = s.beam_state();
    out.helicity = s.helicity_state();
    return out;
}

HighPtMarkers delta_high_pt(const ColliderConfig& cfg, double m_cut) {
    cfg.validate();
    if (m_cut < cfg.threshold() * (1.0 - 1e-12)) throw Error(ErrorKind::BelowThreshold, "m_cut below 2 m_top");
    if (!(m_cut < cfg.sqrt_s)) throw Error(ErrorKind::AboveEnergy, "m_cut must be below sqrt(s)");
    m_cut = std::max(m_cut, cfg.threshold());
    auto f = [&](double m) -> Eigen::Array3d {
        const double beta = beta_of_mass(m, cfg.m_top);
        const Luminosities l = luminosities(cfg, m);
        AngularAveraged s = angular_avg(PartonChannel::QQBAR, beta) * l.qqbar;
        s += angular_avg(PartonChannel::GG, beta) * l.gg;
        const double k = beta / (m * m);
        if (!(s.a_tilde > 0.0)) return Eigen::Array3d::Zero();
        const AngularAveraged n = s.normalized();
        const double delta = 0.5 * (-n.c_nn + std::abs(n.c_kk + n.c_rr) - 1.0);
        const double w_gg = l.gg * angular_avg(PartonChannel::GG, beta).a_tilde / s.a_tilde;
        const double chsh = mixture_chsh(beta, std::clamp(w_gg, 0.0, 1.0));
        return Eigen::Array3d(k * s.a_tilde, k * s.a_tilde * delta, k * s.a_tilde * chsh);
    };
    const Eigen::Array3d v = integrate_adaptive(f, m_cut, cfg.sqrt_s, cfg.quad).value;
    if (!(v(0) > kEmptyCut)) throw Error(ErrorKind::EmptyWindow, "integrated cross-section below 1e-30");
    return {v(1) / v(0), v(2) / v(0)};
}

double signature_margin(const FanoState& beam_state, SignatureKind kind) {
    const double cp = beam_state.c(0, 0), cz = beam_state.c(2, 2);
    if (kind == SignatureKind::PH) return axial_delta(cp, cz);
    return std::max(2.0 * cp * cp, cp * cp + cz * cz) - 1.0;
}

double critical_beta_vs_energy(const ColliderConfig& cfg, SignatureKind kind) {
    cfg.validate();
    if (signature_margin(threshold_state(cfg).beam, kind) <= 0.0)
        throw Error(ErrorKind::NoSignature, "threshold state shows no signature");

    // Cumulative scan in beta, then bisection inside the failing step.
    const double beta_max = beta_of_mass(cfg.sqrt_s, cfg.m_top);
    const double step = 0.01;
    Vec6 acc = Vec6::Zero();
    double b_prev = 0.0;
    auto margin_of = [&](const Vec6& v) { return signature_margin(unpack(v).beam_state(), kind); };
    for (double b = step; b_prev < beta_max; b += step) {
        const double b_next = std::min(b, beta_max);
        const Vec6 piece = integrate_window(cfg, mass_of_beta(b_prev, cfg.m_top), mass_of_beta(b_next, cfg.m_top),
                                            false);
        if (margin_of(acc + piece) <= 0.0) {
            const double lo_b = b_prev;
            const Vec6 base = acc;
            auto f = [&](double bb) {
                if (bb <= lo_b) return margin_of(base.isZero() ? pack(threshold_state(cfg).sums) : base);
                return margin_of(base + integrate_window(cfg, mass_of_beta(lo_b, cfg.m_top),
                                                         mass_of_beta(bb, cfg.m_top), false));
            };
            return bisect(f, lo_b, b_next, 1e-6);
        }
        acc += piece;
        b_prev = b_next;
    }
    return beta_max;
}

}  // namespace ttqi
