#include "ttqi/luminosity.hpp"

#include <Eigen/Core>
#include <cmath>

#include "ttqi/angular.hpp"
#include "ttqi/errors.hpp"

namespace ttqi {

const char* to_string(Beam b) { return b == Beam::PP ? "pp" : "ppbar"; }

double QScale::at(double m_tt) const {
    switch (kind) {
        case Kind::MTT: return m_tt;
        case Kind::MTT_HALF: return 0.5 * m_tt;
        case Kind::FIXED: return value;
    }
    return m_tt;
}

std::string QScale::str() const {
    switch (kind) {
        case Kind::MTT: return "mtt";
        case Kind::MTT_HALF: return "mtt/2";
        case Kind::FIXED: return "fixed:" + std::to_string(value);
    }
    return "mtt";
}

QScale QScale::parse(const std::string& s) {
    if (s == "mtt") return {Kind::MTT, 0.0};
    if (s == "mtt/2") return {Kind::MTT_HALF, 0.0};
    if (s.rfind("fixed:", 0) == 0) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s.substr(6), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() - 6 || !(v > 0.0))
            throw Error(ErrorKind::DomainError, "bad fixed scale '" + s + "'");
        return {Kind::FIXED, v};
    }
    throw Error(ErrorKind::DomainError, "unknown scale rule '" + s + "'");
}

void ColliderConfig::validate() const {
    if (!pdf) throw Error(ErrorKind::DomainError, "collider config has no PDF set");
    if (!(m_top > 0.0)) throw Error(ErrorKind::DomainError, "m_top must be positive");
    if (!(alpha_s > 0.0)) throw Error(ErrorKind::DomainError, "alpha_s must be positive");
    if (!(sqrt_s > 2.0 * m_top)) throw Error(ErrorKind::DomainError, "sqrt_s must exceed 2 m_top");
}

Luminosities luminosities(const ColliderConfig& cfg, double m_tt) {
    cfg.validate();
    if (m_tt < cfg.threshold()) throw Error(ErrorKind::BelowThreshold, "m_tt below 2 m_top");
    if (m_tt > cfg.sqrt_s) throw Error(ErrorKind::AboveEnergy, "m_tt above sqrt(s)");
    const double x = m_tt / cfg.sqrt_s;
    const double umax = -std::log(x);
    if (!(umax > 0.0)) return {};
    const double q = cfg.q_scale.at(m_tt);
    const bool ppbar = cfg.beam == Beam::PPBAR;
    const PartonDensity& pdf = *cfg.pdf;

    // u = ln t; N(y) = x f(y) / y.
    auto integrand = [&](double u) -> Eigen::Array2d {
        const double xa = x * std::exp(u), xb = x * std::exp(-u);
        const PartonValues fa = pdf.xfx_all(xa, q);
        const PartonValues fb = pdf.xfx_all(xb, q);
        double qq = 0.0;
        for (int f = 1; f <= 5; ++f) {
            const double qa = fa[5 + f], qba = fa[5 - f];
            const double qb = fb[5 + f], qbb = fb[5 - f];
            qq += ppbar ? qa * qb + qba * qbb : qa * qbb + qba * qb;
        }
        const double inv = 1.0 / (xa * xb);
        return Eigen::Array2d(qq * inv, fa[kGluonSlot] * fb[kGluonSlot] * inv);
    };
    const auto res = integrate_adaptive(integrand, -umax, umax, cfg.quad);
    const double pre = 2.0 * x / cfg.sqrt_s;
    return {pre * res.value(0), pre * res.value(1)};
}

double luminosity(const ColliderConfig& cfg, PartonChannel ch, double m_tt) {
    return luminosities(cfg, m_tt).of(ch);
}

ChannelWeights weights_from(const Luminosities& lum, double beta) {
    const double qq = lum.qqbar * angular_avg(PartonChannel::QQBAR, beta).a_tilde;
    const double gg = lum.gg * angular_avg(PartonChannel::GG, beta).a_tilde;
    const double tot = qq + gg;
    if (!(tot > 0.0)) throw Error(ErrorKind::DegenerateNormalization, "both channel luminosities vanish");
    const double w_gg = gg / tot;
    return {1.0 - w_gg, w_gg};
}

ChannelWeights channel_weights(const ColliderConfig& cfg, double m_tt) {
    const double beta = beta_of_mass(m_tt, cfg.m_top);
    return weights_from(luminosities(cfg, m_tt), beta);
}

double gluon_fraction(const ColliderConfig& cfg) {
    cfg.validate();
    auto integrand = [&](double m) -> Eigen::Array2d {
        const double beta = beta_of_mass(m, cfg.m_top);
        const Luminosities l = luminosities(cfg, m);
        const double k = beta / (m * m);
        return Eigen::Array2d(k * l.qqbar * angular_avg(PartonChannel::QQBAR, beta).a_tilde,
                              k * l.gg * angular_avg(PartonChannel::GG, beta).a_tilde);
    };
    const auto res = integrate_adaptive(integrand, cfg.threshold(), cfg.sqrt_s, cfg.quad);
    const double tot = res.value(0) + res.value(1);
    if (!(tot > cfg.quad.abs_tol)) throw Error(ErrorKind::EmptyWindow, "integrated cross-section vanishes");
    return res.value(1) / tot;
}

}  // namespace ttqi
