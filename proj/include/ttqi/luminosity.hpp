#pragma once

#include <memory>
#include <string>

#include "ttqi/lo_production.hpp"
#include "ttqi/pdf.hpp"
#include "ttqi/quadrature.hpp"

namespace ttqi {

enum class Beam { PP, PPBAR };

const char* to_string(Beam b);

/// Factorization scale rule.
struct QScale {
    enum class Kind { MTT, MTT_HALF, FIXED };
    Kind kind = Kind::MTT;
    double value = 0.0;  // GeV, FIXED only

    double at(double m_tt) const;
    std::string str() const;
    /// "mtt", "mtt/2" or "fixed:GEV".
    static QScale parse(const std::string& s);
};

struct ColliderConfig {
    Beam beam = Beam::PP;
    double sqrt_s = 13000.0;
    double m_top = kDefaultMTop;
    double alpha_s = kDefaultAlphaS;
    QScale q_scale{};
    std::shared_ptr<const PartonDensity> pdf;
    QuadratureOptions quad{};

    void validate() const;
    double threshold() const { return 2.0 * m_top; }
};

struct Luminosities {
    double qqbar = 0.0;
    double gg = 0.0;

    double of(PartonChannel ch) const { return ch == PartonChannel::QQBAR ? qqbar : gg; }
};

/// L_I(m_tt) = sum_pi (2x / sqrt s) int_x^{1/x} dt/t N_pi(xt) N'_pibar(x/t), both
/// channels from one adaptive integral in ln t.  GeV^-1.
Luminosities luminosities(const ColliderConfig& cfg, double m_tt);
double luminosity(const ColliderConfig& cfg, PartonChannel ch, double m_tt);

struct ChannelWeights {
    double w_qq;
    double w_gg;
};

/// w_I = L_I A~_I / sum_J L_J A~_J with angular-averaged A~ at beta(m_tt).
ChannelWeights channel_weights(const ColliderConfig& cfg, double m_tt);
ChannelWeights weights_from(const Luminosities& lum, double beta);

/// Cross-section fraction of gg over the full mass range [2 m_t, sqrt s].
double gluon_fraction(const ColliderConfig& cfg);

}  // namespace ttqi
