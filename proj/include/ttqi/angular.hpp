#pragma once

#include <string>

#include "ttqi/lo_production.hpp"

namespace ttqi {

inline constexpr const char* kFictitiousTag = "helicity-averaged(fictitious)";

/// Angular means (1/4pi) int dOmega of the production coefficients.  Beam-basis
/// values (c_perp, c_z) describe a physical state; the helicity-basis means
/// (c_rr, c_nn, c_kk) do not.
struct AngularAveraged {
    double a_tilde = 0.0;
    double c_perp = 0.0;
    double c_z = 0.0;
    double c_rr = 0.0;
    double c_nn = 0.0;
    double c_kk = 0.0;

    /// Everything divided by a_tilde (a_tilde becomes 1).
    AngularAveraged normalized() const;
    /// Normalized beam-basis state C = diag(C_perp, C_perp, C_z).
    FanoState beam_state() const;
    /// Normalized (k, r, n) diagonal of the helicity means; tag with kFictitiousTag.
    FanoState helicity_state() const;

    AngularAveraged& operator+=(const AngularAveraged& o);
    AngularAveraged operator*(double s) const;
};

/// Closed forms; series expansions below beta = 1e-2.
AngularAveraged angular_avg(PartonChannel ch, double beta);

/// 64-node Gauss-Legendre quadrature over cos(theta) of the pointwise
/// coefficients, rotated to the beam basis and azimuth-averaged.  For
/// beta >= 0.1 the nodes sit in v, cos = tanh(v atanh(beta)) / beta.
AngularAveraged angular_avg_numeric(PartonChannel ch, double beta);

/// K_{n,m}(x) = int_{-x}^{x} z^{2n} / (1 - z^2)^m dz by recursion.
double knm(int n, int m, double x);

/// Angular mean of the pointwise CHSH value, (1/2) int dcos B[rho(beta, theta)],
/// by 64-node quadrature.
double chsh_angular_avg(PartonChannel ch, double beta);

/// Angular mean of B[(1 - w_gg) rho^qq + w_gg rho^gg] at fixed beta, with the
/// channel weights held constant over the angle.
double mixture_chsh(double beta, double w_gg);

/// Pointwise A~ and CHSH value at (beta, cos theta) in one call.
struct PointChsh {
    double a_tilde;
    double chsh;
};
PointChsh point_chsh(PartonChannel ch, double beta, double cos_theta);

/// delta of the normalized beam-basis averaged state.
double delta_omega(PartonChannel ch, double beta);

/// CHSH margin of the averaged state, max{2 C_perp^2, C_perp^2 + C_z^2} - 1.
double mu_omega(PartonChannel ch, double beta);

struct AxialCriticals {
    double beta_ph;
    double m_ph;
    double beta_ch;
    double m_ch;
};

/// Roots of delta_omega(GG) and mu_omega(GG) in beta, bisection to 1e-9.
AxialCriticals axial_criticals_gg(double m_top = kDefaultMTop);

/// Velocity where the averaged gg C_perp changes sign.
double gg_cperp_crossover();

}  // namespace ttqi
