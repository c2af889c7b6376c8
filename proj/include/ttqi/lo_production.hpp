#pragma once

#include <optional>
#include <utility>

#include "ttqi/spinpair.hpp"

namespace ttqi {

inline constexpr double kDefaultMTop = 173.0;
inline constexpr double kDefaultAlphaS = 0.118;

enum class PartonChannel { QQBAR, GG };

const char* to_string(PartonChannel ch);

/// Correlation-matrix index convention for the helicity basis.
enum HelicityIndex : int { K = 0, R = 1, N = 2 };

struct Kinematics {
    double m_top = kDefaultMTop;
    double m_tt = 2.0 * kDefaultMTop;
    double beta = 0.0;
    double cos_theta = 1.0;

    static Kinematics from_beta(double beta, double cos_theta, double m_top = kDefaultMTop);
    static Kinematics from_mass(double m_tt, double cos_theta, double m_top = kDefaultMTop);
    double sin_theta() const;
};

struct HelicityFrame {
    Vec3 k_hat;
    Vec3 r_hat;
    Vec3 n_hat;
};

double beta_of_mass(double m_tt, double m_top = kDefaultMTop);
double mass_of_beta(double beta, double m_top = kDefaultMTop);

/// Unnormalized production R-matrix in the (k, r, n) helicity basis.
FanoState r_coeffs(PartonChannel ch, const Kinematics& kin);

/// Normalized production state rho = R / tr R.
FanoState pair_state(PartonChannel ch, const Kinematics& kin);

struct DiagEigs {
    double c_plus;
    double c_nn;
    double c_minus;
};

/// Eigenvalues of the normalized correlation matrix (closed form of the
/// (k, r) block plus C_nn).
DiagEigs diag_eigs(PartonChannel ch, const Kinematics& kin);

/// Delta^I = (-C_nn + |C_kk + C_rr| - 1) / 2 of the normalized pair state.
double delta_helicity(PartonChannel ch, double beta, double cos_theta);

/// mu^I = tr C^T C - C_min^2 - 1; CHSH is violated iff mu > 0.
double chsh_margin_lo(PartonChannel ch, double beta, double cos_theta);

struct BetaPair {
    double beta_c1;
    double beta_c2;
};

/// Closed-form entanglement boundaries of gg -> tt at production angle theta.
BetaPair critical_beta_ph_gg(double theta);

/// CHSH boundaries from mu^I(beta, theta) = 0.  For QQBAR the non-violating
/// band collapses to beta = 0 and {0, 0} is returned.
BetaPair critical_beta_ch(PartonChannel ch, double theta);

/// d sigma / d Omega = alpha_s^2 beta A~ / m_tt^2 in GeV^-2 sr^-1.
double diff_xsec(PartonChannel ch, const Kinematics& kin, double alpha_s = kDefaultAlphaS);

/// n_hat = r_hat x k_hat.
HelicityFrame helicity_frame(const Vec3& k_hat, const Vec3& p_hat);

}  // namespace ttqi
