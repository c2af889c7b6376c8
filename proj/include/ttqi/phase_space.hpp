#pragma once

#include "ttqi/angular.hpp"
#include "ttqi/luminosity.hpp"

namespace ttqi {

struct MassWindow {
    double lo;
    double hi;
};

/// Result of a mass-window integration.  `sums` holds the luminosity- and
/// phase-space-weighted integrals of the angular means (arbitrary common
/// normalization); the states are their normalized forms.
struct WindowState {
    AngularAveraged sums;
    FanoState beam;        // physical, basis "beam"
    FanoState helicity;    // fictitious, kFictitiousTag
    double sigma_pb = 0.0; // cross-section in the window at fixed alpha_s
};

struct MassIntegrationOptions {
    /// Integrate in beta instead of M (cross-check path).
    bool beta_substitution = false;
};

/// rho_Pi over the window: int dM (beta / M^2) sum_I L_I R_Omega^I normalized by
/// the same integral of 4 A~^I.
WindowState mass_integrated_state(const ColliderConfig& cfg, const MassWindow& w,
                                  const MassIntegrationOptions& opt = {});

/// State at the production threshold (collapsed window [2 m_t, 2 m_t]).
WindowState threshold_state(const ColliderConfig& cfg);

struct HighPtMarkers {
    double delta;
    double chsh;
};

/// Cross-section weighted means over [m_cut, sqrt s] of Delta_Omega(M) (from
/// the mixture's averaged helicity correlations) and of B_Omega(M), the angular
/// mean of B for the mixture sum_I w_I(M) rho^I(M, theta).
HighPtMarkers delta_high_pt(const ColliderConfig& cfg, double m_cut);

enum class SignatureKind { PH, CH };

/// Largest beta_c for which the window [2 m_t, M(beta_c)] still shows the
/// signature (delta > 0 for PH, CHSH margin > 0 for CH).  Throws NoSignature if
/// the threshold state already fails.
double critical_beta_vs_energy(const ColliderConfig& cfg, SignatureKind kind);

/// Marker used by critical_beta_vs_energy on a beam-basis state.
double signature_margin(const FanoState& beam_state, SignatureKind kind);

}  // namespace ttqi
