#pragma once

namespace ttqi {

struct Tolerances {
    /// Eigenvalues in [-physicality, 0) are treated as zero.
    double physicality = 1e-10;
    /// Hermiticity / trace checks and round trips.
    double algebra = 1e-12;
    /// Slack on the T-state physicality inequalities.
    double tstate = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace ttqi
