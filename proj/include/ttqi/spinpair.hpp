#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "ttqi/tolerances.hpp"

namespace ttqi {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4c = Eigen::Matrix4cd;

/// Fano coefficients of a two-qubit operator
///   R = a I + B+.sigma x I + B-.I x sigma + C_ij sigma_i x sigma_j,
/// so tr R = 4a.  Unnormalized R-matrices store (A~, B~, C~) as they are; the
/// normalized form has a = 1 and rho = R / 4.
struct FanoState {
    double a = 1.0;
    Vec3 bplus = Vec3::Zero();
    Vec3 bminus = Vec3::Zero();
    Mat3 c = Mat3::Zero();

    /// Divide through by a.  Throws DegenerateNormalization if a <= 0.
    FanoState normalized() const;
    bool is_finite() const;

    static FanoState unpolarized(const Mat3& c) { return FanoState{1.0, Vec3::Zero(), Vec3::Zero(), c}; }
};

struct DensityMatrix4 {
    Mat4c entries = Mat4c::Zero();
    std::string basis_tag = "helicity";
};

/// Returns R / 4, i.e. rho = (I4 + B+.sigma x I + B-.I x sigma + C_ij sigma_i x sigma_j) / 4
/// for a normalized f.  No physicality check.
DensityMatrix4 assemble_density(const FanoState& f, std::string basis_tag = "helicity");

/// Inverse of assemble_density: a = tr(m), B+_i = tr(m sigma_i x I), C_ij = tr(m sigma_i x sigma_j).
FanoState extract_fano(const DensityMatrix4& rho);

/// Eigenvalues in ascending order.  Throws NonPhysicalState when the smallest is
/// below -tol.physicality; eigenvalues in [-eps, 0) are returned as 0.
Eigen::Vector4d physical_eigenvalues(const DensityMatrix4& rho, const Tolerances& tol = kDefaultTolerances);

/// Hermitian square root via spectral decomposition (clamped spectrum).
Mat4c hermitian_sqrt(const Mat4c& m, const Tolerances& tol = kDefaultTolerances);

/// Wootters concurrence from the singular values of X^T (sy x sy) X with
/// rho = X X^dagger (the square roots of the eigenvalues of rho * rho_tilde).
double concurrence(const DensityMatrix4& rho, const Tolerances& tol = kDefaultTolerances);

/// Same quantity through the literal sqrt(sqrt(rho) rho_tilde sqrt(rho)) route.
double concurrence_literal(const DensityMatrix4& rho, const Tolerances& tol = kDefaultTolerances);

/// Closed-form concurrence of an unpolarized state with diagonal C.
double concurrence_tstate(const Vec3& c_diag, const Tolerances& tol = kDefaultTolerances);

struct PeresHorodecki {
    double min_eigenvalue;
    bool entangled;
};

/// Partial transpose on the second qubit (each 2x2 block transposed).
Mat4c partial_transpose(const Mat4c& m);
PeresHorodecki peres_horodecki(const DensityMatrix4& rho, const Tolerances& tol = kDefaultTolerances);

/// Delta = (-C33 + |C11 + C22| - 1) / 2 with index 3 playing the n (or z) role.
double delta_marker(const Mat3& c);

/// Horodecki maximal CHSH value 2 sqrt(mu1 + mu2) from the eigenvalues of C^T C.
double chsh_value(const Mat3& c);

/// mu = tr(C^T C) - min eigenvalue - 1: positive iff chsh_value > 2.
double chsh_margin(const Mat3& c);

struct Witness {
    double d;
    double w;
};

Witness witness_d(const Mat3& c);

/// delta = (-C_z + 2|C_perp| - 1) / 2 for C = diag(C_perp, C_perp, C_z).
double axial_delta(double c_perp, double c_z);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix4& rho, const DensityMatrix4& sigma, const Tolerances& tol = kDefaultTolerances);

/// Nearest physical state in Frobenius norm: the spectrum of the Hermitian
/// part is projected onto the probability simplex.
DensityMatrix4 project_physical(const DensityMatrix4& rho);

}  // namespace ttqi
