#include "ttqi/spinpair.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "ttqi/errors.hpp"

namespace ttqi {

namespace {

using cd = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

const std::array<Mat2c, 3>& paulis() {
    static const std::array<Mat2c, 3> s = [] {
        std::array<Mat2c, 3> m;
        m[0] << 0, 1, 1, 0;
        m[1] << 0, cd(0, -1), cd(0, 1), 0;
        m[2] << 1, 0, 0, -1;
        return m;
    }();
    return s;
}

Mat4c kron(const Mat2c& a, const Mat2c& b) {
    Mat4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

const Mat4c& sigma_yy() {
    static const Mat4c m = kron(paulis()[1], paulis()[1]);
    return m;
}

Eigen::SelfAdjointEigenSolver<Mat4c> hermitian_eigen(const Mat4c& m) {
    const Mat4c h = 0.5 * (m + m.adjoint());
    return Eigen::SelfAdjointEigenSolver<Mat4c>(h);
}

Eigen::Vector4d clamp_spectrum(Eigen::Vector4d ev, const Tolerances& tol) {
    for (int i = 0; i < 4; ++i) {
        if (ev(i) < -tol.physicality)
            throw Error(ErrorKind::NonPhysicalState, "density matrix eigenvalue " + std::to_string(ev(i)));
        if (ev(i) < 0.0) ev(i) = 0.0;
    }
    return ev;
}

}  // namespace

FanoState FanoState::normalized() const {
    if (!(a > 0.0)) throw Error(ErrorKind::DegenerateNormalization, "normalization coefficient a <= 0");
    return FanoState{1.0, bplus / a, bminus / a, c / a};
}

bool FanoState::is_finite() const {
    return std::isfinite(a) && bplus.allFinite() && bminus.allFinite() && c.allFinite();
}

DensityMatrix4 assemble_density(const FanoState& f, std::string basis_tag) {
    const auto& s = paulis();
    const Mat2c id = Mat2c::Identity();
    Mat4c m = f.a * Mat4c::Identity();
    for (int i = 0; i < 3; ++i) {
        m += f.bplus(i) * kron(s[i], id);
        m += f.bminus(i) * kron(id, s[i]);
        for (int j = 0; j < 3; ++j) m += f.c(i, j) * kron(s[i], s[j]);
    }
    return DensityMatrix4{0.25 * m, std::move(basis_tag)};
}

FanoState extract_fano(const DensityMatrix4& rho) {
    const auto& s = paulis();
    const Mat2c id = Mat2c::Identity();
    const Mat4c& m = rho.entries;
    FanoState f;
    f.a = m.trace().real();
    for (int i = 0; i < 3; ++i) {
        f.bplus(i) = (m * kron(s[i], id)).trace().real();
        f.bminus(i) = (m * kron(id, s[i])).trace().real();
        for (int j = 0; j < 3; ++j) f.c(i, j) = (m * kron(s[i], s[j])).trace().real();
    }
    return f;
}

Eigen::Vector4d physical_eigenvalues(const DensityMatrix4& rho, const Tolerances& tol) {
    return clamp_spectrum(hermitian_eigen(rho.entries).eigenvalues(), tol);
}

Mat4c hermitian_sqrt(const Mat4c& m, const Tolerances& tol) {
    const auto es = hermitian_eigen(m);
    const Eigen::Vector4d ev = clamp_spectrum(es.eigenvalues(), tol).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double concurrence(const DensityMatrix4& rho, const Tolerances& tol) {
    // rho = X X^dagger with X = V sqrt(P).  The singular values of
    // tau = X^T (sy x sy) X are the square roots of the eigenvalues of
    // rho rho~; the SVD keeps zero eigenvalues at ~eps instead of ~sqrt(eps).
    const auto es = hermitian_eigen(rho.entries);
    const Eigen::Vector4d p = clamp_spectrum(es.eigenvalues(), tol).cwiseSqrt();
    const Mat4c x = es.eigenvectors() * p.asDiagonal();
    const Mat4c tau = x.transpose() * sigma_yy() * x;
    const Eigen::Vector4d lam = Eigen::JacobiSVD<Mat4c>(tau).singularValues();  // descending
    return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double concurrence_literal(const DensityMatrix4& rho, const Tolerances& tol) {
    const Mat4c sq = hermitian_sqrt(rho.entries, tol);
    const Mat4c tilde = sigma_yy() * rho.entries.conjugate() * sigma_yy();
    const Mat4c inner = sq * tilde * sq;
    Eigen::Vector4d lam = hermitian_sqrt(inner, Tolerances{1e-8, tol.algebra, tol.tstate}).eigenvalues().real();
    std::sort(lam.data(), lam.data() + 4, std::greater<>());
    return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double concurrence_tstate(const Vec3& c, const Tolerances& tol) {
    const double c1 = c(0), c2 = c(1), c3 = c(2);
    if (c3 + std::abs(c1 + c2) - 1.0 > tol.tstate || -c3 + std::abs(c1 - c2) - 1.0 > tol.tstate)
        throw Error(ErrorKind::PhysicalityViolation, "correlation diagonal does not describe a physical T-state");
    if (c3 <= 0.0) return 0.5 * std::max(-c3 + std::abs(c1 + c2) - 1.0, 0.0);
    return 0.5 * std::max(c3 + std::abs(c1 - c2) - 1.0, 0.0);
}

Mat4c partial_transpose(const Mat4c& m) {
    Mat4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * i, 2 * j).transpose();
    return out;
}

PeresHorodecki peres_horodecki(const DensityMatrix4& rho, const Tolerances& tol) {
    physical_eigenvalues(rho, tol);
    const double lo = hermitian_eigen(partial_transpose(rho.entries)).eigenvalues()(0);
    return {lo, lo < -tol.physicality};
}

double delta_marker(const Mat3& c) { return 0.5 * (-c(2, 2) + std::abs(c(0, 0) + c(1, 1)) - 1.0); }

namespace {
Eigen::Vector3d ctc_eigenvalues(const Mat3& c) {
    return Eigen::SelfAdjointEigenSolver<Mat3>(c.transpose() * c, Eigen::EigenvaluesOnly).eigenvalues();
}
}  // namespace

double chsh_value(const Mat3& c) {
    const Eigen::Vector3d mu = ctc_eigenvalues(c);  // ascending
    return 2.0 * std::sqrt(std::max(0.0, mu(2) + mu(1)));
}

double chsh_margin(const Mat3& c) {
    const Eigen::Vector3d mu = ctc_eigenvalues(c);
    return mu(2) + mu(1) - 1.0;
}

Witness witness_d(const Mat3& c) {
    const double d = c.trace() / 3.0;
    return {d, d + 1.0 / 3.0};
}

double axial_delta(double c_perp, double c_z) { return 0.5 * (-c_z + 2.0 * std::abs(c_perp) - 1.0); }

double fidelity(const DensityMatrix4& rho, const DensityMatrix4& sigma, const Tolerances& tol) {
    const Mat4c sq = hermitian_sqrt(rho.entries, tol);
    const Mat4c inner = sq * sigma.entries * sq;
    const Eigen::Vector4d ev = hermitian_eigen(inner).eigenvalues().cwiseMax(0.0);
    const double f = ev.cwiseSqrt().sum();
    return f * f;
}

DensityMatrix4 project_physical(const DensityMatrix4& rho) {
    // Euclidean projection of the spectrum onto the probability simplex: the
    // exact Frobenius-nearest density matrix (clipping plus a uniform shift).
    const auto es = hermitian_eigen(rho.entries);
    Eigen::Vector4d ev = es.eigenvalues();
    std::array<double, 4> sorted{ev(3), ev(2), ev(1), ev(0)};
    double cum = 0.0, shift = 0.0;
    for (int k = 0; k < 4; ++k) {
        cum += sorted[k];
        const double t = (cum - 1.0) / (k + 1);
        if (sorted[k] - t > 0.0) shift = t;
    }
    for (int i = 0; i < 4; ++i) ev(i) = std::max(ev(i) - shift, 0.0);
    return DensityMatrix4{es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint(), rho.basis_tag};
}

}  // namespace ttqi
