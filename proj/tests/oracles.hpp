#pragma once

// Reference implementations used only by the tests. They deliberately take a
// different route from the library code they check.

#include "qrnode/quantum.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using qrnode::quantum::cplx;
using qrnode::quantum::Matrix2;
using qrnode::quantum::Matrix4;

// Random density matrix G G† / Tr with a complex Gaussian 4×rank G.
inline Matrix4 random_density(std::mt19937_64& gen, int rank = 4)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd g(4, rank);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < rank; ++c)
            g(r, c) = cplx(n(gen), n(gen));
    Matrix4 m = g * g.adjoint();
    return m / m.trace().real();
}

// Denman–Beavers iteration; requires a nonsingular argument.
inline Matrix4 denman_beavers_sqrt(const Matrix4& a, int iterations = 60)
{
    Matrix4 y = a;
    Matrix4 z = Matrix4::Identity();
    for (int k = 0; k < iterations; ++k) {
        Matrix4 y_next = 0.5 * (y + z.inverse());
        Matrix4 z_next = 0.5 * (z + y.inverse());
        y = y_next;
        z = z_next;
    }
    return y;
}

inline double uhlmann_denman_beavers(const Matrix4& rho, const Matrix4& sigma)
{
    Matrix4 s = denman_beavers_sqrt(sigma);
    Matrix4 inner = denman_beavers_sqrt(s * rho * s);
    double t = inner.trace().real();
    return t * t;
}

// (Σ √λ_i)² over the eigenvalues of ρσ, which are real and non-negative.
inline double uhlmann_eigen(const Matrix4& rho, const Matrix4& sigma)
{
    Eigen::ComplexEigenSolver<Matrix4> es(rho * sigma);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    return s * s;
}

inline Matrix2 pauli(int k)
{
    Matrix2 m;
    switch (k) {
    case 0:
        m << 0, 1, 1, 0;
        break;
    case 1:
        m << 0, cplx(0, -1), cplx(0, 1), 0;
        break;
    default:
        m << 1, 0, 0, -1;
    }
    return m;
}

inline Matrix2 spin(const Eigen::Vector3d& n)
{
    return n(0) * pauli(0) + n(1) * pauli(1) + n(2) * pauli(2);
}

inline Matrix4 kron(const Matrix2& a, const Matrix2& b)
{
    Matrix4 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}

inline Eigen::Vector3d direction(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// CHSH expectation evaluated as a trace against ρ.
inline double chsh_trace(const Matrix4& rho, const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                         const Eigen::Vector3d& b0, const Eigen::Vector3d& b1)
{
    Matrix4 op = kron(spin(a0), spin(b0) + spin(b1)) + kron(spin(a1), spin(b0) - spin(b1));
    return (rho * op).trace().real();
}

struct ChshSearch
{
    double best = -1e300;  // best value from random angles plus alternating ascent
    double random_max = -1e300; // best value among the purely random quadruples
};

// Random angle quadruples, each polished by alternating exact maximization over
// one party's directions with the other party's held fixed.
inline ChshSearch brute_force_chsh(const Matrix4& rho, std::mt19937_64& gen, int random_samples, int ascent_starts)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_dir = [&] { return direction(std::acos(1.0 - 2.0 * u(gen)), 2.0 * M_PI * u(gen)); };
    // Correlations T_ij = Tr(ρ σ_i⊗σ_j) rebuilt here so the search never touches library code.
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = (rho * kron(pauli(i), pauli(j))).trace().real();

    ChshSearch out;
    for (int s = 0; s < random_samples; ++s) {
        double v = chsh_trace(rho, random_dir(), random_dir(), random_dir(), random_dir());
        out.random_max = std::max(out.random_max, v);
    }
    out.best = out.random_max;
    auto unit = [](Eigen::Vector3d v) {
        double n = v.norm();
        return n > 1e-300 ? Eigen::Vector3d(v / n) : Eigen::Vector3d(0, 0, 1);
    };
    for (int s = 0; s < ascent_starts; ++s) {
        Eigen::Vector3d a0, a1, b0 = random_dir(), b1 = random_dir();
        for (int it = 0; it < 200; ++it) {
            a0 = unit(t * (b0 + b1));
            a1 = unit(t * (b0 - b1));
            b0 = unit(t.transpose() * (a0 + a1));
            b1 = unit(t.transpose() * (a0 - a1));
        }
        out.best = std::max(out.best, chsh_trace(rho, a0, a1, b0, b1));
    }
    return out;
}

} // namespace oracle
