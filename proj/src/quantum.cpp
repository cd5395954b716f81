#include "qrnode/quantum.hpp"

#include "qrnode/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrnode::quantum {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::array<Matrix2, 4> paulis()
{
    Matrix2 i2 = Matrix2::Identity();
    Matrix2 x, y, z;
    x << 0, 1, 1, 0;
    y << 0, cplx(0, -1), cplx(0, 1), 0;
    z << 1, 0, 0, -1;
    return {i2, x, y, z};
}

Matrix4 kron(const Matrix2& a, const Matrix2& b)
{
    Matrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

} // namespace

char to_char(Pol p)
{
    switch (p) {
    case Pol::H: return 'H';
    case Pol::V: return 'V';
    case Pol::D: return 'D';
    case Pol::A: return 'A';
    case Pol::R: return 'R';
    case Pol::L: return 'L';
    }
    return '?';
}

std::optional<Pol> pol_from_char(char c)
{
    switch (c) {
    case 'H': return Pol::H;
    case 'V': return Pol::V;
    case 'D': return Pol::D;
    case 'A': return Pol::A;
    case 'R': return Pol::R;
    case 'L': return Pol::L;
    default: return std::nullopt;
    }
}

Vector2 ket(Pol p)
{
    switch (p) {
    case Pol::H: return Vector2(1, 0);
    case Pol::V: return Vector2(0, 1);
    case Pol::D: return Vector2(kInvSqrt2, kInvSqrt2);
    case Pol::A: return Vector2(kInvSqrt2, -kInvSqrt2);
    case Pol::R: return Vector2(kInvSqrt2, cplx(0, -kInvSqrt2));
    case Pol::L: return Vector2(kInvSqrt2, cplx(0, kInvSqrt2));
    }
    return Vector2::Zero();
}

Matrix2 projector(Pol p)
{
    Vector2 k = ket(p);
    return k * k.adjoint();
}

Eigen::Vector3d bloch_vector(Pol p)
{
    auto s = paulis();
    Matrix2 proj = projector(p);
    return {(proj * s[1]).trace().real(), (proj * s[2]).trace().real(), (proj * s[3]).trace().real()};
}

DensityMatrix::DensityMatrix(const Matrix4& m) : m_(m)
{
    Invariants inv = check_invariants(m);
    if (inv.hermitian_error >= kHermitianTol)
        throw DomainError("density matrix is not Hermitian");
    if (inv.trace_error >= kTraceTol)
        throw DomainError("density matrix trace differs from 1");
    if (inv.min_eigenvalue < -kPsdTol)
        throw DomainError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::trusted(const Matrix4& m)
{
    DensityMatrix d;
    d.m_ = m;
    return d;
}

double DensityMatrix::purity() const
{
    return (m_ * m_).trace().real();
}

double DensityMatrix::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<Matrix4> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Invariants check_invariants(const Matrix4& m)
{
    Invariants inv{};
    inv.hermitian_error = (m - m.adjoint()).norm();
    inv.trace_error = std::abs(m.trace() - cplx(1.0, 0.0));
    Matrix4 herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4> es(herm, Eigen::EigenvaluesOnly);
    inv.min_eigenvalue = es.eigenvalues().minCoeff();
    return inv;
}

MeasurementSetting MeasurementSetting::from_labels(Pol a, Pol b)
{
    return {projector(a), projector(b), std::string{to_char(a), to_char(b)}};
}

std::optional<MeasurementSetting> MeasurementSetting::parse(std::string_view label)
{
    if (label.size() != 2)
        return std::nullopt;
    auto a = pol_from_char(label[0]);
    auto b = pol_from_char(label[1]);
    if (!a || !b)
        return std::nullopt;
    return from_labels(*a, *b);
}

Matrix4 MeasurementSetting::joint() const
{
    return kron(projector_a, projector_b);
}

std::array<MeasurementSetting, 16> standard_tomography_settings()
{
    using enum Pol;
    const std::array<std::pair<Pol, Pol>, 16> order{{
        {H, H}, {H, V}, {V, V}, {V, H}, {R, H}, {R, V}, {D, V}, {D, H},
        {D, R}, {D, D}, {R, D}, {H, D}, {V, D}, {V, L}, {H, L}, {R, L},
    }};
    std::array<MeasurementSetting, 16> out;
    for (std::size_t i = 0; i < order.size(); ++i)
        out[i] = MeasurementSetting::from_labels(order[i].first, order[i].second);
    return out;
}

bool informationally_complete(std::span<const MeasurementSetting> settings)
{
    if (settings.size() < 16)
        return false;
    // Row k holds the real coordinates of P⊗Q in the Pauli-product basis.
    auto s = paulis();
    Eigen::MatrixXd a(settings.size(), 16);
    for (std::size_t k = 0; k < settings.size(); ++k) {
        Matrix4 op = settings[k].joint();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                a(static_cast<Eigen::Index>(k), 4 * i + j) = (op * kron(s[i], s[j])).trace().real();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-9);
    return lu.rank() == 16;
}

Vector4 phi_plus_ket()
{
    return Vector4(kInvSqrt2, 0, 0, kInvSqrt2);
}

DensityMatrix bell_phi_plus()
{
    Vector4 k = phi_plus_ket();
    return DensityMatrix::trusted(k * k.adjoint());
}

DensityMatrix maximally_mixed()
{
    return DensityMatrix::trusted(Matrix4::Identity() / 4.0);
}

DensityMatrix werner_state(double a)
{
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("Werner mixing parameter must lie in [0, 1]");
    return DensityMatrix::trusted(a * bell_phi_plus().matrix() + (1.0 - a) / 4.0 * Matrix4::Identity());
}

Matrix4 psd_sqrt(const Matrix4& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix4> es(0.5 * (m + m.adjoint()));
    Eigen::Vector4d ev = es.eigenvalues();
    for (int i = 0; i < 4; ++i) {
        if (ev(i) < -kPsdTol)
            throw DomainError("matrix square root of a non-PSD matrix");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    Matrix4 root = psd_sqrt(sigma.matrix());
    Matrix4 inner = root * rho.matrix() * root;
    Eigen::SelfAdjointEigenSolver<Matrix4> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
    double tr = 0.0;
    for (int i = 0; i < 4; ++i) {
        double ev = es.eigenvalues()(i);
        if (ev < -kPsdTol)
            throw DomainError("fidelity of a non-PSD input");
        tr += std::sqrt(std::max(ev, 0.0));
    }
    return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity_from_snr(double snr)
{
    if (!(snr >= 0.0))
        throw DomainError("SNR must be non-negative");
    if (std::isinf(snr))
        return 1.0;
    return 1.0 - 3.0 / (2.0 * (snr + 2.0));
}

double snr_from_werner(double a)
{
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("Werner mixing parameter must lie in [0, 1]");
    if (a == 1.0)
        return std::numeric_limits<double>::infinity();
    return 2.0 * a / (1.0 - a);
}

double werner_from_snr(double snr)
{
    if (!(snr >= 0.0))
        throw DomainError("SNR must be non-negative");
    if (std::isinf(snr))
        return 1.0;
    return snr / (snr + 2.0);
}

Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho)
{
    auto s = paulis();
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = (rho.matrix() * kron(s[i + 1], s[j + 1])).trace().real();
    return t;
}

double chsh_max(const DensityMatrix& rho)
{
    Eigen::Matrix3d t = correlation_matrix(rho);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t, Eigen::EigenvaluesOnly);
    // ascending order
    double m = std::max(es.eigenvalues()(1), 0.0) + std::max(es.eigenvalues()(2), 0.0);
    return 2.0 * std::sqrt(m);
}

double chsh_value(const Eigen::Matrix3d& t,
                  const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                  const Eigen::Vector3d& b0, const Eigen::Vector3d& b1)
{
    auto e = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return a.dot(t * b); };
    return std::abs(e(a0, b0) + e(a0, b1) + e(a1, b0) - e(a1, b1));
}

double outcome_probability(const DensityMatrix& rho, const MeasurementSetting& setting)
{
    double p = (rho.matrix() * setting.joint()).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

} // namespace qrnode::quantum
