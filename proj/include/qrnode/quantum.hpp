#pragma once

// Two-qubit polarization state algebra.
//
// Basis ordering is fixed everywhere as (HH, HV, VH, VV): the first qubit is
// the telecom photon, the second is the NIR photon / memory.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace qrnode::quantum {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector2 = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4cd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

enum class Pol { H, V, D, A, R, L };

char to_char(Pol p);
std::optional<Pol> pol_from_char(char c);

// Unit ket: H=(1,0), V=(0,1), D=(H+V)/√2, A=(H-V)/√2, R=(H-iV)/√2, L=(H+iV)/√2.
Vector2 ket(Pol p);
Matrix2 projector(Pol p);

// Bloch vector of the pure state |p⟩.
Eigen::Vector3d bloch_vector(Pol p);

class DensityMatrix
{
public:
    // Validates Hermiticity, unit trace and positivity; throws DomainError.
    explicit DensityMatrix(const Matrix4& m);

    // Skips validation; for values that are valid by construction.
    static DensityMatrix trusted(const Matrix4& m);

    const Matrix4& matrix() const noexcept { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    double purity() const;
    double min_eigenvalue() const;

private:
    DensityMatrix() = default;
    Matrix4 m_ = Matrix4::Zero();
};

struct Invariants
{
    double hermitian_error;
    double trace_error;
    double min_eigenvalue;

    bool ok() const
    {
        return hermitian_error < kHermitianTol && trace_error < kTraceTol && min_eigenvalue >= -kPsdTol;
    }
};

Invariants check_invariants(const Matrix4& m);

// A pair of rank-1 projectors, one per arm.
struct MeasurementSetting
{
    Matrix2 projector_a; // telecom arm
    Matrix2 projector_b; // NIR arm
    std::string label;   // e.g. "HD"; empty for arbitrary projectors

    static MeasurementSetting from_labels(Pol a, Pol b);
    // Two characters from {H,V,D,A,R,L}; nullopt when malformed.
    static std::optional<MeasurementSetting> parse(std::string_view label);

    Matrix4 joint() const;
};

// The 16 settings used for two-qubit tomography (H, V, D, R combinations).
std::array<MeasurementSetting, 16> standard_tomography_settings();

// True when the projectors P⊗Q span the 16-dim space of Hermitian 4x4 operators.
bool informationally_complete(std::span<const MeasurementSetting> settings);

Vector4 phi_plus_ket();
DensityMatrix bell_phi_plus();
DensityMatrix maximally_mixed();

// a|Φ⁺⟩⟨Φ⁺| + (1-a)/4·I, a ∈ [0,1].
DensityMatrix werner_state(double a);

// Hermitian PSD square root by eigendecomposition. Eigenvalues in (-1e-10, 0)
// are clamped to zero; anything more negative throws DomainError.
Matrix4 psd_sqrt(const Matrix4& m);

// Uhlmann fidelity (Tr√(√σ ρ √σ))².
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// 1 - 3/(2(snr+2)).
double fidelity_from_snr(double snr);

// snr = 2a/(1-a); a == 1 returns +infinity.
double snr_from_werner(double a);
// a = snr/(snr+2); snr == +infinity returns 1.
double werner_from_snr(double snr);

// Correlation matrix T_ij = Tr(ρ σ_i⊗σ_j).
Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho);

// Maximal CHSH value (Horodecki): 2√(m1+m2) over the two largest eigenvalues of TᵀT.
double chsh_max(const DensityMatrix& rho);

// CHSH value for explicit Bloch-vector measurement directions.
double chsh_value(const Eigen::Matrix3d& t,
                  const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                  const Eigen::Vector3d& b0, const Eigen::Vector3d& b1);

// Born rule Tr(ρ P⊗Q).
double outcome_probability(const DensityMatrix& rho, const MeasurementSetting& setting);

} // namespace qrnode::quantum
