#pragma once

// Source/memory spectral mode matching: pathway spectra with absorption notches,
// heralding efficiency under a scanned telecom cavity, and the two-resonance
// memory acceptance curve. Frequencies in Hz.

#include "qrnode/optics.hpp"

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qrnode::spectra {

struct PathwaySpectrumModel
{
    std::array<double, 2> centers{};  // telecom detuning of the F=1 / F=2 decay pathways
    std::array<double, 2> weights{};  // must sum to 1
    double doppler_width = 0.0;       // Gaussian FWHM
    std::string reference;

    void validate() const;
};

enum class FeatureTarget { TelecomRate, NirSurvival };

// Multiplicative Gaussian notch 1 - depth·exp(-4 ln2 (δ-center)²/width²).
struct AbsorptionFeature
{
    double center = 0.0;
    double width = 0.0; // FWHM
    double depth = 0.0;
    FeatureTarget applies_to = FeatureTarget::TelecomRate;

    void validate() const;
    double factor(double detuning) const;
};

struct ScanBand
{
    double min = -8e9;
    double max = 8e9;
    double step = 2e6;
};

struct JointSpectralModel
{
    PathwaySpectrumModel pathways;
    std::vector<AbsorptionFeature> features;
    // NIR detuning paired with telecom detuning δ: sum_constant - δ.
    double sum_constant = 0.0;
    // Frequency-independent NIR survival (source and memory losses).
    double baseline_survival = 1.0;
    ScanBand band;

    void validate() const;
    double nir_detuning(double telecom_detuning) const { return sum_constant - telecom_detuning; }
};

struct MemoryAcceptanceModel
{
    std::array<double, 2> centers{};
    std::array<std::complex<double>, 2> amplitudes{};
    double linewidth = 0.0;

    void validate() const;
};

// Relative telecom rate with telecom-side notches applied.
double telecom_spectrum(const PathwaySpectrumModel& model,
                        const std::vector<AbsorptionFeature>& features,
                        double detuning);
double telecom_spectrum(const JointSpectralModel& model, double detuning);

// Survival probability of the NIR partner at NIR detuning.
double nir_survival(const JointSpectralModel& model, double nir_detuning);

struct HeraldingPoint
{
    double cavity_detuning = 0.0;
    double rate = 0.0;          // ∫ T_cav·s_tel, arbitrary units
    std::optional<double> eta;  // empty when rate is below the numeric floor
};

inline constexpr double kRateFloor = 1e-300;

HeraldingPoint heralding_vs_cavity_detuning(const JointSpectralModel& joint,
                                            const optics::CavitySpec& cavity,
                                            double cavity_detuning);

// Same as above over many cavity detunings, sharing the spectral grid.
std::vector<HeraldingPoint> heralding_scan(const JointSpectralModel& joint,
                                           const optics::CavitySpec& cavity,
                                           const std::vector<double>& cavity_detunings);

// A1/(δ-δ1+iΓ/2) - A2/(δ-δ2+iΓ/2).
std::complex<double> memory_coupling(const MemoryAcceptanceModel& model, double detuning);

// |memory_coupling|² normalized to its global maximum.
double memory_efficiency_vs_detuning(const MemoryAcceptanceModel& model, double detuning);

// Global maximum of |memory_coupling|², used for normalization.
double memory_coupling_peak(const MemoryAcceptanceModel& model);

struct OperatingPoint
{
    double cavity_detuning = 0.0;
    double score = 0.0;
    double eta = 0.0;
    double rate = 0.0;
    double memory_efficiency = 0.0;
};

// Score at one cavity detuning: η · rate · memory efficiency at the paired NIR detuning.
double operating_score(const JointSpectralModel& joint,
                       const optics::CavitySpec& cavity,
                       const MemoryAcceptanceModel& memory,
                       double cavity_detuning);

// Grid argmax of the score over the scan band (ties toward smaller |δ_c|), refined
// by golden-section search around the best grid point.
OperatingPoint select_operating_point(const JointSpectralModel& joint,
                                      const optics::CavitySpec& cavity,
                                      const MemoryAcceptanceModel& memory,
                                      double scan_step = 5e6);

} // namespace qrnode::spectra
