#pragma once

// Cavity filters and pulse/spectrum analysis. All frequencies in Hz, times in s.

#include <cstddef>
#include <numbers>
#include <vector>

namespace qrnode::optics {

// Time-bandwidth product of a transform-limited Gaussian (intensity FWHMs): 2 ln2 / π.
inline constexpr double kGaussianTimeBandwidth = 2.0 * std::numbers::ln2 / std::numbers::pi;

struct CavitySpec
{
    double fwhm = 0.0;
    double fsr = 0.0;
    double center_detuning = 0.0;

    void validate() const; // 0 < fwhm < fsr
};

// FSR-periodized Lorentzian intensity transmission, peak 1.
double cavity_transmission(const CavitySpec& cavity, double detuning);

struct FilterStage
{
    CavitySpec cavity;
    int passes = 1;
};

struct FilterCascade
{
    std::vector<FilterStage> stages;
    double broadband_transmission = 1.0;

    void validate() const;
    int total_passes() const;
};

// Product of all pass transmissions times the broadband factor.
double cascade_transmission(const FilterCascade& cascade, double detuning);

// Σ over passes of -10 log10 T (broadband loss excluded).
double cascade_suppression_db(const FilterCascade& cascade, double detuning);

// Full width of the normalized product response at half its peak, found by
// bisection on either side of the peak.
double cascade_effective_fwhm(const FilterCascade& cascade);

// Closed form for N identical co-centered Lorentzian passes.
double identical_passes_fwhm(double fwhm, int passes);

// Real amplitude envelope sampled on a uniform grid; intensity is samples².
struct PulseShape
{
    std::vector<double> samples;
    double dt = 0.0;
    double t0 = 0.0;

    void validate() const;
    double energy() const; // Σ samples²·dt
    double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

// Gaussian pulse whose intensity FWHM is fwhm_t, centred in a window of length span.
PulseShape gaussian_pulse(double fwhm_t, double dt, double span);

// FWHM of the sampled intensity samples².
double intensity_fwhm(const PulseShape& pulse);

// Power spectral density |Ẽ(f)|² on an fftshift-ed grid.
struct Spectrum
{
    std::vector<double> frequency;
    std::vector<double> power;
    double df = 0.0;

    double energy() const; // Σ power·df
};

struct SpectrumOptions
{
    // Transforms are zero-padded to a power of two no shorter than this.
    std::size_t min_length = std::size_t{1} << 15;
};

Spectrum spectrum_of(const PulseShape& pulse, const SpectrumOptions& options = {});

// Half-maximum crossing width with linear interpolation between straddling bins.
// Throws NumericalError if the peak or a crossing touches the band edge.
double fwhm_of(const Spectrum& spectrum);

// Generic half-maximum width on a uniform grid (x spacing dx).
double half_max_width(const std::vector<double>& y, double dx);

} // namespace qrnode::optics
