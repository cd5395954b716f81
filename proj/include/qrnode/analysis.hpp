#pragma once

// Everything computed from histograms and tomography counts.

#include "qrnode/histogram.hpp"
#include "qrnode/quantum.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qrnode::analysis {

struct WindowSpec
{
    double signal_start = 0.0;
    double signal_width = 0.0;
    double noise_start = 0.0;
    double noise_width = 0.0;

    void validate() const; // disjoint, positive widths
};

// Counts in [start, start+width); bins cut by the edges contribute their overlap fraction.
double window_sum(const Histogram& hist, double start, double width);

// Peak of the histogram after a centred moving average of `smoothing_bins`, refined
// to sub-bin precision by a parabola through the three highest smoothed points.
// Optionally restricted to bins overlapping [search_start, search_end).
double peak_center(const Histogram& hist, int smoothing_bins = 5, double search_start = 0.0,
                   double search_end = 0.0);

// Window of the given width centred on `center`, plus a noise window.
WindowSpec centered_window(double center, double width, double noise_start, double noise_width);

struct SnrResult
{
    double snr = 0.0;
    double raw_counts = 0.0;     // signal window, noise included
    double signal_counts = 0.0;  // raw minus expected noise
    double noise_rate = 0.0;     // counts per second of histogram time
    double noise_counts = 0.0;   // noise expected in the signal window
    bool lower_bound = false;    // no noise counts observed; one count assumed
};

SnrResult extract_snr(const Histogram& hist, const WindowSpec& w);

struct Transmissions
{
    double memory_path = 1.0; // transmission seen by retrieved photons
    double input_path = 1.0;  // transmission seen by the pass-through input
};

struct EfficiencyResult
{
    double efficiency = 0.0;
    double sigma = 0.0;
    double retrieved_counts = 0.0;
    double input_counts = 0.0;
};

// Noise-subtracted retrieved counts over back-propagated input counts.
// `memory_window` uses signal_* for the retrieved pulse and noise_* for the background.
EfficiencyResult internal_storage_efficiency(const Histogram& hist_memory, const WindowSpec& memory_window,
                                             const Histogram& hist_input, double input_start, double input_width,
                                             const Transmissions& transmissions);

// Integrated input counts / (n_trials · path transmission · detector efficiency).
double mean_photon_number(const Histogram& hist_input, double input_start, double input_width,
                          double transmission, double detector_efficiency, std::uint64_t n_trials);

struct DecayPoint
{
    double t = 0.0;
    double y = 0.0;
    double sigma = 0.0;
};

struct ExponentialFit
{
    double amplitude = 0.0;
    double tau = 0.0;
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero(); // (amplitude, tau)
    double tau_sigma = 0.0;
    bool non_decaying = false;
    std::vector<std::size_t> excluded; // indices dropped for y <= 0
    std::vector<std::string> warnings;
};

// Weighted least squares on log y, then Gauss-Newton refinement on y.
ExponentialFit fit_exponential(std::span<const DecayPoint> points);

struct TomographyOptions
{
    int max_iterations = 2000;
    double gradient_tol = 1e-8; // on the count-normalized negative log-likelihood
    double step_tol = 1e-10;
};

struct TomographyResult
{
    quantum::DensityMatrix rho = quantum::maximally_mixed();
    double fidelity_to_target = 0.0;
    double log_likelihood = 0.0;
    double initial_log_likelihood = 0.0;
    bool converged = false;
    int iterations = 0;
    quantum::DensityMatrix initial = quantum::maximally_mixed();
};

// Poisson log-likelihood Σ n_k log μ_k - μ_k, with the intensity profiled out.
double tomography_log_likelihood(const quantum::Matrix4& rho, std::span<const double> counts,
                                 std::span<const quantum::MeasurementSetting> settings);

// Linear inversion of counts to a Hermitian matrix, projected onto the PSD cone.
quantum::DensityMatrix linear_inversion(std::span<const double> counts,
                                        std::span<const quantum::MeasurementSetting> settings);

TomographyResult mle_tomography(std::span<const double> counts,
                                std::span<const quantum::MeasurementSetting> settings,
                                const quantum::DensityMatrix& target = quantum::bell_phi_plus(),
                                const TomographyOptions& options = {});

// Percentile of the MLE fidelity over Poisson-resampled counts (lower bound hook).
double bootstrap_fidelity_percentile(std::span<const double> counts,
                                     std::span<const quantum::MeasurementSetting> settings,
                                     int resamples, double percentile, std::uint64_t seed,
                                     const quantum::DensityMatrix& target = quantum::bell_phi_plus());

struct SweepCorrections
{
    double qst = 0.90;
    double detector = 0.65;
    double vv_fraction = 0.50;

    double product() const { return qst * detector * vv_fraction; }
};

struct SweepResult
{
    std::vector<double> window_sizes;
    std::vector<double> rates;        // pairs per second
    std::vector<double> fidelities;
    std::vector<double> per_trial_success;
    std::vector<double> snr;
};

// Windows centred on `center`, growing symmetrically. Per-trial success uses the
// raw counts captured in the window; fidelity uses the noise-subtracted SNR.
SweepResult window_sweep(const Histogram& hist, double center, std::span<const double> window_sizes,
                         double noise_start, double noise_width, const SweepCorrections& corrections,
                         double trial_rate);

enum class CrossingStatus { Crossed, NeverCrosses, AlreadyBelow };

struct UtilityResult
{
    double time = 0.0; // crossing time, or last sampled time for NeverCrosses
    CrossingStatus status = CrossingStatus::Crossed;
};

// Non-increasing least-squares fit (pool adjacent violators).
std::vector<double> isotonic_decreasing(std::span<const double> y);

UtilityResult utility_time(std::span<const double> times, std::span<const double> fidelities, double threshold);

// Fidelity vs storage time when only the signal decays: F(SNR0·exp(-t/τ)).
std::vector<double> model_fidelity_curve(double snr0, double tau, std::span<const double> times);

} // namespace qrnode::analysis
