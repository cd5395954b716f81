#pragma once

// Phenomenological models of the repeater node hardware: source, memory,
// detectors and the memory timing sequence. SI units throughout.

#include "qrnode/optics.hpp"

#include <string>

namespace qrnode::node {

struct SourceParams
{
    double telecom_rate = 0.0;     // heralding detections per second
    double heralding_eta = 0.0;    // ⟨n⟩ of the heralded NIR photon
    double werner_a = 1.0;         // intrinsic pair-state purity
    double input_bandwidth = 0.0;  // spectral FWHM of the NIR photon entering the memory, Hz
    optics::CavitySpec telecom_cavity;

    void validate() const;
};

// Retrieved-photon intensity envelope: onset + Gaussian(rise_sigma) ⊛ Exp(decay_tau).
struct RetrievedPulse
{
    double onset = 0.0;
    double rise_sigma = 0.0;
    double decay_tau = 0.0;

    void validate() const;

    // Probability density at time t (relative to the retrieval edge), with an extra
    // Gaussian jitter of standard deviation jitter_sigma folded into the rise.
    double pdf(double t, double jitter_sigma = 0.0) const;
    double cdf(double t, double jitter_sigma = 0.0) const;
    double mode(double jitter_sigma = 0.0) const;
    // Fraction of the pulse inside a window of the given width centred on the mode.
    double capture(double width, double jitter_sigma = 0.0) const;
    // Intensity FWHM of the envelope.
    double fwhm(double jitter_sigma = 0.0) const;
};

struct MemoryParams
{
    double eta0_internal = 0.0;     // storage efficiency at the first retrieval
    double tau_coherence = 0.0;
    double retrieval_delay = 0.0;   // extra storage time beyond the first retrieval edge
    double noise_per_trial = 0.0;   // noise probability per trial inside one detection window
    RetrievedPulse output_pulse;
    double control_rabi_peak = 0.0; // rad/s
    double interface_transmission = 1.0;
    double filter_transmission = 1.0;

    void validate() const;
    double output_pulse_fwhm_t() const { return output_pulse.fwhm(); }
};

enum class DetectorKind { SNSPD, SPAD };
enum class JitterConvention { Fwhm, Sigma };

struct DetectorParams
{
    double efficiency = 1.0;
    double jitter = 0.0; // quoted value, interpreted per `convention`
    JitterConvention convention = JitterConvention::Fwhm;
    DetectorKind label = DetectorKind::SPAD;

    void validate() const;
    double jitter_sigma() const;
};

struct TimingConfig
{
    double op_off = -20e-9;
    double write_pulse_len = 5e-9;
    double write_fall = 0.3e-9;
    double retrieve_at = 55e-9;
    double op_on = 150e-9;
    double clock_period = 2e-6;
    double tag_resolution = 1e-12;
    double bin_width = 256e-12;

    void validate() const; // op_off < 0 < retrieve_at < op_on < clock_period
};

// eta0 · exp(-t/τ), t measured from the first retrieval edge.
double storage_efficiency_at(const MemoryParams& mem, double t);

// snr_n1 · η · efficiency_ratio.
double predict_source_snr(double snr_n1, double eta, double efficiency_ratio);

struct ControlReference
{
    double rabi = 0.0;      // rad/s
    double bandwidth = 0.0; // Hz
    double exponent = 2.0;
};

// B_ref · (Ω_c/Ω_ref)^exponent.
double memory_bandwidth_from_control(const MemoryParams& mem, const ControlReference& ref);

// η · η_storage(retrieval_delay) · filter · qst · detector efficiency · window capture.
double end_to_end_detection_probability(const SourceParams& src, const MemoryParams& mem,
                                        const DetectorParams& det, double qst_transmission,
                                        double window_capture);

} // namespace qrnode::node
