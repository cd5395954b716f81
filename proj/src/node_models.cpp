#include "qrnode/node_models.hpp"

#include "qrnode/errors.hpp"

#include <cmath>

namespace qrnode::node {

namespace {

constexpr double kFwhmToSigma = 2.3548200450309493; // 2√(2 ln2)

double norm_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

bool in_unit_interval(double x)
{
    return x > 0.0 && x <= 1.0;
}

// Argmax of a unimodal function on [a, b].
template <class F>
double golden_max(F f, double a, double b)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && b - a > 1e-18; ++it) {
        double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) > f(d))
            b = d;
        else
            a = c;
    }
    return 0.5 * (a + b);
}

} // namespace

void SourceParams::validate() const
{
    if (!(telecom_rate > 0.0))
        throw DomainError("telecom rate must be positive");
    if (!in_unit_interval(heralding_eta))
        throw DomainError("heralding efficiency must lie in (0, 1]");
    if (!(werner_a >= 0.0 && werner_a <= 1.0))
        throw DomainError("source Werner parameter must lie in [0, 1]");
    if (!(input_bandwidth > 0.0))
        throw DomainError("source input bandwidth must be positive");
    telecom_cavity.validate();
}

void RetrievedPulse::validate() const
{
    if (!(rise_sigma > 0.0) || !(decay_tau > 0.0))
        throw DomainError("retrieved pulse needs positive rise and decay constants");
    if (!(onset >= 0.0))
        throw DomainError("retrieved pulse onset must be non-negative");
}

double RetrievedPulse::pdf(double t, double jitter_sigma) const
{
    const double s = std::hypot(rise_sigma, jitter_sigma);
    const double x = t - onset;
    const double z = x / s - s / decay_tau;
    if (z < -38.0)
        return 0.0;
    return std::exp(s * s / (2.0 * decay_tau * decay_tau) - x / decay_tau) * norm_cdf(z) / decay_tau;
}

double RetrievedPulse::cdf(double t, double jitter_sigma) const
{
    const double s = std::hypot(rise_sigma, jitter_sigma);
    const double x = t - onset;
    const double z = x / s - s / decay_tau;
    double tail = z < -38.0 ? 0.0 : std::exp(s * s / (2.0 * decay_tau * decay_tau) - x / decay_tau) * norm_cdf(z);
    return norm_cdf(x / s) - tail;
}

double RetrievedPulse::mode(double jitter_sigma) const
{
    const double s = std::hypot(rise_sigma, jitter_sigma);
    return golden_max([&](double t) { return pdf(t, jitter_sigma); }, onset - 6.0 * s, onset + 6.0 * s + decay_tau);
}

double RetrievedPulse::capture(double width, double jitter_sigma) const
{
    const double m = mode(jitter_sigma);
    return cdf(m + width / 2.0, jitter_sigma) - cdf(m - width / 2.0, jitter_sigma);
}

double RetrievedPulse::fwhm(double jitter_sigma) const
{
    const double m = mode(jitter_sigma);
    const double half = pdf(m, jitter_sigma) / 2.0;
    const double s = std::hypot(rise_sigma, jitter_sigma);
    auto bisect = [&](double inside, double outside) {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (inside + outside);
            if (pdf(mid, jitter_sigma) >= half)
                inside = mid;
            else
                outside = mid;
        }
        return 0.5 * (inside + outside);
    };
    return bisect(m, m + 20.0 * (s + decay_tau)) - bisect(m, m - 20.0 * s);
}

void MemoryParams::validate() const
{
    if (!in_unit_interval(eta0_internal))
        throw DomainError("eta0_internal must lie in (0, 1]");
    if (!(tau_coherence > 0.0))
        throw DomainError("coherence time must be positive");
    if (!(retrieval_delay >= 0.0))
        throw DomainError("retrieval delay must be non-negative");
    if (!(noise_per_trial >= 0.0 && noise_per_trial <= 1e-2))
        throw DomainError("noise per trial must lie in [0, 1e-2]");
    if (!in_unit_interval(interface_transmission) || !in_unit_interval(filter_transmission))
        throw DomainError("memory transmissions must lie in (0, 1]");
    if (!(control_rabi_peak > 0.0))
        throw DomainError("control Rabi frequency must be positive");
    output_pulse.validate();
}

void DetectorParams::validate() const
{
    if (!in_unit_interval(efficiency))
        throw DomainError("detector efficiency must lie in (0, 1]");
    if (!(jitter >= 0.0))
        throw DomainError("detector jitter must be non-negative");
}

double DetectorParams::jitter_sigma() const
{
    return convention == JitterConvention::Fwhm ? jitter / kFwhmToSigma : jitter;
}

void TimingConfig::validate() const
{
    if (!(op_off < 0.0 && 0.0 < retrieve_at && retrieve_at < op_on && op_on < clock_period))
        throw DomainError("timing requires op_off < 0 < retrieve_at < op_on < clock_period");
    if (!(write_pulse_len > 0.0) || !(write_fall >= 0.0))
        throw DomainError("write pulse length must be positive");
    if (!(tag_resolution > 0.0) || !(bin_width > 0.0))
        throw DomainError("tag resolution and bin width must be positive");
}

double storage_efficiency_at(const MemoryParams& mem, double t)
{
    if (!(t >= 0.0))
        throw DomainError("storage time must be non-negative");
    return mem.eta0_internal * std::exp(-t / mem.tau_coherence);
}

double predict_source_snr(double snr_n1, double eta, double efficiency_ratio)
{
    if (!(snr_n1 > 0.0) || !(eta > 0.0) || !(efficiency_ratio > 0.0))
        throw DomainError("SNR prediction needs positive inputs");
    return snr_n1 * eta * efficiency_ratio;
}

double memory_bandwidth_from_control(const MemoryParams& mem, const ControlReference& ref)
{
    if (!(ref.rabi > 0.0) || !(ref.bandwidth > 0.0))
        throw DomainError("control reference needs positive Rabi frequency and bandwidth");
    return ref.bandwidth * std::pow(mem.control_rabi_peak / ref.rabi, ref.exponent);
}

double end_to_end_detection_probability(const SourceParams& src, const MemoryParams& mem,
                                        const DetectorParams& det, double qst_transmission,
                                        double window_capture)
{
    for (double f : {src.heralding_eta, mem.filter_transmission, det.efficiency, qst_transmission, window_capture})
        if (!(f >= 0.0 && f <= 1.0))
            throw DomainError("efficiency factors must lie in [0, 1]");
    return src.heralding_eta * storage_efficiency_at(mem, mem.retrieval_delay) * mem.filter_transmission *
           qst_transmission * det.efficiency * window_capture;
}

} // namespace qrnode::node
