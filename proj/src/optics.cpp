#include "qrnode/optics.hpp"

#include "qrnode/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>

namespace qrnode::optics {

namespace {

// Map detuning into (-fsr/2, fsr/2].
double wrap(double detuning, double fsr)
{
    double x = std::fmod(detuning, fsr);
    if (x > fsr / 2)
        x -= fsr;
    else if (x <= -fsr / 2)
        x += fsr;
    return x;
}

double normalized_response(const FilterCascade& cascade, double detuning)
{
    double t = 1.0;
    for (const auto& st : cascade.stages)
        t *= std::pow(cavity_transmission(st.cavity, detuning), st.passes);
    return t;
}

// Linear interpolation of the x where y crosses `level` between i and i+1.
double crossing(const std::vector<double>& y, std::size_t i, double level)
{
    double y0 = y[i], y1 = y[i + 1];
    if (y1 == y0)
        return static_cast<double>(i);
    return static_cast<double>(i) + (level - y0) / (y1 - y0);
}

// FFTW planning is not reentrant; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwPlanDeleter
{
    void operator()(fftw_plan_s* p) const
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};

fftw_plan_s* make_plan(std::size_t n, fftw_complex* buf)
{
    std::lock_guard lock(planner_mutex());
    return fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
}

} // namespace

void CavitySpec::validate() const
{
    if (!(fwhm > 0.0 && fwhm < fsr))
        throw DomainError("cavity requires 0 < fwhm < fsr");
}

double cavity_transmission(const CavitySpec& cavity, double detuning)
{
    double d = wrap(detuning - cavity.center_detuning, cavity.fsr);
    double x = 2.0 * d / cavity.fwhm;
    return 1.0 / (1.0 + x * x);
}

void FilterCascade::validate() const
{
    if (stages.empty())
        throw DomainError("filter cascade has no stages");
    for (const auto& st : stages) {
        st.cavity.validate();
        if (st.passes < 1)
            throw DomainError("filter stage needs at least one pass");
    }
    if (!(broadband_transmission > 0.0 && broadband_transmission <= 1.0))
        throw DomainError("broadband transmission must lie in (0, 1]");
}

int FilterCascade::total_passes() const
{
    int n = 0;
    for (const auto& st : stages)
        n += st.passes;
    return n;
}

double cascade_transmission(const FilterCascade& cascade, double detuning)
{
    return cascade.broadband_transmission * normalized_response(cascade, detuning);
}

double cascade_suppression_db(const FilterCascade& cascade, double detuning)
{
    double db = 0.0;
    for (const auto& st : cascade.stages)
        db += st.passes * -10.0 * std::log10(cavity_transmission(st.cavity, detuning));
    return db;
}

double identical_passes_fwhm(double fwhm, int passes)
{
    return fwhm * std::sqrt(std::pow(2.0, 1.0 / passes) - 1.0);
}

double cascade_effective_fwhm(const FilterCascade& cascade)
{
    cascade.validate();
    double fsr = std::numeric_limits<double>::infinity();
    double narrowest = fsr;
    for (const auto& st : cascade.stages) {
        fsr = std::min(fsr, st.cavity.fsr);
        narrowest = std::min(narrowest, st.cavity.fwhm);
    }

    // Peak search on a grid fine compared to the narrowest stage, then golden refinement.
    const int n = 20001;
    double lo = -fsr / 2, step = fsr / (n - 1);
    double best_x = 0.0, best = -1.0;
    for (int i = 0; i < n; ++i) {
        double x = lo + step * i;
        double r = normalized_response(cascade, x);
        if (r > best) {
            best = r;
            best_x = x;
        }
    }
    double a = best_x - step, b = best_x + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && b - a > 1e-9 * narrowest; ++it) {
        double c = b - g * (b - a), d = a + g * (b - a);
        if (normalized_response(cascade, c) > normalized_response(cascade, d))
            b = d;
        else
            a = c;
    }
    double peak_x = 0.5 * (a + b);
    double half = 0.5 * normalized_response(cascade, peak_x);

    auto bisect = [&](double inside, double outside) {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (inside + outside);
            if (normalized_response(cascade, mid) >= half)
                inside = mid;
            else
                outside = mid;
        }
        return 0.5 * (inside + outside);
    };
    double right = bisect(peak_x, peak_x + fsr / 2);
    double left = bisect(peak_x, peak_x - fsr / 2);
    return right - left;
}

void PulseShape::validate() const
{
    if (samples.size() < 16)
        throw DomainError("pulse needs at least 16 samples");
    if (!(dt > 0.0))
        throw DomainError("pulse time step must be positive");
    for (double s : samples)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw DomainError("pulse samples must be finite and non-negative");
    double e = energy();
    if (!(e > 0.0) || !std::isfinite(e))
        throw DomainError("pulse energy must be finite and positive");
}

double PulseShape::energy() const
{
    double e = 0.0;
    for (double s : samples)
        e += s * s;
    return e * dt;
}

PulseShape gaussian_pulse(double fwhm_t, double dt, double span)
{
    if (!(fwhm_t > 0.0) || !(dt > 0.0) || !(dt < fwhm_t / 8.0))
        throw DomainError("gaussian pulse needs dt < fwhm_t/8");
    if (!(span > 4.0 * fwhm_t))
        throw DomainError("gaussian pulse needs span > 4·fwhm_t");

    auto n = static_cast<std::size_t>(std::ceil(span / dt)) + 1;
    PulseShape p;
    p.dt = dt;
    p.t0 = -dt * static_cast<double>(n - 1) / 2.0;
    p.samples.resize(n);
    // Amplitude exp(-2 ln2 t²/T²) gives intensity FWHM T.
    const double k = 2.0 * std::log(2.0) / (fwhm_t * fwhm_t);
    for (std::size_t i = 0; i < n; ++i) {
        double t = p.time_at(i);
        p.samples[i] = std::exp(-k * t * t);
    }
    return p;
}

double half_max_width(const std::vector<double>& y, double dx)
{
    if (y.size() < 3)
        throw NumericalError("too few points for a width");
    auto peak_it = std::max_element(y.begin(), y.end());
    auto peak = static_cast<std::size_t>(peak_it - y.begin());
    if (peak == 0 || peak + 1 == y.size())
        throw NumericalError("peak at the edge of the band");
    double half = *peak_it / 2.0;

    std::size_t r = peak;
    while (r + 1 < y.size() && y[r + 1] >= half)
        ++r;
    if (r + 1 == y.size())
        throw NumericalError("half-maximum crossing outside the band");
    std::size_t l = peak;
    while (l > 0 && y[l - 1] >= half)
        --l;
    if (l == 0)
        throw NumericalError("half-maximum crossing outside the band");

    double xr = crossing(y, r, half);
    double xl = crossing(y, l - 1, half);
    return (xr - xl) * dx;
}

double intensity_fwhm(const PulseShape& pulse)
{
    std::vector<double> intensity(pulse.samples.size());
    std::transform(pulse.samples.begin(), pulse.samples.end(), intensity.begin(), [](double s) { return s * s; });
    return half_max_width(intensity, pulse.dt);
}

double Spectrum::energy() const
{
    double e = 0.0;
    for (double p : power)
        e += p;
    return e * df;
}

Spectrum spectrum_of(const PulseShape& pulse, const SpectrumOptions& options)
{
    pulse.validate();
    std::size_t n = 1;
    while (n < std::max(options.min_length, pulse.samples.size()))
        n <<= 1;

    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(buf, fftw_free);
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(make_plan(n, buf));
    for (std::size_t i = 0; i < n; ++i) {
        buf[i][0] = i < pulse.samples.size() ? pulse.samples[i] : 0.0;
        buf[i][1] = 0.0;
    }
    fftw_execute(plan.get());

    Spectrum s;
    s.df = 1.0 / (static_cast<double>(n) * pulse.dt);
    s.frequency.resize(n);
    s.power.resize(n);
    // The time origin only contributes a phase, so |Ẽ|² ignores t0.
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t src = (k + n / 2) % n;
        double re = buf[src][0] * pulse.dt, im = buf[src][1] * pulse.dt;
        s.frequency[k] = (static_cast<double>(k) - static_cast<double>(n / 2)) * s.df;
        s.power[k] = re * re + im * im;
    }
    return s;
}

double fwhm_of(const Spectrum& spectrum)
{
    return half_max_width(spectrum.power, spectrum.df);
}

} // namespace qrnode::optics
