#include "qrnode/spectra.hpp"

#include "qrnode/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qrnode::spectra {

namespace {

const double kFourLn2 = 4.0 * std::log(2.0);

double gaussian(double x, double center, double fwhm)
{
    double u = (x - center) / fwhm;
    return std::exp(-kFourLn2 * u * u);
}

struct Grid
{
    std::vector<double> nu;
    std::vector<double> s_tel;
    std::vector<double> survival;
    double step = 0.0;
};

Grid make_grid(const JointSpectralModel& joint)
{
    Grid g;
    g.step = joint.band.step;
    auto n = static_cast<std::size_t>(std::floor((joint.band.max - joint.band.min) / joint.band.step)) + 1;
    g.nu.resize(n);
    g.s_tel.resize(n);
    g.survival.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double nu = joint.band.min + joint.band.step * static_cast<double>(i);
        g.nu[i] = nu;
        g.s_tel[i] = telecom_spectrum(joint, nu);
        g.survival[i] = nir_survival(joint, joint.nir_detuning(nu));
    }
    return g;
}

HeraldingPoint integrate(const Grid& g, const optics::CavitySpec& cavity, double cavity_detuning)
{
    // Trapezoid rule; endpoints carry half weight.
    double rate = 0.0, paired = 0.0;
    const std::size_t n = g.nu.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        double t = optics::cavity_transmission(cavity, g.nu[i] - cavity_detuning) * g.s_tel[i] * w;
        rate += t;
        paired += t * g.survival[i];
    }
    rate *= g.step;
    paired *= g.step;
    HeraldingPoint p;
    p.cavity_detuning = cavity_detuning;
    p.rate = rate;
    if (rate > kRateFloor)
        p.eta = std::clamp(paired / rate, 0.0, 1.0);
    return p;
}

double score_of(const HeraldingPoint& p, double mem_eff)
{
    return p.eta ? *p.eta * p.rate * mem_eff : 0.0;
}

} // namespace

void PathwaySpectrumModel::validate() const
{
    if (!(doppler_width > 0.0))
        throw DomainError("pathway Doppler width must be positive");
    if (weights[0] < 0.0 || weights[1] < 0.0 || weights[0] + weights[1] <= 0.0)
        throw DomainError("pathway weights must be non-negative with positive sum");
    if (std::abs(weights[0] + weights[1] - 1.0) > 1e-9)
        throw DomainError("pathway weights must sum to 1");
}

void AbsorptionFeature::validate() const
{
    if (!(width > 0.0))
        throw DomainError("absorption feature width must be positive");
    if (!(depth >= 0.0 && depth <= 1.0))
        throw DomainError("absorption feature depth must lie in [0, 1]");
}

double AbsorptionFeature::factor(double detuning) const
{
    return 1.0 - depth * gaussian(detuning, center, width);
}

void JointSpectralModel::validate() const
{
    pathways.validate();
    for (const auto& f : features)
        f.validate();
    if (!(baseline_survival > 0.0 && baseline_survival <= 1.0))
        throw DomainError("baseline NIR survival must lie in (0, 1]");
    if (!(band.step > 0.0) || !(band.max > band.min))
        throw DomainError("spectral band is empty");
}

void MemoryAcceptanceModel::validate() const
{
    if (!(linewidth > 0.0))
        throw DomainError("memory linewidth must be positive");
    if (amplitudes[0] == 0.0 && amplitudes[1] == 0.0)
        throw DomainError("memory amplitudes are both zero");
}

double telecom_spectrum(const PathwaySpectrumModel& model,
                        const std::vector<AbsorptionFeature>& features,
                        double detuning)
{
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        s += model.weights[i] * gaussian(detuning, model.centers[i], model.doppler_width);
    for (const auto& f : features)
        if (f.applies_to == FeatureTarget::TelecomRate)
            s *= f.factor(detuning);
    return std::max(s, 0.0);
}

double telecom_spectrum(const JointSpectralModel& model, double detuning)
{
    return telecom_spectrum(model.pathways, model.features, detuning);
}

double nir_survival(const JointSpectralModel& model, double nir_detuning)
{
    double s = model.baseline_survival;
    for (const auto& f : model.features)
        if (f.applies_to == FeatureTarget::NirSurvival)
            s *= f.factor(nir_detuning);
    return std::clamp(s, 0.0, 1.0);
}

HeraldingPoint heralding_vs_cavity_detuning(const JointSpectralModel& joint,
                                            const optics::CavitySpec& cavity,
                                            double cavity_detuning)
{
    joint.validate();
    cavity.validate();
    return integrate(make_grid(joint), cavity, cavity_detuning);
}

std::vector<HeraldingPoint> heralding_scan(const JointSpectralModel& joint,
                                           const optics::CavitySpec& cavity,
                                           const std::vector<double>& cavity_detunings)
{
    joint.validate();
    cavity.validate();
    Grid g = make_grid(joint);
    std::vector<HeraldingPoint> out;
    out.reserve(cavity_detunings.size());
    for (double d : cavity_detunings)
        out.push_back(integrate(g, cavity, d));
    return out;
}

std::complex<double> memory_coupling(const MemoryAcceptanceModel& model, double detuning)
{
    const std::complex<double> half_width(0.0, model.linewidth / 2.0);
    return model.amplitudes[0] / (detuning - model.centers[0] + half_width) -
           model.amplitudes[1] / (detuning - model.centers[1] + half_width);
}

double memory_coupling_peak(const MemoryAcceptanceModel& model)
{
    model.validate();
    auto f = [&](double x) { return std::norm(memory_coupling(model, x)); };
    // The maxima sit within a few linewidths of the poles; scan there, then refine.
    double best = 0.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (double c : model.centers) {
        const double half_span = 4.0 * model.linewidth;
        const int n = 801;
        double step = 2.0 * half_span / (n - 1);
        double bx = c;
        double bv = -1.0;
        for (int i = 0; i < n; ++i) {
            double x = c - half_span + step * i;
            double v = f(x);
            if (v > bv) {
                bv = v;
                bx = x;
            }
        }
        double a = bx - step, b = bx + step;
        for (int it = 0; it < 100; ++it) {
            double x1 = b - g * (b - a), x2 = a + g * (b - a);
            if (f(x1) > f(x2))
                b = x2;
            else
                a = x1;
        }
        best = std::max({best, bv, f(0.5 * (a + b))});
    }
    return best;
}

double memory_efficiency_vs_detuning(const MemoryAcceptanceModel& model, double detuning)
{
    return std::norm(memory_coupling(model, detuning)) / memory_coupling_peak(model);
}

double operating_score(const JointSpectralModel& joint,
                       const optics::CavitySpec& cavity,
                       const MemoryAcceptanceModel& memory,
                       double cavity_detuning)
{
    HeraldingPoint p = heralding_vs_cavity_detuning(joint, cavity, cavity_detuning);
    return score_of(p, memory_efficiency_vs_detuning(memory, joint.nir_detuning(cavity_detuning)));
}

OperatingPoint select_operating_point(const JointSpectralModel& joint,
                                      const optics::CavitySpec& cavity,
                                      const MemoryAcceptanceModel& memory,
                                      double scan_step)
{
    joint.validate();
    cavity.validate();
    memory.validate();
    if (!(scan_step > 0.0))
        throw DomainError("scan step must be positive");

    Grid g = make_grid(joint);
    const double peak = memory_coupling_peak(memory);
    auto evaluate = [&](double dc) {
        OperatingPoint op;
        HeraldingPoint p = integrate(g, cavity, dc);
        op.cavity_detuning = dc;
        op.rate = p.rate;
        op.eta = p.eta.value_or(0.0);
        op.memory_efficiency = std::norm(memory_coupling(memory, joint.nir_detuning(dc))) / peak;
        op.score = score_of(p, op.memory_efficiency);
        return op;
    };

    auto n = static_cast<std::size_t>(std::floor((joint.band.max - joint.band.min) / scan_step)) + 1;
    OperatingPoint best;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        OperatingPoint op = evaluate(joint.band.min + scan_step * static_cast<double>(i));
        if (!(op.score > 0.0))
            continue;
        if (!found || op.score > best.score ||
            (op.score == best.score && std::abs(op.cavity_detuning) < std::abs(best.cavity_detuning))) {
            best = op;
            found = true;
        }
    }
    if (!found)
        throw NumericalError("no cavity detuning in the band has a positive score");

    double a = std::max(best.cavity_detuning - scan_step, joint.band.min);
    double b = std::min(best.cavity_detuning + scan_step, joint.band.max);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 60; ++it) {
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        if (evaluate(x1).score > evaluate(x2).score)
            b = x2;
        else
            a = x1;
    }
    OperatingPoint refined = evaluate(0.5 * (a + b));
    return refined.score > best.score ? refined : best;
}

} // namespace qrnode::spectra
