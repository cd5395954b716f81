#include "qrnode/errors.hpp"
#include "qrnode/optics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qrnode;
using namespace qrnode::optics;

namespace {

CavitySpec memory_filter_cavity()
{
    return {1.55e9, 60.2e9, 0.0};
}

FilterCascade memory_filter_cascade()
{
    FilterCascade c;
    for (int i = 0; i < 3; ++i)
        c.stages.push_back({memory_filter_cavity(), 2});
    return c;
}

// Lorentzian with its nearest FSR image, written out directly.
double lorentzian_oracle(double fwhm, double fsr, double d)
{
    d = d - fsr * std::round(d / fsr);
    return 1.0 / (1.0 + 4.0 * d * d / (fwhm * fwhm));
}

} // namespace

TEST_CASE("single cavity transmission")
{
    auto c = memory_filter_cavity();
    CHECK(cavity_transmission(c, 0.0) == doctest::Approx(1.0));
    CHECK(cavity_transmission(c, c.fwhm / 2.0) == doctest::Approx(0.5));
    double t = cavity_transmission(c, 6.8347e9);
    CHECK(t == doctest::Approx(0.01270).epsilon(1e-3));
    CHECK(-10.0 * std::log10(t) == doctest::Approx(18.96).epsilon(1e-3));
    CHECK(t == doctest::Approx(lorentzian_oracle(c.fwhm, c.fsr, 6.8347e9)).epsilon(1e-12));
    // Periodic in the free spectral range and even about resonance.
    CHECK(cavity_transmission(c, 6.8347e9 + c.fsr) == doctest::Approx(t).epsilon(1e-9));
    for (double d : {0.1e9, 1e9, 7e9, 25e9})
        CHECK(cavity_transmission(c, d) == doctest::Approx(cavity_transmission(c, -d)).epsilon(1e-12));
}

TEST_CASE("cavity validation")
{
    CHECK_THROWS_AS((CavitySpec{2e9, 1e9, 0}.validate()), DomainError);
    CHECK_THROWS_AS((CavitySpec{0, 1e9, 0}.validate()), DomainError);
    FilterCascade empty;
    CHECK_THROWS_AS(empty.validate(), DomainError);
}

TEST_CASE("cascade suppression")
{
    auto c = memory_filter_cascade();
    double db = cascade_suppression_db(c, 6.8347e9);
    CHECK(db == doctest::Approx(113.8).epsilon(1.0 / 113.8));
    CHECK(db == doctest::Approx(-60.0 * std::log10(lorentzian_oracle(1.55e9, 60.2e9, 6.8347e9))).epsilon(1e-12));
    CHECK(cascade_suppression_db(c, 0.0) == doctest::Approx(0.0));

    FilterCascade single;
    single.stages.push_back({memory_filter_cavity(), 1});
    for (double d : {0.3e9, 2e9, 6.8347e9})
        CHECK(cascade_suppression_db(single, d) == -10.0 * std::log10(cavity_transmission(memory_filter_cavity(), d)));

    // Additive over stages.
    FilterCascade a, b, ab;
    a.stages.push_back({{1.0e9, 40e9, 0.0}, 1});
    b.stages.push_back({{2.5e9, 70e9, 0.1e9}, 3});
    ab.stages = {a.stages[0], b.stages[0]};
    for (double d : {0.0, 0.5e9, 3e9, 6.8347e9})
        CHECK(cascade_suppression_db(ab, d) ==
              doctest::Approx(cascade_suppression_db(a, d) + cascade_suppression_db(b, d)).epsilon(1e-14));

    c.broadband_transmission = 0.35;
    CHECK(cascade_transmission(c, 0.0) == doctest::Approx(0.35));
}

TEST_CASE("cascade widths")
{
    CHECK(identical_passes_fwhm(1.55e9, 1) == doctest::Approx(1.55e9));
    CHECK(identical_passes_fwhm(1.55e9, 6) == doctest::Approx(0.542e9).epsilon(1e-3));
    CHECK(identical_passes_fwhm(1.0e9, 2) == doctest::Approx(0.6436e9).epsilon(1e-4));
    CHECK(cascade_effective_fwhm(memory_filter_cascade()) ==
          doctest::Approx(identical_passes_fwhm(1.55e9, 6)).epsilon(1e-6));

    double previous = std::numeric_limits<double>::infinity();
    FilterCascade grow;
    for (int passes = 1; passes <= 8; ++passes) {
        grow.stages = {{memory_filter_cavity(), passes}};
        double w = cascade_effective_fwhm(grow);
        CHECK(w < previous);
        previous = w;
    }
}

TEST_CASE("transform-limited gaussian")
{
    const double fwhm_t = 3.11e-9;
    auto p = gaussian_pulse(fwhm_t, fwhm_t / 64.0, 16.0 * fwhm_t);
    CHECK(intensity_fwhm(p) == doctest::Approx(fwhm_t).epsilon(1e-3));
    auto s = spectrum_of(p);
    double dnu = fwhm_of(s);
    CHECK(dnu == doctest::Approx(142e6).epsilon(0.02));
    CHECK(dnu * intensity_fwhm(p) == doctest::Approx(kGaussianTimeBandwidth).epsilon(0.01));
    CHECK(kGaussianTimeBandwidth == doctest::Approx(2.0 * std::log(2.0) / M_PI).epsilon(1e-12));

    auto p2 = gaussian_pulse(2.0 * fwhm_t, fwhm_t / 64.0, 32.0 * fwhm_t);
    CHECK(fwhm_of(spectrum_of(p2)) == doctest::Approx(dnu / 2.0).epsilon(0.01));

    double analytic = fwhm_t * std::sqrt(M_PI / (4.0 * std::log(2.0)));
    CHECK(p.energy() == doctest::Approx(analytic).epsilon(1e-3));
}

TEST_CASE("input and output bandwidths differ by about 3.3")
{
    auto width = [](double bw) {
        double t = kGaussianTimeBandwidth / bw;
        return fwhm_of(spectrum_of(gaussian_pulse(t, t / 64.0, 16.0 * t)));
    };
    double in = width(201e6), out = width(61e6);
    CHECK(in == doctest::Approx(201e6).epsilon(0.01));
    CHECK(out == doctest::Approx(61e6).epsilon(0.01));
    CHECK(in / out == doctest::Approx(3.3).epsilon(0.01));
}

TEST_CASE("zero padding leaves the spectral width within one bin")
{
    auto p = gaussian_pulse(2e-9, 2e-9 / 32.0, 32e-9);
    auto a = spectrum_of(p, {std::size_t{1} << 14});
    auto b = spectrum_of(p, {std::size_t{1} << 16});
    CHECK(std::abs(fwhm_of(a) - fwhm_of(b)) <= a.df);
}

TEST_CASE("Parseval for random pulses")
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> len(16, 3000);
    for (int k = 0; k < 100; ++k) {
        PulseShape p;
        p.dt = 1e-11 * (1.0 + 0.5 * u(gen));
        p.samples.resize(static_cast<std::size_t>(len(gen)));
        // Envelopes are non-negative amplitudes.
        for (auto& s : p.samples)
            s = std::abs(u(gen));
        auto s = spectrum_of(p, {std::size_t{1} << 12});
        CHECK(s.energy() == doctest::Approx(p.energy()).epsilon(1e-6));
    }
}

TEST_CASE("width errors at the band edge")
{
    std::vector<double> edge{1.0, 0.5, 0.1};
    CHECK_THROWS_AS(half_max_width(edge, 1.0), NumericalError);
    std::vector<double> tri{0.0, 1.0, 2.0, 1.0, 0.0};
    CHECK(half_max_width(tri, 1.0) == doctest::Approx(2.0));
}
