#include "qrnode/config.hpp"
#include "qrnode/errors.hpp"
#include "qrnode/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qrnode;
using namespace qrnode::spectra;

namespace {

JointSpectralModel toy_joint()
{
    JointSpectralModel j;
    j.pathways.centers = {-0.4e9, 0.4e9};
    j.pathways.weights = {0.5, 0.5};
    j.pathways.doppler_width = 0.6e9;
    j.sum_constant = 0.4e9;
    j.baseline_survival = 1.0;
    j.band = {-5e9, 5e9, 2e6};
    return j;
}

optics::CavitySpec telecom_cavity()
{
    return {266e6, 15.2e9, 0.0};
}

std::vector<double> grid(double lo, double hi, double step)
{
    std::vector<double> g;
    for (long i = 0; lo + step * static_cast<double>(i) <= hi + 1e-3; ++i)
        g.push_back(lo + step * static_cast<double>(i));
    return g;
}

std::vector<double> local_minima(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] < y[i - 1] && y[i] <= y[i + 1])
            out.push_back(x[i]);
    return out;
}

std::size_t count_local_maxima(const std::vector<double>& y)
{
    std::size_t n = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1])
            ++n;
    return n;
}

} // namespace

TEST_CASE("telecom spectrum peaks and dips")
{
    PathwaySpectrumModel single{{0.3e9, 0.3e9}, {0.5, 0.5}, 0.5e9, ""};
    double c = telecom_spectrum(single, {}, 0.3e9);
    CHECK(c > telecom_spectrum(single, {}, 0.29e9));
    CHECK(c > telecom_spectrum(single, {}, 0.31e9));

    std::vector<AbsorptionFeature> dip{{0.3e9, 0.1e9, 1.0, FeatureTarget::TelecomRate}};
    CHECK(telecom_spectrum(single, dip, 0.3e9) == doctest::Approx(0.0));
}

TEST_CASE("calibrated telecom spectrum has dips at 0, -1.7 and +2 GHz")
{
    auto joint = config::defaults().spectra.joint;
    auto x = grid(-3e9, 3e9, 5e6);
    std::vector<double> y;
    for (double d : x)
        y.push_back(telecom_spectrum(joint, d));
    auto minima = local_minima(x, y);
    REQUIRE(minima.size() == 3);
    CHECK(minima[0] == doctest::Approx(-1.7e9).epsilon(0.1e9 / 1.7e9));
    CHECK(std::abs(minima[1]) < 0.1e9);
    CHECK(minima[2] == doctest::Approx(2.0e9).epsilon(0.1e9 / 2.0e9));
}

TEST_CASE("lossless model heralds with unit efficiency")
{
    auto j = toy_joint();
    for (double dc : {-2e9, -0.4e9, 0.0, 1.1e9, 3e9}) {
        auto p = heralding_vs_cavity_detuning(j, telecom_cavity(), dc);
        REQUIRE(p.eta.has_value());
        CHECK(*p.eta == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("a full NIR absorption dip suppresses heralding")
{
    auto j = toy_joint();
    CHECK(*heralding_vs_cavity_detuning(j, telecom_cavity(), 0.4e9).eta == doctest::Approx(1.0));
    // Telecom detuning 0.4 GHz pairs with NIR detuning 0.
    j.features.push_back({0.0, 1.5e9, 1.0, FeatureTarget::NirSurvival});
    auto p = heralding_vs_cavity_detuning(j, telecom_cavity(), 0.4e9);
    REQUIRE(p.eta.has_value());
    // Only the Lorentzian wings of the telecom cavity reach photons outside the dip.
    CHECK(*p.eta < 0.1);
    for (double dc : grid(-1.2e9, 1.2e9, 0.1e9))
        CHECK(*heralding_vs_cavity_detuning(j, telecom_cavity(), dc).eta >= *p.eta - 1e-12);
    CHECK(*heralding_vs_cavity_detuning(j, telecom_cavity(), -0.8e9).eta > 0.5);
}

TEST_CASE("heralding efficiency against an independent quadrature with a rescaled spectrum")
{
    auto j = config::defaults().spectra.joint;
    auto cav = config::defaults().source.telecom_cavity;
    for (double dc : {-1.3e9, 0.2e9, 1.1e9}) {
        double rate = 0.0, paired = 0.0;
        auto nu = grid(j.band.min, j.band.max, j.band.step);
        for (std::size_t i = 0; i < nu.size(); ++i) {
            double w = (i == 0 || i + 1 == nu.size()) ? 0.5 : 1.0;
            double s = 7.0 * telecom_spectrum(j, nu[i]) * optics::cavity_transmission(cav, nu[i] - dc) * w;
            rate += s;
            paired += s * nir_survival(j, j.nir_detuning(nu[i]));
        }
        auto p = heralding_vs_cavity_detuning(j, cav, dc);
        CHECK(*p.eta == doctest::Approx(paired / rate).epsilon(1e-9));
    }
}

TEST_CASE("heralding efficiency stays in [0, 1] for random models")
{
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 30; ++k) {
        auto j = toy_joint();
        j.band = {-4e9, 4e9, 10e6};
        double w = u(gen);
        j.pathways.weights = {w, 1.0 - w};
        j.baseline_survival = 0.05 + 0.95 * u(gen);
        for (int f = 0; f < 4; ++f)
            j.features.push_back({(u(gen) - 0.5) * 6e9, 0.05e9 + u(gen) * 1e9, u(gen),
                                  f % 2 ? FeatureTarget::NirSurvival : FeatureTarget::TelecomRate});
        for (double dc = -3e9; dc <= 3e9; dc += 0.5e9) {
            auto p = heralding_vs_cavity_detuning(j, telecom_cavity(), dc);
            if (p.eta) {
                CHECK(*p.eta >= 0.0);
                CHECK(*p.eta <= 1.0);
            }
        }
    }
}

TEST_CASE("calibrated efficiency peaks near +1.1 GHz at about 20 percent")
{
    auto cfg = config::defaults();
    auto x = grid(0.6e9, 1.6e9, 10e6);
    auto pts = heralding_scan(cfg.spectra.joint, cfg.source.telecom_cavity, x);
    std::vector<double> eta;
    for (const auto& p : pts)
        eta.push_back(p.eta.value_or(0.0));
    bool found = false;
    for (std::size_t i = 1; i + 1 < eta.size(); ++i)
        if (eta[i] > eta[i - 1] && eta[i] >= eta[i + 1] && std::abs(x[i] - 1.1e9) < 0.3e9) {
            found = true;
            CHECK(eta[i] >= 0.2);
        }
    CHECK(found);
}

TEST_CASE("memory acceptance curve")
{
    auto mem = config::defaults().spectra.memory;
    CHECK(memory_efficiency_vs_detuning(mem, 1e12) < 1e-6);
    CHECK(memory_efficiency_vs_detuning(mem, -1e12) < 1e-6);

    auto x = grid(-3e9, 3e9, 6e9 / 1e4);
    std::vector<double> y;
    for (double d : x) {
        double e = memory_efficiency_vs_detuning(mem, d);
        CHECK(e <= 1.0 + 1e-9);
        y.push_back(e);
    }
    CHECK(count_local_maxima(y) == 2);
}

TEST_CASE("opposite-sign amplitudes give one interference minimum at the midpoint")
{
    MemoryAcceptanceModel m;
    m.centers = {-0.5e9, 0.5e9};
    m.amplitudes = {1.0, -1.0};
    m.linewidth = 0.2e9;
    for (double d : {0.1e9, 0.37e9, 1.3e9})
        CHECK(memory_efficiency_vs_detuning(m, d) ==
              doctest::Approx(memory_efficiency_vs_detuning(m, -d)).epsilon(1e-12));
    // The dispersive parts cancel exactly at the midpoint.
    CHECK(std::abs(memory_coupling(m, 0.0).real()) < 1e-25);

    auto x = grid(m.centers[0], m.centers[1], 1e9 / 1e4);
    std::vector<double> y;
    for (double d : x)
        y.push_back(memory_efficiency_vs_detuning(m, d));
    auto minima = local_minima(x, y);
    REQUIRE(minima.size() == 1);
    CHECK(std::abs(minima[0]) < 1e6);

    // With vanishing linewidth the minimum becomes a true zero.
    double previous = 1.0;
    for (double gamma : {0.2e9, 0.05e9, 0.01e9}) {
        m.linewidth = gamma;
        double v = memory_efficiency_vs_detuning(m, 0.0);
        CHECK(v < previous);
        previous = v;
    }
    CHECK(previous < 1e-6);
}

TEST_CASE("operating point selection")
{
    SUBCASE("single pathway without dips lands on the pathway center")
    {
        auto j = toy_joint();
        j.pathways.centers = {0.7e9, 0.7e9};
        j.band = {-3e9, 3e9, 5e6};
        MemoryAcceptanceModel flat;
        flat.centers = {-50e9, -50e9 - 1e6};
        flat.amplitudes = {1.0, 0.0};
        flat.linewidth = 1e12; // memory efficiency is flat across the band
        auto op = select_operating_point(j, telecom_cavity(), flat, 5e6);
        CHECK(op.cavity_detuning == doctest::Approx(0.7e9).epsilon(0.01));
    }
    SUBCASE("calibrated model selects about +1.1 GHz and beats random candidates")
    {
        auto cfg = config::defaults();
        const auto& sp = cfg.spectra;
        auto op = select_operating_point(sp.joint, cfg.source.telecom_cavity, sp.memory, sp.operating_scan_step);
        CHECK(std::abs(op.cavity_detuning - 1.1e9) < 0.3e9);
        CHECK(op.eta >= 0.2);

        std::mt19937_64 gen(31);
        std::uniform_real_distribution<double> u(sp.joint.band.min, sp.joint.band.max);
        std::vector<double> candidates(10000);
        for (auto& c : candidates)
            c = u(gen);
        double best_random = 0.0;
        for (const auto& p : heralding_scan(sp.joint, cfg.source.telecom_cavity, candidates))
            best_random = std::max(best_random, p.eta.value_or(0.0) * p.rate *
                                                    memory_efficiency_vs_detuning(
                                                        sp.memory, sp.joint.nir_detuning(p.cavity_detuning)));
        CHECK(op.score >= best_random * (1.0 - 1e-12));
        CHECK(op.score == doctest::Approx(operating_score(sp.joint, cfg.source.telecom_cavity, sp.memory,
                                                          op.cavity_detuning)));
    }
}

TEST_CASE("model validation")
{
    auto j = toy_joint();
    j.pathways.weights = {0.7, 0.7};
    CHECK_THROWS_AS(j.validate(), DomainError);
    MemoryAcceptanceModel m;
    CHECK_THROWS_AS(m.validate(), DomainError);
}
