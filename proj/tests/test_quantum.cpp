#include "oracles.hpp"

#include "qrnode/errors.hpp"
#include "qrnode/quantum.hpp"

#include <doctest.h>

#include <set>

using namespace qrnode;
using namespace qrnode::quantum;

TEST_CASE("phi plus has four entries of one half")
{
    auto rho = bell_phi_plus();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
            CHECK(std::abs(rho(r, c) - cplx(corner ? 0.5 : 0.0, 0.0)) < 1e-15);
        }
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("werner endpoints and the 0.775 state")
{
    CHECK((werner_state(1.0).matrix() - bell_phi_plus().matrix()).norm() < 1e-15);
    CHECK((werner_state(0.0).matrix() - Matrix4::Identity() / 4.0).norm() < 1e-15);
    CHECK(fidelity(werner_state(0.7), bell_phi_plus()) == doctest::Approx(0.775).epsilon(1e-12));
    CHECK_THROWS_AS(werner_state(1.1), DomainError);
    CHECK_THROWS_AS(werner_state(-0.1), DomainError);
}

TEST_CASE("fidelity against the closed form and two independent square roots")
{
    CHECK(fidelity(bell_phi_plus(), maximally_mixed()) == doctest::Approx(0.25).epsilon(1e-12));
    for (int i = 0; i <= 100; ++i) {
        double a = i / 100.0;
        auto w = werner_state(a);
        double f = fidelity(w, bell_phi_plus());
        CHECK(std::abs(f - (1.0 + 3.0 * a) / 4.0) < 1e-10);
        CHECK(std::abs(f - oracle::uhlmann_eigen(w.matrix(), bell_phi_plus().matrix())) < 1e-10);
    }
    std::mt19937_64 gen(11);
    for (int k = 0; k < 200; ++k) {
        Matrix4 a = oracle::random_density(gen), b = oracle::random_density(gen);
        DensityMatrix ra(a), rb(b);
        double f = fidelity(ra, rb);
        CHECK(std::abs(f - oracle::uhlmann_denman_beavers(a, b)) < 1e-9);
        CHECK(std::abs(f - fidelity(rb, ra)) < 1e-10);
        CHECK(fidelity(ra, ra) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("fidelity from snr")
{
    CHECK(fidelity_from_snr(9.8) == doctest::Approx(0.873).epsilon(0.001 / 0.873));
    CHECK(fidelity_from_snr(0.0) == doctest::Approx(0.25));
    CHECK(fidelity_from_snr(14.0 / 3.0) == doctest::Approx(0.775).epsilon(1e-12));
    CHECK(fidelity_from_snr(4.667) == doctest::Approx(0.775).epsilon(1e-4));
    CHECK(snr_from_werner(1.0 / 3.0) == doctest::Approx(1.0));
    CHECK(fidelity_from_snr(snr_from_werner(1.0 / 3.0)) == doctest::Approx(0.5));
    CHECK(werner_from_snr(9.8) == doctest::Approx(0.8305).epsilon(1e-4));
    CHECK(snr_from_werner(0.0) == 0.0);
    CHECK(std::isinf(snr_from_werner(1.0)));
    CHECK(werner_from_snr(std::numeric_limits<double>::infinity()) == 1.0);

    // On a grid of Werner states the SNR route equals the Uhlmann route.
    for (int i = 0; i < 100; ++i) {
        double a = i / 100.0;
        double f = fidelity(werner_state(a), bell_phi_plus());
        CHECK(std::abs(fidelity_from_snr(snr_from_werner(a)) - f) < 1e-10);
    }
}

TEST_CASE("chsh maximum")
{
    CHECK(chsh_max(bell_phi_plus()) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(chsh_max(werner_state(0.70)) == doctest::Approx(1.980).epsilon(1e-3));
    CHECK(chsh_max(maximally_mixed()) == doctest::Approx(0.0));
    for (int i = 0; i <= 50; ++i) {
        double a = i / 50.0;
        CHECK(std::abs(chsh_max(werner_state(a)) - 2.0 * std::sqrt(2.0) * a) < 1e-9);
    }
}

TEST_CASE("chsh value for the textbook directions")
{
    auto t = correlation_matrix(bell_phi_plus());
    Eigen::Vector3d z(0, 0, 1), x(1, 0, 0);
    Eigen::Vector3d b0 = (z + x).normalized(), b1 = (z - x).normalized();
    CHECK(chsh_value(t, z, x, b0, b1) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(chsh_value(t, z, x, b0, b1) ==
          doctest::Approx(oracle::chsh_trace(bell_phi_plus().matrix(), z, x, b0, b1)));
}

TEST_CASE("chsh Horodecki value agrees with an angle search")
{
    std::mt19937_64 gen(5);
    for (int k = 0; k < 40; ++k) {
        Matrix4 m = oracle::random_density(gen, 1 + k % 4);
        DensityMatrix rho(m);
        double h = chsh_max(rho);
        auto s = oracle::brute_force_chsh(m, gen, 500, 8);
        CHECK(s.random_max <= h + 1e-9);
        CHECK(s.best <= h + 1e-9);
        CHECK(s.best >= h - 1e-3);
    }
}

TEST_CASE("outcome probabilities")
{
    auto hh = MeasurementSetting::from_labels(Pol::H, Pol::H);
    auto hv = MeasurementSetting::from_labels(Pol::H, Pol::V);
    auto dd = MeasurementSetting::from_labels(Pol::D, Pol::D);
    CHECK(outcome_probability(bell_phi_plus(), hh) == doctest::Approx(0.5));
    CHECK(outcome_probability(bell_phi_plus(), hv) == doctest::Approx(0.0));
    for (double a : {0.0, 0.3, 0.83, 1.0})
        CHECK(outcome_probability(werner_state(a), dd) == doctest::Approx((1.0 + a) / 4.0).epsilon(1e-12));
    // ⟨RR|Φ⁺⟩ = (1 - 1)/(2√2) = 0; the opposite-helicity pair carries the weight.
    auto rr = MeasurementSetting::from_labels(Pol::R, Pol::R);
    auto rl = MeasurementSetting::from_labels(Pol::R, Pol::L);
    CHECK(outcome_probability(bell_phi_plus(), rr) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(outcome_probability(bell_phi_plus(), rl) == doctest::Approx(0.5));
}

TEST_CASE("polarization kets")
{
    CHECK(std::abs(ket(Pol::R)(1) - cplx(0, -1) / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(ket(Pol::L)(1) - cplx(0, 1) / std::sqrt(2.0)) < 1e-15);
    for (Pol p : {Pol::H, Pol::V, Pol::D, Pol::A, Pol::R, Pol::L}) {
        CHECK(ket(p).norm() == doctest::Approx(1.0));
        Eigen::Vector3d b = bloch_vector(p);
        CHECK(b.norm() == doctest::Approx(1.0));
        CHECK((oracle::spin(b) * ket(p) - ket(p)).norm() < 1e-12);
    }
}

TEST_CASE("density matrix validation")
{
    Matrix4 m = Matrix4::Identity() / 4.0;
    m(0, 1) = cplx(0.1, 0.0);
    CHECK_THROWS_AS(DensityMatrix{m}, DomainError);
    CHECK_THROWS_AS(DensityMatrix{Matrix4::Identity()}, DomainError);
    Matrix4 neg = Matrix4::Zero();
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityMatrix{neg}, DomainError);

    std::mt19937_64 gen(3);
    for (int k = 0; k < 1000; ++k) {
        Matrix4 r = oracle::random_density(gen, 1 + k % 4);
        CHECK(check_invariants(r).ok());
        CHECK_NOTHROW(DensityMatrix{r});
    }
}

TEST_CASE("psd square root clamps tiny negatives only")
{
    Matrix4 m = Matrix4::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -5e-11;
    Matrix4 s = psd_sqrt(m);
    CHECK(std::abs(s(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(s(1, 1)) < 1e-12);
    m(1, 1) = -1e-6;
    CHECK_THROWS_AS(psd_sqrt(m), DomainError);

    std::mt19937_64 gen(9);
    Matrix4 r = oracle::random_density(gen);
    CHECK((psd_sqrt(r) - oracle::denman_beavers_sqrt(r)).norm() < 1e-10);
}

TEST_CASE("measurement settings")
{
    CHECK(MeasurementSetting::parse("HD").has_value());
    CHECK(MeasurementSetting::parse("HD")->label == "HD");
    CHECK_FALSE(MeasurementSetting::parse("HX").has_value());
    CHECK_FALSE(MeasurementSetting::parse("H").has_value());
    CHECK_FALSE(MeasurementSetting::parse("HDV").has_value());

    auto s = standard_tomography_settings();
    std::set<std::string> labels;
    for (const auto& m : s)
        labels.insert(m.label);
    CHECK(labels.size() == 16);
    CHECK(informationally_complete(s));
    CHECK_FALSE(informationally_complete(std::span(s).first(15)));

    // Telecom projector occupies the first tensor factor.
    auto hv = MeasurementSetting::from_labels(Pol::H, Pol::V);
    CHECK(std::abs(hv.joint()(1, 1) - cplx(1, 0)) < 1e-15);
}
