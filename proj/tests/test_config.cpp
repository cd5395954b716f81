#include "qrnode/config.hpp"
#include "qrnode/errors.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace qrnode;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error_path(const std::string& text)
{
    try {
        config::parse(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

} // namespace

TEST_CASE("the shipped defaults file equals the built-in defaults")
{
    auto file = config::load(QRNODE_SOURCE_DIR "/config/default_node.json");
    CHECK(config::to_json(file) == config::to_json(config::defaults()));
    CHECK(config::config_hash(file) == config::config_hash(config::defaults()));
    CHECK_NOTHROW(file.validate());
}

TEST_CASE("defaults carry the measured values")
{
    auto c = config::defaults();
    CHECK(c.source.telecom_rate == 2.1e5);
    CHECK(c.source.heralding_eta == 0.20);
    CHECK(c.memory.eta0_internal == 0.052);
    CHECK(c.memory.tau_coherence == 2.6e-6);
    CHECK(c.memory.noise_per_trial == 8.8e-5);
    CHECK(c.solo.mean_photon_number == 0.32);
    CHECK(c.solo.eta0_internal == 0.095);
    CHECK(c.analysis.detection_window == doctest::Approx(2.82e-9).epsilon(1e-15));
    CHECK(c.filter.cascade.stages.size() == 3);
    CHECK(c.filter.cascade.total_passes() == 6);
    CHECK(c.timing.bin_width == doctest::Approx(256e-12).epsilon(1e-15));
    CHECK(c.tomography_settings().size() == 16);
    CHECK(c.control_reference.rabi == doctest::Approx(2.0 * M_PI * 152e6));
}

TEST_CASE("round trip is exact")
{
    auto a = config::defaults();
    json j = config::to_json(a);
    auto b = config::from_json(j);
    CHECK(config::to_json(b) == j);
    CHECK(config::config_hash(a) == config::config_hash(b));
    // Unit conversions come back as the written decimals.
    CHECK(j["analysis"]["efficiency_window_ns"].get<double>() == 30.0);
    CHECK(j["memory"]["tau_coherence_us"].get<double>() == 2.6);

    auto c = config::parse(j.dump(2));
    CHECK(config::to_json(c) == j);
}

TEST_CASE("hash is stable under key reordering and sensitive to values")
{
    auto text = read_file(QRNODE_SOURCE_DIR "/config/default_node.json");
    auto a = config::parse(text);
    auto b = config::parse(R"({"workers": 1, "seed": 20240611})");
    CHECK(config::config_hash(a) == config::config_hash(b));
    auto c = config::parse(R"({"seed": 20240612})");
    CHECK(config::config_hash(a) != config::config_hash(c));
    CHECK(config::config_hash(a).size() == 16);
}

TEST_CASE("partial documents merge over the defaults and allow comments")
{
    auto c = config::parse(R"({
        // a shorter coherence time
        "memory": { "tau_coherence_us": 1.3 }
    })");
    CHECK(c.memory.tau_coherence == doctest::Approx(1.3e-6));
    CHECK(c.memory.eta0_internal == 0.052);
}

TEST_CASE("config errors name the offending field")
{
    CHECK(config_error_path(R"({"memory": {"bogus": 1}})") == "memory.bogus");
    CHECK(config_error_path(R"({"surprise": 1})") == "surprise");
    CHECK(config_error_path(R"({"memory": {"tau_coherence_us": -1}})").rfind("memory", 0) == 0);
    CHECK(config_error_path(R"({"memory": {"tau_coherence_us": "long"}})") == "memory.tau_coherence_us");
    CHECK(config_error_path(R"({"source": {"heralding_eta": 1.5}})").rfind("source", 0) == 0);
    CHECK(config_error_path(R"({"detectors": {"nir": {"jitter_convention": "rms"}}})") ==
          "detectors.nir.jitter_convention");
    CHECK(config_error_path(R"({"timing": {"retrieve_at_ns": 500}})").rfind("timing", 0) == 0);
    CHECK(config_error_path("{ not json") == "<document>");

    auto settings = config::to_json(config::defaults())["tomography"]["settings"];
    settings[3] = "HX";
    json doc{{"tomography", {{"settings", settings}}}};
    CHECK(config_error_path(doc.dump()) == "tomography.settings[3]");
}

TEST_CASE("loading a missing file is a config error")
{
    CHECK_THROWS_AS(config::load("/nonexistent/node.json"), ConfigError);
}
