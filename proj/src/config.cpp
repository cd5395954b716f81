#include "qrnode/config.hpp"

#include "qrnode/errors.hpp"

#include "default_config.inc"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

namespace qrnode::config {

using nlohmann::json;

namespace {

// File value x maps to SI as x*k (or x/k). Both directions use exact constants
// where possible; from_si searches neighbouring doubles so a loaded value
// serializes to text that loads back to the same bits.
struct Unit
{
    double k;
    bool divide;

    double to_si(double x) const { return divide ? x / k : x * k; }

    double from_si(double v) const
    {
        double x = divide ? v * k : v / k;
        // Prefer the shortest decimal that maps back exactly, so 30e-9 s reads as 30 ns.
        for (int digits = 1; digits <= 17; ++digits) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.*g", digits, x);
            double r = std::strtod(buf, nullptr);
            if (to_si(r) == v)
                return r;
        }
        if (to_si(x) == v)
            return x;
        double up = x, down = x;
        for (int i = 0; i < 16; ++i) {
            up = std::nextafter(up, INFINITY);
            down = std::nextafter(down, -INFINITY);
            if (to_si(up) == v)
                return up;
            if (to_si(down) == v)
                return down;
        }
        return x;
    }
};

constexpr Unit kOne{1.0, false};
constexpr Unit kNs{1e9, true};
constexpr Unit kUs{1e6, true};
constexpr Unit kPs{1e12, true};
constexpr Unit kMHz{1e6, false};
constexpr Unit kGHz{1e9, false};
constexpr Unit kTwoPiMHz{2.0 * std::numbers::pi * 1e6, false};

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

class Section
{
public:
    Section(const json& j, std::string path) : j_(&j), path_(std::move(path))
    {
        if (!j.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    const json& at(const std::string& key)
    {
        seen_.insert(key);
        auto it = j_->find(key);
        if (it == j_->end())
            throw ConfigError(join(path_, key), "missing required key");
        return *it;
    }

    double number(const std::string& key, Unit unit = kOne)
    {
        const json& v = at(key);
        if (!v.is_number())
            throw ConfigError(join(path_, key), "expected a number");
        return unit.to_si(v.get<double>());
    }

    std::int64_t integer(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_integer())
            throw ConfigError(join(path_, key), "expected an integer");
        return v.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ConfigError(join(path_, key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_string())
            throw ConfigError(join(path_, key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, Unit unit = kOne)
    {
        const json& v = at(key);
        if (!v.is_array())
            throw ConfigError(join(path_, key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                throw ConfigError(join(path_, key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(unit.to_si(v[i].get<double>()));
        }
        return out;
    }

    Section child(const std::string& key) { return Section(at(key), join(path_, key)); }

    const std::string& path() const { return path_; }

    void finish() const
    {
        for (const auto& [key, value] : j_->items())
            if (!seen_.contains(key))
                throw ConfigError(join(path_, key), "unknown key");
    }

private:
    const json* j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class Fn>
void checked(const std::string& path, Fn fn)
{
    try {
        fn();
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
}

void require(bool ok, const std::string& path, const std::string& what)
{
    if (!ok)
        throw ConfigError(path, what);
}

optics::CavitySpec read_cavity(Section s, Unit width_unit)
{
    optics::CavitySpec c;
    const char* fwhm_key = width_unit.k == kMHz.k ? "fwhm_MHz" : "fwhm_GHz";
    c.fwhm = s.number(fwhm_key, width_unit);
    c.fsr = s.number("fsr_GHz", kGHz);
    c.center_detuning = s.number("center_detuning_MHz", kMHz);
    s.finish();
    return c;
}

json write_cavity(const optics::CavitySpec& c, Unit width_unit)
{
    const char* fwhm_key = width_unit.k == kMHz.k ? "fwhm_MHz" : "fwhm_GHz";
    return {{fwhm_key, width_unit.from_si(c.fwhm)},
            {"fsr_GHz", kGHz.from_si(c.fsr)},
            {"center_detuning_MHz", kMHz.from_si(c.center_detuning)}};
}

node::RetrievedPulse read_pulse(Section s)
{
    node::RetrievedPulse p;
    p.onset = s.number("onset_ns", kNs);
    p.rise_sigma = s.number("rise_sigma_ns", kNs);
    p.decay_tau = s.number("decay_tau_ns", kNs);
    s.finish();
    return p;
}

json write_pulse(const node::RetrievedPulse& p)
{
    return {{"onset_ns", kNs.from_si(p.onset)},
            {"rise_sigma_ns", kNs.from_si(p.rise_sigma)},
            {"decay_tau_ns", kNs.from_si(p.decay_tau)}};
}

node::DetectorParams read_detector(Section s)
{
    node::DetectorParams d;
    d.efficiency = s.number("efficiency");
    d.jitter = s.number("jitter_ps", kPs);
    auto conv = s.string("jitter_convention");
    if (conv == "fwhm")
        d.convention = node::JitterConvention::Fwhm;
    else if (conv == "sigma")
        d.convention = node::JitterConvention::Sigma;
    else
        throw ConfigError(join(s.path(), "jitter_convention"), "expected \"fwhm\" or \"sigma\"");
    auto kind = s.string("kind");
    if (kind == "SNSPD")
        d.label = node::DetectorKind::SNSPD;
    else if (kind == "SPAD")
        d.label = node::DetectorKind::SPAD;
    else
        throw ConfigError(join(s.path(), "kind"), "expected \"SNSPD\" or \"SPAD\"");
    s.finish();
    return d;
}

json write_detector(const node::DetectorParams& d)
{
    return {{"efficiency", d.efficiency},
            {"jitter_ps", kPs.from_si(d.jitter)},
            {"jitter_convention", d.convention == node::JitterConvention::Fwhm ? "fwhm" : "sigma"},
            {"kind", d.label == node::DetectorKind::SNSPD ? "SNSPD" : "SPAD"}};
}

std::vector<double> to_units(const std::vector<double>& v, Unit u)
{
    std::vector<double> out;
    for (double x : v)
        out.push_back(u.from_si(x));
    return out;
}

const json& default_json()
{
    static const json j = json::parse(kDefaultConfigText, nullptr, true, true);
    return j;
}

} // namespace

NodeConfig from_json(const json& j)
{
    NodeConfig c;
    Section root(j, "");

    const json& seed = root.at("seed");
    require(seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0), "seed",
            "expected a non-negative integer");
    c.seed = seed.get<std::uint64_t>();
    c.workers = static_cast<int>(root.integer("workers"));

    {
        Section s = root.child("source");
        c.source.telecom_rate = s.number("telecom_rate_per_s");
        c.source.heralding_eta = s.number("heralding_eta");
        c.source.werner_a = s.number("werner_a");
        c.source.input_bandwidth = s.number("input_bandwidth_MHz", kMHz);
        c.source.telecom_cavity = read_cavity(s.child("telecom_cavity"), kMHz);
        s.finish();
    }
    {
        Section s = root.child("solo");
        c.solo.mean_photon_number = s.number("mean_photon_number");
        c.solo.input_bandwidth = s.number("input_bandwidth_MHz", kMHz);
        c.solo.eta0_internal = s.number("eta0_internal");
        c.solo.noise_per_trial = s.number("noise_per_trial");
        c.solo.output_pulse = read_pulse(s.child("output_pulse"));
        s.finish();
    }
    {
        Section s = root.child("memory");
        c.memory.eta0_internal = s.number("eta0_internal");
        c.memory.tau_coherence = s.number("tau_coherence_us", kUs);
        c.memory.retrieval_delay = s.number("retrieval_delay_ns", kNs);
        c.memory.noise_per_trial = s.number("noise_per_trial");
        c.memory.output_pulse = read_pulse(s.child("output_pulse"));
        c.memory.control_rabi_peak = s.number("control_rabi_peak_2pi_MHz", kTwoPiMHz);
        c.memory.interface_transmission = s.number("interface_transmission");
        c.memory.filter_transmission = s.number("filter_transmission");
        s.finish();
    }
    {
        Section s = root.child("control_reference");
        c.control_reference.rabi = s.number("rabi_2pi_MHz", kTwoPiMHz);
        c.control_reference.bandwidth = s.number("bandwidth_MHz", kMHz);
        c.control_reference.exponent = s.number("exponent");
        s.finish();
    }
    {
        Section s = root.child("filter");
        const json& stages = s.at("stages");
        require(stages.is_array(), "filter.stages", "expected an array");
        for (std::size_t i = 0; i < stages.size(); ++i) {
            std::string path = "filter.stages[" + std::to_string(i) + "]";
            Section st(stages[i], path);
            optics::FilterStage stage;
            stage.cavity.fwhm = st.number("fwhm_GHz", kGHz);
            stage.cavity.fsr = st.number("fsr_GHz", kGHz);
            stage.cavity.center_detuning = st.number("center_detuning_MHz", kMHz);
            stage.passes = static_cast<int>(st.integer("passes"));
            st.finish();
            c.filter.cascade.stages.push_back(stage);
        }
        c.filter.cascade.broadband_transmission = s.number("broadband_transmission");
        c.filter.query_detuning = s.number("query_detuning_GHz", kGHz);
        c.filter.measured_bandwidth = s.number("measured_bandwidth_MHz", kMHz);
        s.finish();
    }
    {
        Section s = root.child("detectors");
        c.detectors.telecom = read_detector(s.child("telecom"));
        c.detectors.nir = read_detector(s.child("nir"));
        s.finish();
    }
    {
        Section s = root.child("timing");
        c.timing.op_off = s.number("op_off_ns", kNs);
        c.timing.write_pulse_len = s.number("write_pulse_len_ns", kNs);
        c.timing.write_fall = s.number("write_fall_ns", kNs);
        c.timing.retrieve_at = s.number("retrieve_at_ns", kNs);
        c.timing.op_on = s.number("op_on_ns", kNs);
        c.timing.clock_period = s.number("clock_period_us", kUs);
        c.timing.tag_resolution = s.number("tag_resolution_ps", kPs);
        c.timing.bin_width = s.number("bin_width_ps", kPs);
        s.finish();
    }
    {
        Section s = root.child("qst");
        c.qst_transmission = s.number("transmission");
        s.finish();
    }
    {
        Section s = root.child("analysis");
        auto& a = c.analysis;
        a.detection_window = s.number("detection_window_ns", kNs);
        a.noise_window_offset = s.number("noise_window_offset_ns", kNs);
        a.noise_window = s.number("noise_window_ns", kNs);
        a.efficiency_window = s.number("efficiency_window_ns", kNs);
        a.input_window = s.number("input_window_ns", kNs);
        a.peak_smoothing_bins = static_cast<int>(s.integer("peak_smoothing_bins"));
        a.sweep_min = s.number("sweep_min_ns", kNs);
        a.sweep_max = s.number("sweep_max_ns", kNs);
        a.sweep_step = s.number("sweep_step_ns", kNs);
        a.sweep_triggers = s.unsigned_integer("sweep_triggers");
        Section corr = s.child("corrections");
        a.corrections.qst = corr.number("qst");
        a.corrections.detector = corr.number("detector");
        a.corrections.vv_fraction = corr.number("vv_fraction");
        corr.finish();
        a.utility_thresholds = s.numbers("utility_thresholds");
        s.finish();
    }
    {
        Section s = root.child("tomography");
        const json& labels = s.at("settings");
        require(labels.is_array(), "tomography.settings", "expected an array of setting labels");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            std::string path = "tomography.settings[" + std::to_string(i) + "]";
            require(labels[i].is_string(), path, "expected a two-letter setting label");
            auto label = labels[i].get<std::string>();
            require(quantum::MeasurementSetting::parse(label).has_value(), path,
                    "malformed setting \"" + label + "\"; expected two letters from HVDARL");
            c.tomography.settings.push_back(label);
        }
        c.tomography.duration_per_setting = s.number("duration_per_setting_s");
        c.tomography.max_iterations = static_cast<int>(s.integer("max_iterations"));
        c.tomography.bootstrap_resamples = static_cast<int>(s.integer("bootstrap_resamples"));
        c.tomography.bootstrap_percentile = s.number("bootstrap_percentile");
        s.finish();
    }
    {
        Section s = root.child("storage_sweep");
        c.storage_sweep.delays = s.numbers("delays_us", kUs);
        c.storage_sweep.triggers = s.unsigned_integer("triggers");
        c.storage_sweep.tomography_duration_per_setting = s.number("tomography_duration_per_setting_s");
        s.finish();
    }
    {
        Section s = root.child("spectra");
        auto& joint = c.spectra.joint;
        Section p = s.child("pathways");
        auto centers = p.numbers("centers_GHz", kGHz);
        auto weights = p.numbers("weights");
        require(centers.size() == 2, "spectra.pathways.centers_GHz", "expected two pathway centers");
        require(weights.size() == 2, "spectra.pathways.weights", "expected two pathway weights");
        joint.pathways.centers = {centers[0], centers[1]};
        joint.pathways.weights = {weights[0], weights[1]};
        joint.pathways.doppler_width = p.number("doppler_fwhm_GHz", kGHz);
        joint.pathways.reference = p.string("reference");
        p.finish();

        const json& features = s.at("features");
        require(features.is_array(), "spectra.features", "expected an array");
        for (std::size_t i = 0; i < features.size(); ++i) {
            std::string path = "spectra.features[" + std::to_string(i) + "]";
            Section f(features[i], path);
            spectra::AbsorptionFeature feat;
            feat.center = f.number("center_GHz", kGHz);
            feat.width = f.number("width_GHz", kGHz);
            feat.depth = f.number("depth");
            auto target = f.string("applies_to");
            if (target == "telecom_rate")
                feat.applies_to = spectra::FeatureTarget::TelecomRate;
            else if (target == "nir_survival")
                feat.applies_to = spectra::FeatureTarget::NirSurvival;
            else
                throw ConfigError(path + ".applies_to", "expected \"telecom_rate\" or \"nir_survival\"");
            f.finish();
            joint.features.push_back(feat);
        }
        joint.sum_constant = s.number("sum_constant_GHz", kGHz);
        joint.baseline_survival = s.number("baseline_survival");
        Section band = s.child("integration_band");
        joint.band.min = band.number("min_GHz", kGHz);
        joint.band.max = band.number("max_GHz", kGHz);
        joint.band.step = band.number("step_MHz", kMHz);
        band.finish();

        Section m = s.child("memory_acceptance");
        auto mc = m.numbers("centers_GHz", kGHz);
        require(mc.size() == 2, "spectra.memory_acceptance.centers_GHz", "expected two centers");
        c.spectra.memory.centers = {mc[0], mc[1]};
        const json& amps = m.at("amplitudes");
        require(amps.is_array() && amps.size() == 2, "spectra.memory_acceptance.amplitudes",
                "expected two [re, im] pairs");
        for (std::size_t i = 0; i < 2; ++i) {
            std::string path = "spectra.memory_acceptance.amplitudes[" + std::to_string(i) + "]";
            require(amps[i].is_array() && amps[i].size() == 2 && amps[i][0].is_number() && amps[i][1].is_number(),
                    path, "expected [re, im]");
            c.spectra.memory.amplitudes[i] = {amps[i][0].get<double>(), amps[i][1].get<double>()};
        }
        c.spectra.memory.linewidth = m.number("linewidth_GHz", kGHz);
        m.finish();

        c.spectra.operating_scan_step = s.number("operating_scan_step_MHz", kMHz);
        Section scan = s.child("scan");
        c.spectra.scan_min = scan.number("min_GHz", kGHz);
        c.spectra.scan_max = scan.number("max_GHz", kGHz);
        c.spectra.scan_step = scan.number("step_MHz", kMHz);
        scan.finish();
        s.finish();
    }
    root.finish();
    c.validate();
    return c;
}

json to_json(const NodeConfig& c)
{
    json j;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["source"] = {{"telecom_rate_per_s", c.source.telecom_rate},
                   {"heralding_eta", c.source.heralding_eta},
                   {"werner_a", c.source.werner_a},
                   {"input_bandwidth_MHz", kMHz.from_si(c.source.input_bandwidth)},
                   {"telecom_cavity", write_cavity(c.source.telecom_cavity, kMHz)}};
    j["solo"] = {{"mean_photon_number", c.solo.mean_photon_number},
                 {"input_bandwidth_MHz", kMHz.from_si(c.solo.input_bandwidth)},
                 {"eta0_internal", c.solo.eta0_internal},
                 {"noise_per_trial", c.solo.noise_per_trial},
                 {"output_pulse", write_pulse(c.solo.output_pulse)}};
    j["memory"] = {{"eta0_internal", c.memory.eta0_internal},
                   {"tau_coherence_us", kUs.from_si(c.memory.tau_coherence)},
                   {"retrieval_delay_ns", kNs.from_si(c.memory.retrieval_delay)},
                   {"noise_per_trial", c.memory.noise_per_trial},
                   {"output_pulse", write_pulse(c.memory.output_pulse)},
                   {"control_rabi_peak_2pi_MHz", kTwoPiMHz.from_si(c.memory.control_rabi_peak)},
                   {"interface_transmission", c.memory.interface_transmission},
                   {"filter_transmission", c.memory.filter_transmission}};
    j["control_reference"] = {{"rabi_2pi_MHz", kTwoPiMHz.from_si(c.control_reference.rabi)},
                              {"bandwidth_MHz", kMHz.from_si(c.control_reference.bandwidth)},
                              {"exponent", c.control_reference.exponent}};
    json stages = json::array();
    for (const auto& st : c.filter.cascade.stages)
        stages.push_back({{"fwhm_GHz", kGHz.from_si(st.cavity.fwhm)},
                          {"fsr_GHz", kGHz.from_si(st.cavity.fsr)},
                          {"center_detuning_MHz", kMHz.from_si(st.cavity.center_detuning)},
                          {"passes", st.passes}});
    j["filter"] = {{"stages", stages},
                   {"broadband_transmission", c.filter.cascade.broadband_transmission},
                   {"query_detuning_GHz", kGHz.from_si(c.filter.query_detuning)},
                   {"measured_bandwidth_MHz", kMHz.from_si(c.filter.measured_bandwidth)}};
    j["detectors"] = {{"telecom", write_detector(c.detectors.telecom)}, {"nir", write_detector(c.detectors.nir)}};
    const auto& t = c.timing;
    j["timing"] = {{"op_off_ns", kNs.from_si(t.op_off)},
                   {"write_pulse_len_ns", kNs.from_si(t.write_pulse_len)},
                   {"write_fall_ns", kNs.from_si(t.write_fall)},
                   {"retrieve_at_ns", kNs.from_si(t.retrieve_at)},
                   {"op_on_ns", kNs.from_si(t.op_on)},
                   {"clock_period_us", kUs.from_si(t.clock_period)},
                   {"tag_resolution_ps", kPs.from_si(t.tag_resolution)},
                   {"bin_width_ps", kPs.from_si(t.bin_width)}};
    j["qst"] = {{"transmission", c.qst_transmission}};
    const auto& a = c.analysis;
    j["analysis"] = {{"detection_window_ns", kNs.from_si(a.detection_window)},
                     {"noise_window_offset_ns", kNs.from_si(a.noise_window_offset)},
                     {"noise_window_ns", kNs.from_si(a.noise_window)},
                     {"efficiency_window_ns", kNs.from_si(a.efficiency_window)},
                     {"input_window_ns", kNs.from_si(a.input_window)},
                     {"peak_smoothing_bins", a.peak_smoothing_bins},
                     {"sweep_min_ns", kNs.from_si(a.sweep_min)},
                     {"sweep_max_ns", kNs.from_si(a.sweep_max)},
                     {"sweep_step_ns", kNs.from_si(a.sweep_step)},
                     {"sweep_triggers", a.sweep_triggers},
                     {"corrections",
                      {{"qst", a.corrections.qst},
                       {"detector", a.corrections.detector},
                       {"vv_fraction", a.corrections.vv_fraction}}},
                     {"utility_thresholds", a.utility_thresholds}};
    j["tomography"] = {{"settings", c.tomography.settings},
                       {"duration_per_setting_s", c.tomography.duration_per_setting},
                       {"max_iterations", c.tomography.max_iterations},
                       {"bootstrap_resamples", c.tomography.bootstrap_resamples},
                       {"bootstrap_percentile", c.tomography.bootstrap_percentile}};
    j["storage_sweep"] = {{"delays_us", to_units(c.storage_sweep.delays, kUs)},
                          {"triggers", c.storage_sweep.triggers},
                          {"tomography_duration_per_setting_s", c.storage_sweep.tomography_duration_per_setting}};

    const auto& joint = c.spectra.joint;
    json features = json::array();
    for (const auto& f : joint.features)
        features.push_back({{"center_GHz", kGHz.from_si(f.center)},
                            {"width_GHz", kGHz.from_si(f.width)},
                            {"depth", f.depth},
                            {"applies_to", f.applies_to == spectra::FeatureTarget::TelecomRate ? "telecom_rate"
                                                                                                : "nir_survival"}});
    const auto& mem = c.spectra.memory;
    j["spectra"] = {
        {"pathways",
         {{"centers_GHz", {kGHz.from_si(joint.pathways.centers[0]), kGHz.from_si(joint.pathways.centers[1])}},
          {"weights", {joint.pathways.weights[0], joint.pathways.weights[1]}},
          {"doppler_fwhm_GHz", kGHz.from_si(joint.pathways.doppler_width)},
          {"reference", joint.pathways.reference}}},
        {"features", features},
        {"sum_constant_GHz", kGHz.from_si(joint.sum_constant)},
        {"baseline_survival", joint.baseline_survival},
        {"integration_band",
         {{"min_GHz", kGHz.from_si(joint.band.min)},
          {"max_GHz", kGHz.from_si(joint.band.max)},
          {"step_MHz", kMHz.from_si(joint.band.step)}}},
        {"memory_acceptance",
         {{"centers_GHz", {kGHz.from_si(mem.centers[0]), kGHz.from_si(mem.centers[1])}},
          {"amplitudes",
           {{mem.amplitudes[0].real(), mem.amplitudes[0].imag()}, {mem.amplitudes[1].real(), mem.amplitudes[1].imag()}}},
          {"linewidth_GHz", kGHz.from_si(mem.linewidth)}}},
        {"operating_scan_step_MHz", kMHz.from_si(c.spectra.operating_scan_step)},
        {"scan",
         {{"min_GHz", kGHz.from_si(c.spectra.scan_min)},
          {"max_GHz", kGHz.from_si(c.spectra.scan_max)},
          {"step_MHz", kMHz.from_si(c.spectra.scan_step)}}}};
    return j;
}

void NodeConfig::validate() const
{
    require(workers >= 1, "workers", "must be at least 1");
    checked("source", [&] { source.validate(); });
    checked("memory", [&] { memory.validate(); });
    checked("solo.output_pulse", [&] { solo.output_pulse.validate(); });
    require(solo.mean_photon_number > 0.0, "solo.mean_photon_number", "must be positive");
    require(solo.input_bandwidth > 0.0, "solo.input_bandwidth_MHz", "must be positive");
    require(solo.eta0_internal > 0.0 && solo.eta0_internal <= 1.0, "solo.eta0_internal", "must lie in (0, 1]");
    require(solo.noise_per_trial >= 0.0 && solo.noise_per_trial <= 1e-2, "solo.noise_per_trial",
            "must lie in [0, 1e-2]");
    require(control_reference.rabi > 0.0 && control_reference.bandwidth > 0.0, "control_reference",
            "Rabi frequency and bandwidth must be positive");
    checked("filter", [&] { filter.cascade.validate(); });
    require(filter.measured_bandwidth >= 0.0, "filter.measured_bandwidth_MHz", "must be non-negative");
    checked("detectors.telecom", [&] { detectors.telecom.validate(); });
    checked("detectors.nir", [&] { detectors.nir.validate(); });
    checked("timing", [&] { timing.validate(); });
    require(qst_transmission > 0.0 && qst_transmission <= 1.0, "qst.transmission", "must lie in (0, 1]");

    const auto& a = analysis;
    require(a.detection_window > 0.0, "analysis.detection_window_ns", "must be positive");
    require(a.noise_window > 0.0 && a.noise_window_offset > 0.0, "analysis.noise_window_ns",
            "noise window and offset must be positive");
    require(a.noise_window_offset + a.noise_window <= timing.op_on - timing.retrieve_at,
            "analysis.noise_window_offset_ns", "noise window must end before the control field turns off");
    require(a.efficiency_window > 0.0 && a.efficiency_window <= a.noise_window_offset,
            "analysis.efficiency_window_ns", "must be positive and end before the noise window");
    require(a.input_window > 0.0, "analysis.input_window_ns", "must be positive");
    require(a.peak_smoothing_bins >= 1, "analysis.peak_smoothing_bins", "must be at least 1");
    require(a.sweep_min > 0.0 && a.sweep_min < a.sweep_max && a.sweep_step > 0.0, "analysis.sweep_min_ns",
            "sweep grid must satisfy 0 < min < max with a positive step");
    require(a.sweep_triggers >= 1, "analysis.sweep_triggers", "must be at least 1");
    checked("analysis.corrections", [&] {
        for (double f : {a.corrections.qst, a.corrections.detector, a.corrections.vv_fraction})
            if (!(f > 0.0 && f <= 1.0))
                throw DomainError("correction factors must lie in (0, 1]");
    });
    for (std::size_t i = 0; i < a.utility_thresholds.size(); ++i)
        require(a.utility_thresholds[i] > 0.25 && a.utility_thresholds[i] < 1.0,
                "analysis.utility_thresholds[" + std::to_string(i) + "]", "must lie in (0.25, 1)");

    require(tomography.duration_per_setting > 0.0, "tomography.duration_per_setting_s", "must be positive");
    require(tomography.max_iterations >= 1, "tomography.max_iterations", "must be at least 1");
    require(tomography.bootstrap_resamples >= 0, "tomography.bootstrap_resamples", "must be non-negative");
    require(tomography.bootstrap_percentile >= 0.0 && tomography.bootstrap_percentile <= 100.0,
            "tomography.bootstrap_percentile", "must lie in [0, 100]");

    require(storage_sweep.triggers >= 1, "storage_sweep.triggers", "must be at least 1");
    require(storage_sweep.tomography_duration_per_setting > 0.0, "storage_sweep.tomography_duration_per_setting_s",
            "must be positive");
    for (std::size_t i = 0; i < storage_sweep.delays.size(); ++i) {
        std::string path = "storage_sweep.delays_us[" + std::to_string(i) + "]";
        require(storage_sweep.delays[i] >= timing.retrieve_at, path, "delays must not precede the first retrieval");
        require(i == 0 || storage_sweep.delays[i] > storage_sweep.delays[i - 1], path,
                "delays must be strictly increasing");
    }

    checked("spectra", [&] {
        spectra.joint.validate();
        spectra.memory.validate();
    });
    require(spectra.operating_scan_step > 0.0, "spectra.operating_scan_step_MHz", "must be positive");
    require(spectra.scan_min < spectra.scan_max && spectra.scan_step > 0.0, "spectra.scan",
            "scan needs min < max and a positive step");
}

std::vector<quantum::MeasurementSetting> NodeConfig::tomography_settings() const
{
    std::vector<quantum::MeasurementSetting> out;
    for (std::size_t i = 0; i < tomography.settings.size(); ++i) {
        auto s = quantum::MeasurementSetting::parse(tomography.settings[i]);
        if (!s)
            throw ConfigError("tomography.settings[" + std::to_string(i) + "]", "malformed setting");
        out.push_back(*s);
    }
    return out;
}

NodeConfig parse(const std::string& text)
{
    json user;
    try {
        user = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
    if (!user.is_object())
        throw ConfigError("<root>", "expected an object");
    json merged = default_json();
    merged.merge_patch(user);
    try {
        return from_json(merged);
    } catch (const json::exception& e) {
        throw ConfigError("<document>", e.what());
    }
}

NodeConfig load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

NodeConfig defaults()
{
    return from_json(default_json());
}

std::string config_hash(const NodeConfig& c)
{
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    std::string text = to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

} // namespace qrnode::config
