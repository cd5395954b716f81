#pragma once

// Node configuration: one JSON document (comments allowed) with nested sections
// and units spelled out in every key. Loading validates every sub-record and
// rejects unknown keys with a dotted path to the offending field.

#include "qrnode/analysis.hpp"
#include "qrnode/node_models.hpp"
#include "qrnode/optics.hpp"
#include "qrnode/spectra.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qrnode::config {

// Memory-solo experiment: weak coherent input instead of heralded photons.
// The memory runs with a narrower input and its own efficiency and noise.
struct SoloParams
{
    double mean_photon_number = 0.32;
    double input_bandwidth = 142e6;
    double eta0_internal = 0.095;
    double noise_per_trial = 1.2e-4;
    node::RetrievedPulse output_pulse{1.0e-9, 0.3e-9, 2.35e-9};
};

struct AnalysisParams
{
    double detection_window = 2.82e-9;
    double noise_window_offset = 65e-9; // after the retrieval edge
    double noise_window = 20e-9;
    double efficiency_window = 30e-9;   // from the retrieval edge
    double input_window = 30e-9;        // centred on t = 0
    int peak_smoothing_bins = 5;
    double sweep_min = 0.512e-9;
    double sweep_max = 12e-9;
    double sweep_step = 0.256e-9;
    std::uint64_t sweep_triggers = 4'200'000;
    analysis::SweepCorrections corrections;
    std::vector<double> utility_thresholds{0.775, 0.5};
};

struct TomographyParams
{
    std::vector<std::string> settings; // "XY" labels, telecom first
    double duration_per_setting = 100.0;
    int max_iterations = 2000;
    int bootstrap_resamples = 0;
    double bootstrap_percentile = 5.0;
};

struct StorageSweepParams
{
    std::vector<double> delays; // absolute retrieval times, s
    std::uint64_t triggers = 2'000'000;
    double tomography_duration_per_setting = 10.0;
};

struct FilterParams
{
    optics::FilterCascade cascade;
    double query_detuning = 6.8347e9;
    double measured_bandwidth = 0.0; // quoted figure; 0 when not given
};

struct SpectraParams
{
    spectra::JointSpectralModel joint;
    spectra::MemoryAcceptanceModel memory;
    double operating_scan_step = 5e6;
    double scan_min = -3e9;
    double scan_max = 3e9;
    double scan_step = 10e6;
};

struct DetectorPair
{
    node::DetectorParams telecom;
    node::DetectorParams nir;
};

struct NodeConfig
{
    std::uint64_t seed = 1;
    int workers = 1;
    node::SourceParams source;
    SoloParams solo;
    node::MemoryParams memory;
    node::ControlReference control_reference;
    FilterParams filter;
    DetectorPair detectors;
    node::TimingConfig timing;
    double qst_transmission = 0.9;
    AnalysisParams analysis;
    TomographyParams tomography;
    StorageSweepParams storage_sweep;
    SpectraParams spectra;

    void validate() const;
    std::vector<quantum::MeasurementSetting> tomography_settings() const;
};

NodeConfig from_json(const nlohmann::json& j);
nlohmann::json to_json(const NodeConfig& c);

NodeConfig load(const std::filesystem::path& path);
NodeConfig parse(const std::string& text);

// Built-in defaults; identical to config/default_node.json.
NodeConfig defaults();

// FNV-1a over the canonical (key-sorted, compact) serialization.
std::string config_hash(const NodeConfig& c);

} // namespace qrnode::config
