#pragma once

// Monte Carlo generation of time-tagged NIR detections. Each trial draws from
// its own counter-based stream keyed on (seed, stream id, trial index), and
// trials are processed in fixed-size chunks merged in chunk order, so results
// do not depend on the number of worker threads.

#include "qrnode/analysis.hpp"
#include "qrnode/config.hpp"
#include "qrnode/histogram.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qrnode::sim {

enum class Condition { Memory, Input, NoInput };

std::string_view to_string(Condition c);

struct RunOptions
{
    std::uint64_t n_trials = 0;
    int workers = 1;
    std::ostream* event_dump = nullptr; // trial_index \t condition \t timestamp_ps
};

struct Detection
{
    std::int64_t timestamp_ps = 0; // relative to the trigger
    bool signal = false;
};

struct TrialEvent
{
    std::uint64_t trial_index = 0;
    double trigger_gap = 0.0; // time since the previous trigger, s
    std::vector<Detection> detections;
    Condition condition = Condition::Memory;
};

// Everything one trial needs; built from a NodeConfig by the factories below.
struct TrialModel
{
    Condition condition = Condition::Memory;
    double signal_probability = 0.0;

    bool retrieved_shape = true;   // retrieved envelope, otherwise the Gaussian input pulse
    node::RetrievedPulse pulse;
    double retrieval_time = 0.0;
    double input_sigma = 0.0;      // intensity standard deviation of the input pulse
    double jitter_sigma = 0.0;

    double noise_mean = 0.0;       // Poisson mean of noise detections per trial
    double noise_start = 0.0;
    double noise_end = 0.0;

    bool poisson_triggers = false;
    double trigger_rate = 0.0;     // Poisson triggers
    double clock_period = 0.0;     // clocked triggers

    double tag_resolution = 1e-12;
    double frame_start = 0.0;
    double frame_end = 0.0;
    double hist_origin = 0.0;
    double hist_end = 0.0;
    double bin_width = 0.0;

    void validate() const;
};

// Memory-solo trials: weak coherent input on the global clock.
TrialModel solo_model(const config::NodeConfig& cfg, Condition condition);

// Heralded trials: Poisson triggers at the telecom rate. `retrieval_time` is
// measured from the write pulse; by default retrieve_at + memory.retrieval_delay.
TrialModel source_model(const config::NodeConfig& cfg, Condition condition);
TrialModel source_model(const config::NodeConfig& cfg, Condition condition, double retrieval_time);

TrialEvent simulate_trial(const TrialModel& model, std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

Histogram run(const TrialModel& model, std::uint64_t seed, std::uint64_t stream, const RunOptions& options);

// Stream identifiers keep experiments, conditions, settings and delays on
// disjoint random streams.
enum class Experiment : std::uint64_t { Solo = 1, Source = 2, Tomography = 3, StorageSweep = 4 };
std::uint64_t stream_id(Experiment e, Condition c, std::uint64_t setting = 0, std::uint64_t delay = 0);

Histogram run_solo(const config::NodeConfig& cfg, Condition condition, const RunOptions& options);
Histogram run_source(const config::NodeConfig& cfg, Condition condition, const RunOptions& options);

struct TomographyRun
{
    std::vector<std::string> labels;
    std::vector<Histogram> histograms;
    std::vector<double> counts;       // raw counts in the detection window
    std::vector<double> live_time;    // s per setting
    std::vector<std::uint64_t> triggers;
    bool informationally_complete = false;
    double window_center = 0.0;
    double window_width = 0.0;
};

struct TomographyRunOptions
{
    double duration_per_setting = 0.0;
    int workers = 1;
    double retrieval_time = -1.0; // < 0: the configured default
    std::uint64_t delay_index = 0;
};

TomographyRun run_tomography(const config::NodeConfig& cfg,
                             const std::vector<quantum::MeasurementSetting>& settings,
                             const TomographyRunOptions& options);

// Whole-bin window of about `width` centred on the bin holding `center`.
analysis::WindowSpec bin_aligned_window(const Histogram& hist, double center, double width,
                                        double noise_start, double noise_width);

struct StoragePoint
{
    double retrieval_time = 0.0;
    double storage_time = 0.0; // from the first retrieval edge
    analysis::EfficiencyResult efficiency;
    double snr = 0.0;
    double fidelity = 0.0;
    bool tomography_converged = false;
};

struct StorageSweepResult
{
    std::vector<StoragePoint> points;
    analysis::ExponentialFit fit; // efficiency vs storage time
};

// Efficiency, SNR and tomographic fidelity at every configured delay.
StorageSweepResult sweep_storage_time(const config::NodeConfig& cfg, int workers);

} // namespace qrnode::sim
