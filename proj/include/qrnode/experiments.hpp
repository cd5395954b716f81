#pragma once

// End-to-end experiments: simulate, then analyze the way the laboratory data are
// analyzed. Shared by the command-line tool and the acceptance checks.

#include "qrnode/analysis.hpp"
#include "qrnode/config.hpp"
#include "qrnode/simulator.hpp"

#include <optional>

namespace qrnode::experiments {

enum class Mode { Solo, Source };

struct ConditionHistograms
{
    Histogram memory;
    Histogram input;
    Histogram no_input;
};

ConditionHistograms simulate_conditions(const config::NodeConfig& cfg, Mode mode, std::uint64_t n_trials, int workers);

struct MemoryMetrics
{
    double snr = 0.0;
    bool snr_lower_bound = false;
    double efficiency = 0.0;
    double efficiency_sigma = 0.0;
    double mean_photon_number = 0.0; // back-propagated from the input histogram
    double snr_n1 = 0.0;             // snr / mean_photon_number
    double noise_floor_per_trial = 0.0; // no-input counts per detection window per trial
    double window_center = 0.0;
};

MemoryMetrics analyze_conditions(const config::NodeConfig& cfg, const ConditionHistograms& h);

std::vector<double> sweep_window_grid(const config::NodeConfig& cfg);

struct WindowSweepRun
{
    Histogram histogram;
    double center = 0.0;
    analysis::SweepResult sweep;
};

WindowSweepRun run_window_sweep(const config::NodeConfig& cfg, std::uint64_t n_triggers, int workers);

struct TomographyOutcome
{
    sim::TomographyRun run;
    analysis::TomographyResult result;
    std::optional<double> bootstrap_lower;
};

TomographyOutcome run_tomography(const config::NodeConfig& cfg, double duration_per_setting, int workers,
                                 const quantum::DensityMatrix& target = quantum::bell_phi_plus());

// Fidelities predicted from the measured SNR and coherence time at `times`
// (storage time from the first retrieval edge).
struct UtilityReport
{
    std::vector<double> times;
    std::vector<double> model_fidelity;
    std::vector<analysis::UtilityResult> model_crossings;     // one per configured threshold
    std::vector<analysis::UtilityResult> simulated_crossings; // from the simulated sweep
};

UtilityReport utility_report(const config::NodeConfig& cfg, double snr0, double tau,
                             const sim::StorageSweepResult& sweep);

} // namespace qrnode::experiments
