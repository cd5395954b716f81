#include "qrnode/experiments.hpp"

#include "qrnode/errors.hpp"

#include <cmath>

namespace qrnode::experiments {

namespace {

double retrieval_time(const config::NodeConfig& cfg)
{
    return cfg.timing.retrieve_at + cfg.memory.retrieval_delay;
}

double nir_path(const config::NodeConfig& cfg)
{
    return cfg.memory.filter_transmission * cfg.qst_transmission;
}

} // namespace

ConditionHistograms simulate_conditions(const config::NodeConfig& cfg, Mode mode, std::uint64_t n_trials, int workers)
{
    sim::RunOptions ro{n_trials, workers, nullptr};
    auto run = mode == Mode::Solo ? sim::run_solo : sim::run_source;
    return {run(cfg, sim::Condition::Memory, ro), run(cfg, sim::Condition::Input, ro),
            run(cfg, sim::Condition::NoInput, ro)};
}

MemoryMetrics analyze_conditions(const config::NodeConfig& cfg, const ConditionHistograms& h)
{
    const auto& a = cfg.analysis;
    const double t_r = retrieval_time(cfg);
    const double noise_start = t_r + a.noise_window_offset;
    MemoryMetrics m;

    m.window_center = analysis::peak_center(h.memory, a.peak_smoothing_bins, t_r, t_r + a.efficiency_window);
    auto snr = analysis::extract_snr(h.memory,
                                     analysis::centered_window(m.window_center, a.detection_window, noise_start, a.noise_window));
    m.snr = snr.snr;
    m.snr_lower_bound = snr.lower_bound;

    const double path = nir_path(cfg) * cfg.detectors.nir.efficiency;
    auto eff = analysis::internal_storage_efficiency(h.memory, {t_r, a.efficiency_window, noise_start, a.noise_window},
                                                     h.input, -a.input_window / 2.0, a.input_window, {path, path});
    m.efficiency = eff.efficiency;
    m.efficiency_sigma = eff.sigma;

    m.mean_photon_number = analysis::mean_photon_number(h.input, -a.input_window / 2.0, a.input_window, nir_path(cfg),
                                                        cfg.detectors.nir.efficiency, h.input.n_trials);
    m.snr_n1 = m.snr / m.mean_photon_number;

    double noise = analysis::window_sum(h.no_input, noise_start, a.noise_window);
    m.noise_floor_per_trial = noise * (a.detection_window / a.noise_window) / static_cast<double>(h.no_input.n_trials);
    return m;
}

std::vector<double> sweep_window_grid(const config::NodeConfig& cfg)
{
    const auto& a = cfg.analysis;
    std::vector<double> w;
    const auto n = static_cast<long>(std::floor((a.sweep_max - a.sweep_min) / a.sweep_step + 1e-9));
    for (long i = 0; i <= n; ++i)
        w.push_back(a.sweep_min + static_cast<double>(i) * a.sweep_step);
    return w;
}

WindowSweepRun run_window_sweep(const config::NodeConfig& cfg, std::uint64_t n_triggers, int workers)
{
    const auto& a = cfg.analysis;
    const double t_r = retrieval_time(cfg);
    WindowSweepRun out;
    out.histogram = sim::run_source(cfg, sim::Condition::Memory, {n_triggers, workers, nullptr});
    out.center = analysis::peak_center(out.histogram, a.peak_smoothing_bins, t_r, t_r + a.efficiency_window);
    auto grid = sweep_window_grid(cfg);
    out.sweep = analysis::window_sweep(out.histogram, out.center, grid, t_r + a.noise_window_offset, a.noise_window,
                                       a.corrections, cfg.source.telecom_rate);
    return out;
}

TomographyOutcome run_tomography(const config::NodeConfig& cfg, double duration_per_setting, int workers,
                                 const quantum::DensityMatrix& target)
{
    auto settings = cfg.tomography_settings();
    TomographyOutcome out;
    out.run = sim::run_tomography(cfg, settings, {duration_per_setting, workers, -1.0, 0});
    if (!out.run.informationally_complete)
        return out;
    analysis::TomographyOptions opt;
    opt.max_iterations = cfg.tomography.max_iterations;
    out.result = analysis::mle_tomography(out.run.counts, settings, target, opt);
    if (cfg.tomography.bootstrap_resamples > 0)
        out.bootstrap_lower = analysis::bootstrap_fidelity_percentile(
            out.run.counts, settings, cfg.tomography.bootstrap_resamples, cfg.tomography.bootstrap_percentile,
            cfg.seed, target);
    return out;
}

UtilityReport utility_report(const config::NodeConfig& cfg, double snr0, double tau,
                             const sim::StorageSweepResult& sweep)
{
    UtilityReport r;
    const double t_max = cfg.storage_sweep.delays.empty()
                             ? 6e-6
                             : cfg.storage_sweep.delays.back() - cfg.timing.retrieve_at;
    for (int i = 0; i <= 600; ++i)
        r.times.push_back(t_max * i / 600.0);
    r.model_fidelity = analysis::model_fidelity_curve(snr0, tau, r.times);

    std::vector<double> st, sf;
    for (const auto& p : sweep.points) {
        st.push_back(p.storage_time);
        sf.push_back(p.fidelity);
    }
    for (double thr : cfg.analysis.utility_thresholds) {
        r.model_crossings.push_back(analysis::utility_time(r.times, r.model_fidelity, thr));
        if (!st.empty())
            r.simulated_crossings.push_back(analysis::utility_time(st, sf, thr));
    }
    return r;
}

} // namespace qrnode::experiments
