#include "qrnode/simulator.hpp"

#include "qrnode/errors.hpp"
#include "qrnode/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

namespace qrnode::sim {

namespace {

constexpr std::uint64_t kChunk = 1 << 16;
constexpr double kFwhmToSigma = 2.3548200450309493;
// Histograms extend this far past the end of the noise interval.
constexpr double kHistogramGuard = 10e-9;

struct ChunkResult
{
    Histogram hist;
    double duration = 0.0;
    std::string events;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// Shared frame and noise interval for heralded and clocked trials.
void fill_frame(TrialModel& m, const config::NodeConfig& cfg, double retrieval_time, double noise_per_window)
{
    const auto& t = cfg.timing;
    m.retrieval_time = retrieval_time;
    m.jitter_sigma = cfg.detectors.nir.jitter_sigma();
    m.noise_start = retrieval_time;
    m.noise_end = retrieval_time + (t.op_on - t.retrieve_at);
    if (m.condition != Condition::Input)
        m.noise_mean = noise_per_window * (m.noise_end - m.noise_start) / cfg.analysis.detection_window;
    m.tag_resolution = t.tag_resolution;
    m.frame_start = t.op_off;
    m.frame_end = std::max(t.clock_period, m.noise_end + kHistogramGuard);
    m.hist_origin = t.op_off;
    m.hist_end = m.noise_end + kHistogramGuard;
    m.bin_width = t.bin_width;
}

double input_sigma(double bandwidth)
{
    return optics::kGaussianTimeBandwidth / bandwidth / kFwhmToSigma;
}

} // namespace

std::string_view to_string(Condition c)
{
    switch (c) {
    case Condition::Memory:
        return "memory";
    case Condition::Input:
        return "input";
    case Condition::NoInput:
        return "no_input";
    }
    return "unknown";
}

void TrialModel::validate() const
{
    if (!(signal_probability >= 0.0 && signal_probability <= 1.0))
        throw DomainError("signal probability must lie in [0, 1]");
    if (!(noise_mean >= 0.0) || !(noise_end >= noise_start))
        throw DomainError("noise interval must be well formed");
    if (poisson_triggers ? !(trigger_rate > 0.0) : !(clock_period > 0.0))
        throw DomainError("trigger rate or clock period must be positive");
    if (!(tag_resolution > 0.0) || !(bin_width > 0.0) || !(hist_end > hist_origin))
        throw DomainError("invalid binning");
    // Timestamps are stored in whole picoseconds on the tagger grid.
    const double tag_ps = tag_resolution * 1e12, bin_ps = bin_width * 1e12;
    if (tag_ps < 1.0 - 1e-9 || std::abs(tag_ps - std::round(tag_ps)) > 1e-6 ||
        std::abs(bin_ps / std::round(tag_ps) - std::round(bin_ps / std::round(tag_ps))) > 1e-6)
        throw DomainError("tag resolution must be whole picoseconds dividing the bin width");
    if (!(frame_start <= hist_origin && hist_end <= frame_end))
        throw DomainError("histogram must lie inside the trial frame");
    if (retrieved_shape)
        pulse.validate();
    else if (!(input_sigma > 0.0))
        throw DomainError("input pulse width must be positive");
}

TrialModel solo_model(const config::NodeConfig& cfg, Condition condition)
{
    cfg.validate();
    TrialModel m;
    m.condition = condition;
    const double path = cfg.memory.filter_transmission * cfg.qst_transmission * cfg.detectors.nir.efficiency;
    const double retrieval = cfg.timing.retrieve_at + cfg.memory.retrieval_delay;
    fill_frame(m, cfg, retrieval, cfg.solo.noise_per_trial);
    m.pulse = cfg.solo.output_pulse;
    m.input_sigma = input_sigma(cfg.solo.input_bandwidth);
    const double eta_storage =
        cfg.solo.eta0_internal * std::exp(-cfg.memory.retrieval_delay / cfg.memory.tau_coherence);
    switch (condition) {
    case Condition::Memory:
        m.signal_probability = cfg.solo.mean_photon_number * eta_storage * path;
        break;
    case Condition::Input:
        m.signal_probability = cfg.solo.mean_photon_number * path;
        m.retrieved_shape = false;
        break;
    case Condition::NoInput:
        break;
    }
    m.clock_period = cfg.timing.clock_period;
    m.validate();
    return m;
}

TrialModel source_model(const config::NodeConfig& cfg, Condition condition)
{
    return source_model(cfg, condition, cfg.timing.retrieve_at + cfg.memory.retrieval_delay);
}

TrialModel source_model(const config::NodeConfig& cfg, Condition condition, double retrieval_time)
{
    cfg.validate();
    if (!(retrieval_time >= cfg.timing.retrieve_at))
        throw DomainError("retrieval cannot precede the first retrieval edge");
    TrialModel m;
    m.condition = condition;
    const double path = cfg.memory.filter_transmission * cfg.qst_transmission * cfg.detectors.nir.efficiency;
    fill_frame(m, cfg, retrieval_time, cfg.memory.noise_per_trial);
    m.pulse = cfg.memory.output_pulse;
    m.input_sigma = input_sigma(cfg.source.input_bandwidth);
    const double eta_storage = node::storage_efficiency_at(cfg.memory, retrieval_time - cfg.timing.retrieve_at);
    switch (condition) {
    case Condition::Memory:
        m.signal_probability = cfg.source.heralding_eta * eta_storage * path;
        break;
    case Condition::Input:
        m.signal_probability = cfg.source.heralding_eta * path;
        m.retrieved_shape = false;
        break;
    case Condition::NoInput:
        break;
    }
    m.poisson_triggers = true;
    m.trigger_rate = cfg.source.telecom_rate;
    m.validate();
    return m;
}

TrialEvent simulate_trial(const TrialModel& m, std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    rng::TrialStream g(seed, stream, index);
    TrialEvent ev;
    ev.trial_index = index;
    ev.condition = m.condition;
    ev.trigger_gap = m.poisson_triggers ? g.exponential(1.0 / m.trigger_rate) : m.clock_period;

    const std::int64_t tag_ps = std::llround(m.tag_resolution * 1e12);
    const std::int64_t frame_start_ps = std::llround(m.frame_start * 1e12);
    const std::int64_t frame_end_ps = std::llround(m.frame_end * 1e12);
    auto record = [&](double t, bool signal) {
        if (!(std::abs(t) < 1.0))
            return;
        const std::int64_t ps = std::llround(t / m.tag_resolution) * tag_ps;
        if (ps >= frame_start_ps && ps < frame_end_ps)
            ev.detections.push_back({ps, signal});
    };

    if (g.uniform() < m.signal_probability) {
        double t;
        if (m.retrieved_shape)
            t = m.retrieval_time + m.pulse.onset + m.pulse.rise_sigma * g.normal() + g.exponential(m.pulse.decay_tau);
        else
            t = m.input_sigma * g.normal();
        t += m.jitter_sigma * g.normal();
        record(t, true);
    }
    const unsigned n_noise = g.poisson(m.noise_mean);
    for (unsigned k = 0; k < n_noise; ++k)
        record(m.noise_start + g.uniform() * (m.noise_end - m.noise_start), false);
    return ev;
}

Histogram run(const TrialModel& model, std::uint64_t seed, std::uint64_t stream, const RunOptions& options)
{
    model.validate();
    if (options.n_trials == 0)
        throw DomainError("n_trials must be at least 1");
    const Histogram empty = Histogram::with_span(model.hist_origin, model.hist_end, model.bin_width);
    const std::int64_t origin_ps = std::llround(model.hist_origin * 1e12);
    const std::int64_t bin_ps = std::llround(model.bin_width * 1e12);
    const auto n_bins = static_cast<std::int64_t>(empty.counts.size());

    const std::uint64_t n_chunks = (options.n_trials + kChunk - 1) / kChunk;
    std::vector<ChunkResult> results(n_chunks);
    std::atomic<std::uint64_t> next{0};
    const bool dump = options.event_dump != nullptr;
    const std::string cond{to_string(model.condition)};

    auto worker = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            ChunkResult r{empty, 0.0, {}};
            std::ostringstream events;
            const std::uint64_t begin = c * kChunk;
            const std::uint64_t end = std::min(options.n_trials, begin + kChunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                TrialEvent ev = simulate_trial(model, seed, stream, i);
                r.duration += ev.trigger_gap;
                for (const auto& d : ev.detections) {
                    std::int64_t b = floor_div(d.timestamp_ps - origin_ps, bin_ps);
                    // Detections past the histogram span (far signal tails) are not recorded.
                    if (b < 0 || b >= n_bins)
                        continue;
                    ++r.hist.counts[static_cast<std::size_t>(b)];
                    if (dump)
                        events << i << '\t' << cond << '\t' << d.timestamp_ps << '\n';
                }
            }
            r.hist.n_trials = end - begin;
            if (dump)
                r.events = events.str();
            results[c] = std::move(r);
        }
    };

    const int n_workers = std::max(1, std::min<int>(options.workers, static_cast<int>(n_chunks)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    Histogram total = empty;
    double duration = 0.0;
    for (auto& r : results) {
        total += r.hist;
        duration += r.duration;
        if (dump)
            *options.event_dump << r.events;
    }
    total.duration_accumulated = duration;
    return total;
}

std::uint64_t stream_id(Experiment e, Condition c, std::uint64_t setting, std::uint64_t delay)
{
    return (static_cast<std::uint64_t>(e) << 56) | (static_cast<std::uint64_t>(c) << 48) | ((setting & 0xffffff) << 24) |
           (delay & 0xffffff);
}

Histogram run_solo(const config::NodeConfig& cfg, Condition condition, const RunOptions& options)
{
    return run(solo_model(cfg, condition), cfg.seed, stream_id(Experiment::Solo, condition), options);
}

Histogram run_source(const config::NodeConfig& cfg, Condition condition, const RunOptions& options)
{
    return run(source_model(cfg, condition), cfg.seed, stream_id(Experiment::Source, condition), options);
}

analysis::WindowSpec bin_aligned_window(const Histogram& hist, double center, double width, double noise_start,
                                        double noise_width)
{
    const auto n_bins = std::max<long>(1, std::lround(width / hist.bin_width));
    const auto center_bin = static_cast<long>(std::floor((center - hist.origin) / hist.bin_width));
    const long first = center_bin - n_bins / 2;
    return {hist.bin_start(static_cast<std::size_t>(std::max(0L, first))),
            static_cast<double>(n_bins) * hist.bin_width, noise_start, noise_width};
}

TomographyRun run_tomography(const config::NodeConfig& cfg, const std::vector<quantum::MeasurementSetting>& settings,
                             const TomographyRunOptions& options)
{
    cfg.validate();
    if (!(options.duration_per_setting > 0.0))
        throw DomainError("tomography duration per setting must be positive");
    const double retrieval =
        options.retrieval_time < 0.0 ? cfg.timing.retrieve_at + cfg.memory.retrieval_delay : options.retrieval_time;
    const auto rho = quantum::werner_state(cfg.source.werner_a);

    TomographyRun out;
    out.informationally_complete = quantum::informationally_complete(settings);
    const auto triggers = static_cast<std::uint64_t>(std::llround(cfg.source.telecom_rate * options.duration_per_setting));
    const TrialModel base = source_model(cfg, Condition::Memory, retrieval);

    Histogram summed;
    for (std::size_t k = 0; k < settings.size(); ++k) {
        const auto& s = settings[k];
        // NIR photon passes its analyzer given the telecom outcome that triggered the trial.
        quantum::Matrix4 telecom_only = quantum::MeasurementSetting{s.projector_a, quantum::Matrix2::Identity(), ""}.joint();
        double marginal = (rho.matrix() * telecom_only).trace().real();
        double conditional = marginal > 0.0 ? quantum::outcome_probability(rho, s) / marginal : 0.0;
        TrialModel m = base;
        m.signal_probability = base.signal_probability * std::clamp(conditional, 0.0, 1.0);

        RunOptions ro{std::max<std::uint64_t>(triggers, 1), options.workers, nullptr};
        Histogram h = run(m, cfg.seed, stream_id(Experiment::Tomography, Condition::Memory, k, options.delay_index), ro);
        if (k == 0)
            summed = h;
        else
            summed += h;
        out.labels.push_back(s.label);
        out.live_time.push_back(h.duration_accumulated);
        out.triggers.push_back(h.n_trials);
        out.histograms.push_back(std::move(h));
    }

    const auto& a = cfg.analysis;
    out.window_center = analysis::peak_center(summed, a.peak_smoothing_bins, retrieval, retrieval + a.efficiency_window);
    auto w = bin_aligned_window(summed, out.window_center, a.detection_window, retrieval + a.noise_window_offset,
                                a.noise_window);
    out.window_width = w.signal_width;
    for (const auto& h : out.histograms)
        out.counts.push_back(analysis::window_sum(h, w.signal_start, w.signal_width));
    return out;
}

StorageSweepResult sweep_storage_time(const config::NodeConfig& cfg, int workers)
{
    cfg.validate();
    const auto& a = cfg.analysis;
    const auto settings = cfg.tomography_settings();
    RunOptions ro{cfg.storage_sweep.triggers, workers, nullptr};

    Histogram input = run(source_model(cfg, Condition::Input), cfg.seed,
                          stream_id(Experiment::StorageSweep, Condition::Input), ro);
    const double path = cfg.memory.filter_transmission * cfg.qst_transmission * cfg.detectors.nir.efficiency;
    const analysis::Transmissions tr{path, path};

    StorageSweepResult out;
    std::vector<analysis::DecayPoint> decay;
    for (std::size_t d = 0; d < cfg.storage_sweep.delays.size(); ++d) {
        const double retrieval = cfg.storage_sweep.delays[d];
        StoragePoint p;
        p.retrieval_time = retrieval;
        p.storage_time = retrieval - cfg.timing.retrieve_at;

        Histogram mem = run(source_model(cfg, Condition::Memory, retrieval), cfg.seed,
                            stream_id(Experiment::StorageSweep, Condition::Memory, 0, d), ro);
        analysis::WindowSpec eff_window{retrieval, a.efficiency_window, retrieval + a.noise_window_offset, a.noise_window};
        p.efficiency = analysis::internal_storage_efficiency(mem, eff_window, input, -a.input_window / 2.0,
                                                             a.input_window, tr);

        double center = analysis::peak_center(mem, a.peak_smoothing_bins, retrieval, retrieval + a.efficiency_window);
        p.snr = analysis::extract_snr(mem, analysis::centered_window(center, a.detection_window,
                                                                     retrieval + a.noise_window_offset, a.noise_window))
                    .snr;

        TomographyRunOptions topt{cfg.storage_sweep.tomography_duration_per_setting, workers, retrieval, d};
        TomographyRun tomo = run_tomography(cfg, settings, topt);
        analysis::TomographyOptions mle;
        mle.max_iterations = cfg.tomography.max_iterations;
        auto res = analysis::mle_tomography(tomo.counts, settings, quantum::bell_phi_plus(), mle);
        p.fidelity = res.fidelity_to_target;
        p.tomography_converged = res.converged;

        decay.push_back({p.storage_time, p.efficiency.efficiency, p.efficiency.sigma});
        out.points.push_back(p);
    }
    if (decay.size() >= 3)
        out.fit = analysis::fit_exponential(decay);
    return out;
}

} // namespace qrnode::sim
