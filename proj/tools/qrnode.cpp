// Command-line front end: loads a node configuration, runs one experiment and
// writes CSV/JSON results plus a manifest into the output directory.

#include "qrnode/config.hpp"
#include "qrnode/errors.hpp"
#include "qrnode/experiments.hpp"
#include "qrnode/io.hpp"
#include "qrnode/optics.hpp"
#include "qrnode/spectra.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qrnode;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3, kWarnings = 4 };

struct Common
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::string out = "run";
    std::optional<int> workers;
    std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config_path, "Node configuration file (defaults built in)");
    sub->add_option("--seed", c.seed, "Override the configured seed");
    sub->add_option("--trials", c.trials, "Number of trials or triggers")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "Curve output format")->check(CLI::IsMember({"csv", "json"}));
}

// Collects every file written for the manifest.
class RunDir
{
public:
    RunDir(fs::path dir, std::string format) : dir_(std::move(dir)), format_(std::move(format))
    {
        fs::create_directories(dir_);
    }

    void table(const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns)
    {
        if (format_ == "csv") {
            io::write_columns_csv(dir_ / (name + ".csv"), header, columns);
            outputs_.push_back(name + ".csv");
        } else {
            json j;
            for (std::size_t k = 0; k < header.size(); ++k)
                j[header[k]] = columns[k];
            io::write_json(dir_ / (name + ".json"), j);
            outputs_.push_back(name + ".json");
        }
    }

    void histogram(const std::string& name, const Histogram& h)
    {
        if (format_ == "csv") {
            io::write_histogram_csv(dir_ / (name + ".csv"), h);
            outputs_.push_back(name + ".csv");
        } else {
            std::vector<double> starts, counts;
            for (std::size_t i = 0; i < h.counts.size(); ++i) {
                starts.push_back(h.bin_start(i) * 1e9);
                counts.push_back(static_cast<double>(h.counts[i]));
            }
            table(name, {"bin_start_ns", "counts"}, {starts, counts});
        }
    }

    void json_file(const std::string& name, const json& j)
    {
        io::write_json(dir_ / (name + ".json"), j);
        outputs_.push_back(name + ".json");
    }

    void text_file(const std::string& name, const std::string& text)
    {
        std::ofstream(dir_ / name, std::ios::binary) << text;
        outputs_.push_back(name);
    }

    const fs::path& dir() const { return dir_; }
    const std::vector<std::string>& outputs() const { return outputs_; }

private:
    fs::path dir_;
    std::string format_;
    std::vector<std::string> outputs_;
};

struct Context
{
    config::NodeConfig cfg;
    Common common;
    std::vector<std::string> warnings;

    int workers() const { return cfg.workers; }
    std::uint64_t trials_or(std::uint64_t fallback) const { return common.trials.value_or(fallback); }
};

double ns(double s)
{
    return s * 1e9;
}

json metrics_json(const experiments::MemoryMetrics& m, const config::NodeConfig& cfg)
{
    return {{"snr", m.snr},
            {"snr_lower_bound", m.snr_lower_bound},
            {"efficiency", m.efficiency},
            {"efficiency_sigma", m.efficiency_sigma},
            {"mean_photon_number", m.mean_photon_number},
            {"snr_n1", m.snr_n1},
            {"noise_floor_per_trial", m.noise_floor_per_trial},
            {"window_center_ns", ns(m.window_center)},
            {"detection_window_ns", ns(cfg.analysis.detection_window)}};
}

void memory_histograms(Context& ctx, RunDir& out, experiments::Mode mode, bool dump_events)
{
    const std::uint64_t n = ctx.trials_or(1'000'000);
    experiments::ConditionHistograms h;
    if (dump_events) {
        std::ostringstream events;
        sim::RunOptions ro{n, ctx.workers(), &events};
        auto run = mode == experiments::Mode::Solo ? sim::run_solo : sim::run_source;
        h = {run(ctx.cfg, sim::Condition::Memory, ro), run(ctx.cfg, sim::Condition::Input, ro),
             run(ctx.cfg, sim::Condition::NoInput, ro)};
        out.text_file("events.tsv", events.str());
    } else {
        h = experiments::simulate_conditions(ctx.cfg, mode, n, ctx.workers());
    }
    out.histogram("histogram_memory", h.memory);
    out.histogram("histogram_input", h.input);
    out.histogram("histogram_no_input", h.no_input);

    auto m = experiments::analyze_conditions(ctx.cfg, h);
    json j = metrics_json(m, ctx.cfg);
    j["mode"] = mode == experiments::Mode::Solo ? "solo" : "source";
    j["trials"] = n;
    j["duration_s"] = h.memory.duration_accumulated;
    if (mode == experiments::Mode::Source)
        j["heralding_eta"] = m.mean_photon_number;
    if (m.snr_lower_bound)
        ctx.warnings.push_back("no noise counts observed; SNR is a lower bound");
    out.json_file("metrics", j);
}

void cmd_tomography(Context& ctx, RunDir& out, std::optional<double> duration, const std::string& target_spec)
{
    quantum::DensityMatrix target = quantum::bell_phi_plus();
    if (target_spec.rfind("werner:", 0) == 0)
        target = quantum::werner_state(std::stod(target_spec.substr(7)));
    else if (target_spec != "phi_plus")
        throw DomainError("unknown target state \"" + target_spec + "\"; use phi_plus or werner:<a>");

    double per_setting = duration.value_or(ctx.cfg.tomography.duration_per_setting);
    if (ctx.common.trials)
        per_setting = static_cast<double>(*ctx.common.trials) / ctx.cfg.source.telecom_rate;
    auto t = experiments::run_tomography(ctx.cfg, per_setting, ctx.workers(), target);

    json table = json::array();
    std::ostringstream csv;
    csv << "setting,counts,live_time_s,triggers\n";
    for (std::size_t k = 0; k < t.run.labels.size(); ++k) {
        csv << t.run.labels[k] << ',' << io::format_number(t.run.counts[k]) << ','
            << io::format_number(t.run.live_time[k]) << ',' << t.run.triggers[k] << '\n';
        table.push_back({{"setting", t.run.labels[k]},
                         {"counts", t.run.counts[k]},
                         {"live_time_s", t.run.live_time[k]},
                         {"triggers", t.run.triggers[k]}});
    }
    if (ctx.common.format == "csv")
        out.text_file("counts.csv", csv.str());
    else
        out.json_file("counts", table);

    json j{{"informationally_complete", t.run.informationally_complete},
           {"window_center_ns", ns(t.run.window_center)},
           {"window_width_ns", ns(t.run.window_width)},
           {"duration_per_setting_s", per_setting},
           {"target", target_spec}};
    if (!t.run.informationally_complete) {
        ctx.warnings.push_back("measurement settings are not informationally complete; no reconstruction");
    } else {
        const auto& r = t.result;
        j["rho"] = io::density_matrix_json(r.rho.matrix());
        j["fidelity"] = r.fidelity_to_target;
        j["log_likelihood"] = r.log_likelihood;
        j["initial_log_likelihood"] = r.initial_log_likelihood;
        j["converged"] = r.converged;
        j["iterations"] = r.iterations;
        j["purity"] = r.rho.purity();
        j["chsh_max"] = quantum::chsh_max(r.rho);
        j["linear_inversion_fidelity"] = quantum::fidelity(r.initial, target);
        if (t.bootstrap_lower)
            j["bootstrap_lower_bound"] = *t.bootstrap_lower;
        if (!r.converged)
            ctx.warnings.push_back("maximum-likelihood reconstruction did not converge");
    }
    out.json_file("tomography", j);
}

void cmd_sweep_window(Context& ctx, RunDir& out)
{
    auto run = experiments::run_window_sweep(ctx.cfg, ctx.trials_or(ctx.cfg.analysis.sweep_triggers), ctx.workers());
    const auto& s = run.sweep;
    std::vector<double> w_ns;
    for (double w : s.window_sizes)
        w_ns.push_back(ns(w));
    out.table("sweep", {"window_ns", "rate_pairs_per_s", "fidelity", "per_trial"},
              {w_ns, s.rates, s.fidelities, s.per_trial_success});
    out.histogram("histogram_memory", run.histogram);

    auto nearest = [&](double w) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < s.window_sizes.size(); ++i)
            if (std::abs(s.window_sizes[i] - w) < std::abs(s.window_sizes[best] - w))
                best = i;
        return best;
    };
    auto point = [&](std::size_t i) {
        return json{{"window_ns", w_ns[i]},
                    {"rate_pairs_per_s", s.rates[i]},
                    {"fidelity", s.fidelities[i]},
                    {"per_trial", s.per_trial_success[i]},
                    {"snr", s.snr[i]}};
    };
    const auto& c = ctx.cfg.analysis.corrections;
    out.json_file("summary", {{"center_ns", ns(run.center)},
                              {"triggers", run.histogram.n_trials},
                              {"corrections_product", c.product()},
                              {"smallest_window", point(0)},
                              {"at_7p7_ns", point(nearest(7.7e-9))},
                              {"at_detection_window", point(nearest(ctx.cfg.analysis.detection_window))}});
}

void cmd_utility(Context& ctx, RunDir& out)
{
    auto cfg = ctx.cfg;
    if (ctx.common.trials)
        cfg.storage_sweep.triggers = *ctx.common.trials;
    auto sweep = sim::sweep_storage_time(cfg, ctx.workers());
    auto source = experiments::analyze_conditions(
        cfg, experiments::simulate_conditions(cfg, experiments::Mode::Source, cfg.storage_sweep.triggers, ctx.workers()));

    std::vector<double> rt, stt, eff, sig, snr, fid;
    for (const auto& p : sweep.points) {
        rt.push_back(p.retrieval_time * 1e6);
        stt.push_back(p.storage_time * 1e6);
        eff.push_back(p.efficiency.efficiency);
        sig.push_back(p.efficiency.sigma);
        snr.push_back(p.snr);
        fid.push_back(p.fidelity);
        if (!p.tomography_converged)
            ctx.warnings.push_back("tomography at retrieval " + io::format_number(p.retrieval_time * 1e6) +
                                   " us did not converge");
    }
    out.table("storage_sweep", {"retrieval_us", "storage_time_us", "efficiency", "efficiency_sigma", "snr", "fidelity"},
              {rt, stt, eff, sig, snr, fid});

    json j{{"snr0", source.snr}, {"tau_fit_us", sweep.fit.tau * 1e6}, {"tau_sigma_us", sweep.fit.tau_sigma * 1e6},
           {"eta0_fit", sweep.fit.amplitude}};
    for (const auto& w : sweep.fit.warnings)
        ctx.warnings.push_back(w);
    if (sweep.fit.non_decaying || !std::isfinite(sweep.fit.tau)) {
        ctx.warnings.push_back("efficiency does not decay; no utility model");
        out.json_file("utility", j);
        return;
    }
    auto rep = experiments::utility_report(cfg, source.snr, sweep.fit.tau, sweep);
    std::vector<double> t_us;
    for (double t : rep.times)
        t_us.push_back(t * 1e6);
    out.table("model_curve", {"storage_time_us", "fidelity"}, {t_us, rep.model_fidelity});

    auto status = [](analysis::CrossingStatus s) {
        switch (s) {
        case analysis::CrossingStatus::Crossed:
            return "crossed";
        case analysis::CrossingStatus::NeverCrosses:
            return "never_crosses";
        case analysis::CrossingStatus::AlreadyBelow:
            return "already_below";
        }
        return "unknown";
    };
    json crossings = json::array();
    for (std::size_t i = 0; i < cfg.analysis.utility_thresholds.size(); ++i) {
        json c{{"threshold", cfg.analysis.utility_thresholds[i]},
               {"model_time_us", rep.model_crossings[i].time * 1e6},
               {"model_status", status(rep.model_crossings[i].status)}};
        if (i < rep.simulated_crossings.size()) {
            c["simulated_time_us"] = rep.simulated_crossings[i].time * 1e6;
            c["simulated_status"] = status(rep.simulated_crossings[i].status);
        }
        crossings.push_back(c);
    }
    j["crossings"] = crossings;
    out.json_file("utility", j);
}

void cmd_spectral_scan(Context& ctx, RunDir& out)
{
    const auto& sp = ctx.cfg.spectra;
    const auto& cavity = ctx.cfg.source.telecom_cavity;
    std::vector<double> grid;
    const auto n = static_cast<long>(std::floor((sp.scan_max - sp.scan_min) / sp.scan_step + 1e-9));
    for (long i = 0; i <= n; ++i)
        grid.push_back(sp.scan_min + static_cast<double>(i) * sp.scan_step);

    auto points = spectra::heralding_scan(sp.joint, cavity, grid);
    std::vector<double> d_ghz, rate, eta, tel, mem_d, mem_eff;
    for (std::size_t i = 0; i < points.size(); ++i) {
        d_ghz.push_back(grid[i] * 1e-9);
        rate.push_back(points[i].rate);
        eta.push_back(points[i].eta.value_or(std::numeric_limits<double>::quiet_NaN()));
        tel.push_back(spectra::telecom_spectrum(sp.joint, grid[i]));
        double nir = sp.joint.nir_detuning(grid[i]);
        mem_d.push_back(nir * 1e-9);
        mem_eff.push_back(spectra::memory_efficiency_vs_detuning(sp.memory, nir));
    }
    out.table("scan", {"detuning_GHz", "rate_arb", "eta"}, {d_ghz, rate, eta});
    out.table("telecom_spectrum", {"detuning_GHz", "rate_arb"}, {d_ghz, tel});
    out.table("memory_acceptance", {"nir_detuning_GHz", "memory_efficiency"}, {mem_d, mem_eff});

    auto op = spectra::select_operating_point(sp.joint, cavity, sp.memory, sp.operating_scan_step);
    json maxima = json::array(), dips = json::array();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (std::isfinite(eta[i]) && eta[i] > eta[i - 1] && eta[i] >= eta[i + 1])
            maxima.push_back({{"detuning_GHz", d_ghz[i]}, {"eta", eta[i]}});
        if (tel[i] < tel[i - 1] && tel[i] <= tel[i + 1])
            dips.push_back(d_ghz[i]);
    }
    out.json_file("summary", {{"operating_point",
                               {{"cavity_detuning_GHz", op.cavity_detuning * 1e-9},
                                {"eta", op.eta},
                                {"rate_arb", op.rate},
                                {"memory_efficiency", op.memory_efficiency},
                                {"score", op.score}}},
                              {"eta_local_maxima", maxima},
                              {"telecom_dips_GHz", dips}});
}

void cmd_filter_design(Context& ctx, RunDir& out, std::optional<double> detuning_ghz)
{
    const auto& f = ctx.cfg.filter;
    const double query = detuning_ghz ? *detuning_ghz * 1e9 : f.query_detuning;
    double fsr = 0.0;
    for (const auto& s : f.cascade.stages)
        fsr = std::max(fsr, s.cavity.fsr);
    std::vector<double> d, t, db;
    for (int i = -3000; i <= 3000; ++i) {
        double x = fsr * static_cast<double>(i) / 3000.0;
        d.push_back(x * 1e-9);
        t.push_back(optics::cascade_transmission(f.cascade, x));
        db.push_back(optics::cascade_suppression_db(f.cascade, x));
    }
    out.table("transmission", {"detuning_GHz", "transmission", "suppression_dB"}, {d, t, db});

    json j{{"query_detuning_GHz", query * 1e-9},
           {"suppression_dB", optics::cascade_suppression_db(f.cascade, query)},
           {"total_passes", f.cascade.total_passes()},
           {"peak_transmission", optics::cascade_transmission(f.cascade, 0.0)},
           {"effective_fwhm_MHz", optics::cascade_effective_fwhm(f.cascade) * 1e-6},
           {"measured_bandwidth_MHz", f.measured_bandwidth * 1e-6}};
    bool identical = !f.cascade.stages.empty();
    for (const auto& s : f.cascade.stages)
        identical = identical && s.cavity.fwhm == f.cascade.stages[0].cavity.fwhm && s.cavity.center_detuning == 0.0;
    if (identical)
        j["identical_passes_fwhm_MHz"] =
            optics::identical_passes_fwhm(f.cascade.stages[0].cavity.fwhm, f.cascade.total_passes()) * 1e-6;
    out.json_file("summary", j);
}

void cmd_pulse(Context& ctx, RunDir& out, std::optional<double> bandwidth_mhz)
{
    const double bw = bandwidth_mhz ? *bandwidth_mhz * 1e6 : ctx.cfg.source.input_bandwidth;
    const double fwhm_t = optics::kGaussianTimeBandwidth / bw;
    auto pulse = optics::gaussian_pulse(fwhm_t, fwhm_t / 64.0, 16.0 * fwhm_t);
    auto spec = optics::spectrum_of(pulse);

    std::vector<double> t, inten;
    for (std::size_t i = 0; i < pulse.samples.size(); ++i) {
        t.push_back(ns(pulse.time_at(i)));
        inten.push_back(pulse.samples[i] * pulse.samples[i]);
    }
    out.table("pulse", {"time_ns", "intensity"}, {t, inten});
    std::vector<double> fr;
    for (double x : spec.frequency)
        fr.push_back(x * 1e-6);
    out.table("spectrum", {"frequency_MHz", "power"}, {fr, spec.power});

    const double dt = optics::intensity_fwhm(pulse);
    const double dnu = optics::fwhm_of(spec);
    out.json_file("summary", {{"spectral_fwhm_MHz", dnu * 1e-6},
                              {"temporal_fwhm_ns", ns(dt)},
                              {"time_bandwidth_product", dt * dnu},
                              {"energy_time", pulse.energy()},
                              {"energy_frequency", spec.energy()}});
}

std::string command_line(int argc, char** argv)
{
    std::string s;
    for (int i = 0; i < argc; ++i)
        s += (i ? " " : "") + std::string(argv[i]);
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Warm-vapor repeater node simulator and analysis"};
    app.require_subcommand(1);
    Common common;
    bool dump_events = false;
    std::optional<double> duration, detuning, bandwidth;
    std::string target = "phi_plus";

    auto* solo = app.add_subcommand("solo", "Memory with weak coherent input: histograms and SNR metrics");
    auto* source = app.add_subcommand("source", "Memory with heralded source photons: histograms and metrics");
    auto* tomo = app.add_subcommand("tomography", "Simulated 16-setting tomography and MLE reconstruction");
    auto* sweep = app.add_subcommand("sweep-window", "Pair rate and fidelity against detection window size");
    auto* utility = app.add_subcommand("utility", "Storage-time sweep, coherence fit and utility times");
    auto* scan = app.add_subcommand("spectral-scan", "Heralding efficiency against telecom cavity detuning");
    auto* filter = app.add_subcommand("filter-design", "Cascade transmission and noise suppression");
    auto* pulse = app.add_subcommand("pulse", "Gaussian pulse time and frequency widths");
    for (auto* sub : {solo, source, tomo, sweep, utility, scan, filter, pulse})
        add_common(sub, common);
    for (auto* sub : {solo, source})
        sub->add_flag("--dump-events", dump_events, "Write every detection to events.tsv");
    tomo->add_option("--duration-s", duration, "Acquisition time per setting")->check(CLI::PositiveNumber);
    tomo->add_option("--target", target, "Target state: phi_plus or werner:<a>");
    filter->add_option("--detuning-GHz", detuning, "Detuning at which to report the suppression");
    pulse->add_option("--bandwidth-MHz", bandwidth, "Spectral FWHM of the pulse")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    Context ctx;
    ctx.common = common;
    try {
        ctx.cfg = common.config_path.empty() ? config::defaults() : config::load(common.config_path);
        if (common.seed)
            ctx.cfg.seed = *common.seed;
        if (common.workers)
            ctx.cfg.workers = *common.workers;
        ctx.cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    }

    io::RunManifest manifest;
    manifest.start_time = io::utc_timestamp();
    try {
        RunDir out(common.out, common.format);
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "solo")
            memory_histograms(ctx, out, experiments::Mode::Solo, dump_events);
        else if (name == "source")
            memory_histograms(ctx, out, experiments::Mode::Source, dump_events);
        else if (name == "tomography")
            cmd_tomography(ctx, out, duration, target);
        else if (name == "sweep-window")
            cmd_sweep_window(ctx, out);
        else if (name == "utility")
            cmd_utility(ctx, out);
        else if (name == "spectral-scan")
            cmd_spectral_scan(ctx, out);
        else if (name == "filter-design")
            cmd_filter_design(ctx, out, detuning);
        else if (name == "pulse")
            cmd_pulse(ctx, out, bandwidth);

        // The resolved configuration reproduces this run: --config <out>/config.json.
        out.json_file("config", config::to_json(ctx.cfg));
        manifest.config_hash = config::config_hash(ctx.cfg);
        manifest.seed = ctx.cfg.seed;
        manifest.version = io::code_version();
        manifest.command = command_line(argc, argv);
        manifest.end_time = io::utc_timestamp();
        manifest.outputs = out.outputs();
        manifest.config = config::to_json(ctx.cfg);
        json mj = manifest.to_json();
        mj["warnings"] = ctx.warnings;
        io::write_json(out.dir() / "manifest.json", mj);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }

    for (const auto& w : ctx.warnings)
        std::cerr << "warning: " << w << '\n';
    return ctx.warnings.empty() ? kOk : kWarnings;
}
