#include "qrnode/analysis.hpp"

#include "qrnode/errors.hpp"
#include "qrnode/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrnode::analysis {

void WindowSpec::validate() const
{
    if (!(signal_width > 0.0) || !(noise_width > 0.0))
        throw DomainError("window widths must be positive");
    bool disjoint = signal_start + signal_width <= noise_start || noise_start + noise_width <= signal_start;
    if (!disjoint)
        throw DomainError("signal and noise windows overlap");
}

double window_sum(const Histogram& hist, double start, double width)
{
    if (!(width > 0.0))
        throw DomainError("window width must be positive");
    const double end = start + width;
    const double slack = 1e-9 * hist.bin_width;
    if (start < hist.origin - slack || end > hist.end() + slack)
        throw DomainError("window extends outside the histogram span");
    double sum = 0.0;
    auto first = static_cast<std::size_t>(std::max(0.0, std::floor((start - hist.origin) / hist.bin_width)));
    for (std::size_t i = first; i < hist.counts.size(); ++i) {
        double b0 = hist.bin_start(i);
        double b1 = b0 + hist.bin_width;
        if (b0 >= end)
            break;
        double frac = (std::min(b1, end) - std::max(b0, start)) / hist.bin_width;
        // Windows aligned to bin edges must give whole counts despite rounding.
        if (frac >= 1.0 - 1e-9)
            sum += static_cast<double>(hist.counts[i]);
        else if (frac > 1e-9)
            sum += static_cast<double>(hist.counts[i]) * frac;
    }
    return sum;
}

double peak_center(const Histogram& hist, int smoothing_bins, double search_start, double search_end)
{
    if (hist.counts.empty())
        throw DomainError("empty histogram");
    const int half = std::max(0, smoothing_bins / 2);
    const auto n = static_cast<long>(hist.counts.size());
    long lo = 0, hi = n;
    if (search_end > search_start) {
        lo = std::clamp(static_cast<long>(std::floor((search_start - hist.origin) / hist.bin_width)), 0L, n - 1);
        hi = std::clamp(static_cast<long>(std::ceil((search_end - hist.origin) / hist.bin_width)), lo + 1, n);
    }
    auto smoothed = [&](long i) {
        double s = 0.0;
        for (long j = std::max(0L, i - half); j <= std::min(n - 1, i + half); ++j)
            s += static_cast<double>(hist.counts[static_cast<std::size_t>(j)]);
        return s;
    };
    double best = -1.0;
    long best_i = lo;
    for (long i = lo; i < hi; ++i) {
        double s = smoothed(i);
        if (s > best) {
            best = s;
            best_i = i;
        }
    }
    double center = hist.bin_start(static_cast<std::size_t>(best_i)) + hist.bin_width / 2.0;
    // Parabola through the smoothed maximum and its neighbours; keeps the centre off the bin grid.
    if (best_i > 0 && best_i + 1 < n) {
        double ym = smoothed(best_i - 1), yp = smoothed(best_i + 1);
        double den = ym - 2.0 * best + yp;
        if (den < 0.0)
            center += 0.5 * (ym - yp) / den * hist.bin_width;
    }
    return center;
}

WindowSpec centered_window(double center, double width, double noise_start, double noise_width)
{
    return {center - width / 2.0, width, noise_start, noise_width};
}

SnrResult extract_snr(const Histogram& hist, const WindowSpec& w)
{
    w.validate();
    SnrResult r;
    r.raw_counts = window_sum(hist, w.signal_start, w.signal_width);
    double noise_total = window_sum(hist, w.noise_start, w.noise_width);
    if (noise_total <= 0.0) {
        noise_total = 1.0;
        r.lower_bound = true;
    }
    r.noise_rate = noise_total / w.noise_width;
    r.noise_counts = r.noise_rate * w.signal_width;
    r.signal_counts = r.raw_counts - (r.lower_bound ? 0.0 : r.noise_counts);
    // Ratio of the two sums first: scaling every bin by k then leaves the SNR exactly unchanged.
    r.snr = (r.raw_counts / noise_total) * (w.noise_width / w.signal_width) - (r.lower_bound ? 0.0 : 1.0);
    return r;
}

EfficiencyResult internal_storage_efficiency(const Histogram& hist_memory, const WindowSpec& memory_window,
                                             const Histogram& hist_input, double input_start, double input_width,
                                             const Transmissions& transmissions)
{
    memory_window.validate();
    if (!(transmissions.memory_path > 0.0) || !(transmissions.input_path > 0.0))
        throw DomainError("path transmissions must be positive");
    double raw = window_sum(hist_memory, memory_window.signal_start, memory_window.signal_width);
    double noise = window_sum(hist_memory, memory_window.noise_start, memory_window.noise_width);
    double scale = memory_window.signal_width / memory_window.noise_width;
    double input = window_sum(hist_input, input_start, input_width);
    if (input <= 0.0)
        throw NumericalError("no input counts; storage efficiency undefined");

    EfficiencyResult r;
    r.retrieved_counts = raw - noise * scale;
    r.input_counts = input;
    r.efficiency = (r.retrieved_counts / transmissions.memory_path) / (input / transmissions.input_path);
    double var_retrieved = raw + noise * scale * scale;
    if (r.retrieved_counts > 0.0)
        r.sigma = std::abs(r.efficiency) *
                  std::sqrt(var_retrieved / (r.retrieved_counts * r.retrieved_counts) + 1.0 / input);
    else
        r.sigma = std::sqrt(var_retrieved) / transmissions.memory_path / (input / transmissions.input_path);
    return r;
}

double mean_photon_number(const Histogram& hist_input, double input_start, double input_width,
                          double transmission, double detector_efficiency, std::uint64_t n_trials)
{
    if (!(transmission > 0.0 && transmission <= 1.0) || !(detector_efficiency > 0.0 && detector_efficiency <= 1.0))
        throw DomainError("transmission factors must lie in (0, 1]");
    if (n_trials == 0)
        throw DomainError("mean photon number needs at least one trial");
    double counts = window_sum(hist_input, input_start, input_width);
    return counts / (static_cast<double>(n_trials) * transmission * detector_efficiency);
}

ExponentialFit fit_exponential(std::span<const DecayPoint> points)
{
    ExponentialFit fit;
    std::vector<DecayPoint> usable;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i].t > points[i - 1].t))
            throw DomainError("decay times must be strictly increasing");
        if (points[i].y > 0.0) {
            usable.push_back(points[i]);
        } else {
            fit.excluded.push_back(i);
            fit.warnings.push_back("point " + std::to_string(i) + " has non-positive y and was excluded");
        }
    }
    if (usable.size() < 3)
        throw NumericalError("exponential fit needs at least 3 points with y > 0");

    const bool weighted = std::all_of(usable.begin(), usable.end(), [](const DecayPoint& p) { return p.sigma > 0.0; });

    // ln y = c - k t, weights (y/σ)².
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d atb = Eigen::Vector2d::Zero();
    for (const auto& p : usable) {
        double w = weighted ? (p.y / p.sigma) * (p.y / p.sigma) : 1.0;
        Eigen::Vector2d row(1.0, -p.t);
        ata += w * row * row.transpose();
        atb += w * row * std::log(p.y);
    }
    Eigen::Vector2d sol = ata.ldlt().solve(atb);
    double amp = std::exp(sol(0));
    double k = sol(1);

    const double span = usable.back().t - usable.front().t;
    if (!(k > 1e-12 / span)) {
        fit.amplitude = amp;
        fit.tau = std::numeric_limits<double>::infinity();
        fit.non_decaying = true;
        fit.warnings.push_back("data do not decay; tau is unbounded");
        return fit;
    }

    auto chi2 = [&](double a, double kk) {
        double s = 0.0;
        for (const auto& p : usable) {
            double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
            double r = p.y - a * std::exp(-kk * p.t);
            s += w * r * r;
        }
        return s;
    };

    // Gauss-Newton on y = A exp(-k t); accept only improving steps.
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    double current = chi2(amp, k);
    for (int it = 0; it < 100; ++it) {
        jtj.setZero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (const auto& p : usable) {
            double w = weighted ? 1.0 / (p.sigma * p.sigma) : 1.0;
            double e = std::exp(-k * p.t);
            Eigen::Vector2d j(e, -amp * p.t * e);
            jtj += w * j * j.transpose();
            jtr += w * j * (p.y - amp * e);
        }
        Eigen::Vector2d step = jtj.ldlt().solve(jtr);
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
            double na = amp + lambda * step(0), nk = k + lambda * step(1);
            double c = chi2(na, nk);
            if (nk > 0.0 && c <= current) {
                amp = na;
                k = nk;
                improved = c < current;
                current = c;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved || std::abs(step(1)) <= 1e-14 * k)
            break;
    }

    Eigen::Matrix2d cov_ak = jtj.inverse();
    if (!weighted && usable.size() > 2)
        cov_ak *= current / static_cast<double>(usable.size() - 2);
    Eigen::Matrix2d jac;
    jac << 1.0, 0.0, 0.0, -1.0 / (k * k);
    fit.amplitude = amp;
    fit.tau = 1.0 / k;
    fit.covariance = jac * cov_ak * jac.transpose();
    fit.tau_sigma = std::sqrt(std::max(fit.covariance(1, 1), 0.0));
    return fit;
}

// ---------------------------------------------------------------------------
// Tomography

namespace {

using quantum::cplx;
using quantum::Matrix4;

constexpr double kProbFloor = 1e-300;

std::vector<Matrix4> joint_operators(std::span<const quantum::MeasurementSetting> settings)
{
    std::vector<Matrix4> ops;
    ops.reserve(settings.size());
    for (const auto& s : settings)
        ops.push_back(s.joint());
    return ops;
}

// 16 real parameters: diagonal of L (real), then (re, im) of the strictly lower part.
using Params = Eigen::Matrix<double, 16, 1>;

Matrix4 unpack(const Params& th)
{
    Matrix4 l = Matrix4::Zero();
    int k = 0;
    for (int i = 0; i < 4; ++i)
        l(i, i) = th(k++);
    for (int i = 1; i < 4; ++i)
        for (int j = 0; j < i; ++j) {
            l(i, j) = cplx(th(k), th(k + 1));
            k += 2;
        }
    return l;
}

Params pack(const Matrix4& l)
{
    Params th;
    int k = 0;
    for (int i = 0; i < 4; ++i)
        th(k++) = l(i, i).real();
    for (int i = 1; i < 4; ++i)
        for (int j = 0; j < i; ++j) {
            th(k++) = l(i, j).real();
            th(k++) = l(i, j).imag();
        }
    return th;
}

// L with L†L = ρ (ρ made positive definite by a tiny shift).
Matrix4 factor(const Matrix4& rho)
{
    Matrix4 m = rho + 1e-9 * Matrix4::Identity();
    // ρ = L†L with L lower triangular: reverse the order and use a standard Cholesky.
    Matrix4 perm = Matrix4::Zero();
    for (int i = 0; i < 4; ++i)
        perm(i, 3 - i) = 1.0;
    Matrix4 rev = perm * m * perm;
    Eigen::LLT<Matrix4> llt(rev);
    Matrix4 c = llt.matrixL(); // rev = C C†, C lower
    // m = (P C P)(P C P)† ; P C P is upper triangular U with m = U U†, so L = U†.
    Matrix4 u = perm * c * perm;
    return u.adjoint();
}

struct Objective
{
    std::span<const double> counts;
    const std::vector<Matrix4>& ops;
    double total = 0.0;

    // Normalized profiled negative log-likelihood and its gradient.
    double operator()(const Params& th, Params* grad) const
    {
        Matrix4 l = unpack(th);
        Matrix4 a = l.adjoint() * l;
        std::vector<double> p(ops.size());
        double sum_p = 0.0;
        for (std::size_t k = 0; k < ops.size(); ++k) {
            p[k] = std::max((a * ops[k]).trace().real(), kProbFloor);
            sum_p += p[k];
        }
        double f = total * std::log(sum_p);
        for (std::size_t k = 0; k < ops.size(); ++k)
            if (counts[k] > 0.0)
                f -= counts[k] * std::log(p[k]);
        if (grad) {
            Matrix4 g = Matrix4::Zero();
            for (std::size_t k = 0; k < ops.size(); ++k) {
                double c = total / sum_p - (counts[k] > 0.0 ? counts[k] / p[k] : 0.0);
                g += c * (l * ops[k]);
            }
            int idx = 0;
            for (int i = 0; i < 4; ++i)
                (*grad)(idx++) = 2.0 * g(i, i).real();
            for (int i = 1; i < 4; ++i)
                for (int j = 0; j < i; ++j) {
                    (*grad)(idx++) = 2.0 * g(i, j).real();
                    (*grad)(idx++) = 2.0 * g(i, j).imag();
                }
            *grad /= total;
        }
        return f / total;
    }
};

quantum::DensityMatrix normalized(const Matrix4& a)
{
    Matrix4 h = 0.5 * (a + a.adjoint());
    double tr = h.trace().real();
    return quantum::DensityMatrix::trusted(h / tr);
}

void check_inputs(std::span<const double> counts, std::span<const quantum::MeasurementSetting> settings)
{
    if (counts.size() != settings.size())
        throw DomainError("counts and settings differ in length");
    if (!quantum::informationally_complete(settings))
        throw DomainError("measurement settings are not informationally complete");
    double total = 0.0;
    for (double c : counts) {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw DomainError("counts must be finite and non-negative");
        total += c;
    }
    if (!(total > 0.0))
        throw DomainError("tomography needs a positive total count");
}

} // namespace

double tomography_log_likelihood(const quantum::Matrix4& rho, std::span<const double> counts,
                                 std::span<const quantum::MeasurementSetting> settings)
{
    double total = 0.0, sum_p = 0.0;
    std::vector<double> p(settings.size());
    for (std::size_t k = 0; k < settings.size(); ++k) {
        p[k] = std::max((rho * settings[k].joint()).trace().real(), 0.0);
        sum_p += p[k];
        total += counts[k];
    }
    const double scale = total / sum_p;
    double ll = 0.0;
    for (std::size_t k = 0; k < settings.size(); ++k) {
        double mu = scale * p[k];
        if (counts[k] > 0.0)
            ll += mu > 0.0 ? counts[k] * std::log(mu) : -std::numeric_limits<double>::infinity();
        ll -= mu;
    }
    return ll;
}

quantum::DensityMatrix linear_inversion(std::span<const double> counts,
                                        std::span<const quantum::MeasurementSetting> settings)
{
    check_inputs(counts, settings);
    // Coordinates of a Hermitian A in the Pauli-product basis: A = Σ r_ij σ_i⊗σ_j / 4.
    std::array<quantum::Matrix2, 4> s;
    s[0] = quantum::Matrix2::Identity();
    s[1] << 0, 1, 1, 0;
    s[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    s[3] << 1, 0, 0, -1;
    std::array<Matrix4, 16> basis;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Matrix4 b;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    b.block<2, 2>(2 * r, 2 * c) = s[i](r, c) * s[j];
            basis[4 * i + j] = b / 4.0;
        }
    const auto n = static_cast<Eigen::Index>(settings.size());
    Eigen::MatrixXd design(n, 16);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Matrix4 op = settings[static_cast<std::size_t>(k)].joint();
        for (int m = 0; m < 16; ++m)
            design(k, m) = (basis[m] * op).trace().real();
        rhs(k) = counts[static_cast<std::size_t>(k)];
    }
    Eigen::VectorXd r = design.colPivHouseholderQr().solve(rhs);
    Matrix4 a = Matrix4::Zero();
    for (int m = 0; m < 16; ++m)
        a += r(m) * basis[m];
    a = 0.5 * (a + a.adjoint());

    Eigen::SelfAdjointEigenSolver<Matrix4> es(a);
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    if (!(ev.sum() > 0.0))
        return quantum::maximally_mixed();
    Matrix4 proj = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    return normalized(proj);
}

TomographyResult mle_tomography(std::span<const double> counts,
                                std::span<const quantum::MeasurementSetting> settings,
                                const quantum::DensityMatrix& target,
                                const TomographyOptions& options)
{
    check_inputs(counts, settings);
    const auto ops = joint_operators(settings);
    double total = 0.0;
    for (double c : counts)
        total += c;
    Objective objective{counts, ops, total};

    TomographyResult result;
    result.initial = linear_inversion(counts, settings);
    result.initial_log_likelihood = tomography_log_likelihood(result.initial.matrix(), counts, settings);

    Params x = pack(factor(result.initial.matrix()));
    x /= x.norm();
    Params g;
    double f = objective(x, &g);
    Eigen::Matrix<double, 16, 16> h = Eigen::Matrix<double, 16, 16>::Identity();

    // BFGS with Armijo backtracking (c1 = 1e-4, halving, at most 60 halvings).
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (g.norm() < options.gradient_tol) {
            result.converged = true;
            break;
        }
        Params dir = -h * g;
        if (dir.dot(g) >= 0.0) {
            h.setIdentity();
            dir = -g;
        }
        double step = 1.0;
        Params xn, gn;
        double fn = f;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            xn = x + step * dir;
            fn = objective(xn, &gn);
            if (std::isfinite(fn) && fn <= f + 1e-4 * step * dir.dot(g)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No descent along the quasi-Newton direction; the iterate is stationary to working precision.
            result.converged = g.norm() < 1e-5;
            break;
        }
        Params s = xn - x;
        Params y = gn - g;
        x = xn;
        f = fn;
        g = gn;
        if (s.norm() < options.step_tol) {
            result.converged = true;
            ++it;
            break;
        }
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            double rho_k = 1.0 / sy;
            Eigen::Matrix<double, 16, 16> id = Eigen::Matrix<double, 16, 16>::Identity();
            h = (id - rho_k * s * y.transpose()) * h * (id - rho_k * y * s.transpose()) + rho_k * s * s.transpose();
        }
        // The objective is scale invariant; keep the parameters near the unit sphere.
        double nrm = x.norm();
        if (nrm > 10.0 || nrm < 0.1) {
            x /= nrm;
            f = objective(x, &g);
            h.setIdentity();
        }
    }
    result.iterations = it;

    Matrix4 l = unpack(x);
    quantum::DensityMatrix rho = normalized(l.adjoint() * l);
    double ll = tomography_log_likelihood(rho.matrix(), counts, settings);
    // Never report a state worse than the starting point.
    if (ll < result.initial_log_likelihood) {
        rho = result.initial;
        ll = result.initial_log_likelihood;
    }
    result.rho = rho;
    result.log_likelihood = ll;
    result.fidelity_to_target = quantum::fidelity(rho, target);
    return result;
}

double bootstrap_fidelity_percentile(std::span<const double> counts,
                                     std::span<const quantum::MeasurementSetting> settings,
                                     int resamples, double percentile, std::uint64_t seed,
                                     const quantum::DensityMatrix& target)
{
    if (resamples < 1 || !(percentile >= 0.0 && percentile <= 100.0))
        throw DomainError("bootstrap needs resamples >= 1 and a percentile in [0, 100]");
    std::vector<double> fids;
    fids.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        std::vector<double> resampled(counts.size());
        double total = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            rng::TrialStream stream(seed, 0xB00757, static_cast<std::uint64_t>(r) * counts.size() + k);
            resampled[k] = stream.poisson(counts[k]);
            total += resampled[k];
        }
        if (total <= 0.0)
            continue;
        fids.push_back(mle_tomography(resampled, settings, target).fidelity_to_target);
    }
    if (fids.empty())
        throw NumericalError("all bootstrap resamples were empty");
    std::sort(fids.begin(), fids.end());
    double pos = percentile / 100.0 * static_cast<double>(fids.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, fids.size() - 1);
    return fids[lo] + (pos - static_cast<double>(lo)) * (fids[hi] - fids[lo]);
}

// ---------------------------------------------------------------------------

SweepResult window_sweep(const Histogram& hist, double center, std::span<const double> window_sizes,
                         double noise_start, double noise_width, const SweepCorrections& corrections,
                         double trial_rate)
{
    for (double c : {corrections.qst, corrections.detector, corrections.vv_fraction})
        if (!(c > 0.0 && c <= 1.0))
            throw DomainError("sweep corrections must lie in (0, 1]");
    if (hist.n_trials == 0)
        throw DomainError("histogram has no trials");
    SweepResult out;
    const double n = static_cast<double>(hist.n_trials);
    for (double w : window_sizes) {
        SnrResult snr = extract_snr(hist, centered_window(center, w, noise_start, noise_width));
        double per_trial = snr.raw_counts / n;
        out.window_sizes.push_back(w);
        out.per_trial_success.push_back(per_trial);
        out.rates.push_back(per_trial * trial_rate / corrections.product());
        out.snr.push_back(snr.snr);
        out.fidelities.push_back(quantum::fidelity_from_snr(std::max(snr.snr, 0.0)));
    }
    return out;
}

std::vector<double> isotonic_decreasing(std::span<const double> y)
{
    // Pool adjacent violators on blocks of (mean, weight).
    std::vector<double> mean;
    std::vector<double> weight;
    for (double v : y) {
        mean.push_back(v);
        weight.push_back(1.0);
        while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
            double w = weight[weight.size() - 2] + weight.back();
            double m = (mean[mean.size() - 2] * weight[weight.size() - 2] + mean.back() * weight.back()) / w;
            mean.pop_back();
            weight.pop_back();
            mean.back() = m;
            weight.back() = w;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (std::size_t b = 0; b < mean.size(); ++b)
        for (int k = 0; k < static_cast<int>(weight[b]); ++k)
            out.push_back(mean[b]);
    return out;
}

UtilityResult utility_time(std::span<const double> times, std::span<const double> fidelities, double threshold)
{
    if (times.size() != fidelities.size() || times.empty())
        throw DomainError("utility time needs matching, non-empty time and fidelity arrays");
    if (!(threshold > 0.25 && threshold < 1.0))
        throw DomainError("utility threshold must lie in (0.25, 1)");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw DomainError("utility times must be strictly increasing");

    std::vector<double> f = isotonic_decreasing(fidelities);
    UtilityResult r;
    if (f[0] < threshold) {
        r.status = CrossingStatus::AlreadyBelow;
        r.time = times[0];
        return r;
    }
    if (f[0] == threshold) {
        r.time = times[0];
        return r;
    }
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (f[i] <= threshold) {
            double frac = (f[i - 1] - threshold) / (f[i - 1] - f[i]);
            r.time = times[i - 1] + frac * (times[i] - times[i - 1]);
            return r;
        }
    }
    r.status = CrossingStatus::NeverCrosses;
    r.time = times.back();
    return r;
}

std::vector<double> model_fidelity_curve(double snr0, double tau, std::span<const double> times)
{
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times)
        out.push_back(quantum::fidelity_from_snr(snr0 * std::exp(-t / tau)));
    return out;
}

} // namespace qrnode::analysis
