#pragma once

// Counter-based random streams: the generator for (seed, stream, counter) is a
// pure function of those three values, so trial i draws the same numbers no
// matter which worker evaluates it. Distributions are implemented here rather
// than with <random> so the bit stream is identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <limits>

namespace qrnode::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
{
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

class TrialStream
{
public:
    using result_type = std::uint64_t;

    TrialStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
        : state_(derive_key(seed, stream, counter))
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double exponential(double mean) { return -mean * std::log(uniform_open0()); }

    double normal()
    {
        double u1 = uniform_open0();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Inversion sampling; intended for the small means used per trial.
    unsigned poisson(double mean)
    {
        if (mean <= 0.0)
            return 0;
        if (mean > 30.0)
            return poisson_large(mean);
        double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        unsigned k = 0;
        while (u >= cdf && k < 1000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

private:
    // Sum of independent chunks keeps inversion numerically safe for large means.
    unsigned poisson_large(double mean)
    {
        unsigned total = 0;
        while (mean > 30.0) {
            total += poisson(30.0);
            mean -= 30.0;
        }
        return total + poisson(mean);
    }

    std::uint64_t state_;
};

} // namespace qrnode::rng
