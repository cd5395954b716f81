#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qrnode {

// Time-binned detection counts relative to the trial trigger.
struct Histogram
{
    double bin_width = 0.0;
    double origin = 0.0;
    std::vector<std::uint64_t> counts;
    double duration_accumulated = 0.0; // wall-clock seconds the trials represent
    std::uint64_t n_trials = 0;

    static Histogram with_span(double origin, double end, double bin_width)
    {
        Histogram h;
        h.bin_width = bin_width;
        h.origin = origin;
        auto n = static_cast<std::size_t>((end - origin) / bin_width + 1.0 - 1e-9);
        h.counts.assign(n, 0);
        return h;
    }

    double bin_start(std::size_t i) const { return origin + bin_width * static_cast<double>(i); }
    double end() const { return bin_start(counts.size()); }

    std::uint64_t total() const
    {
        std::uint64_t s = 0;
        for (auto c : counts)
            s += c;
        return s;
    }

    // Commutative merge of independent runs over the same binning.
    Histogram& operator+=(const Histogram& other)
    {
        if (other.counts.size() != counts.size() || other.bin_width != bin_width || other.origin != origin)
            throw std::invalid_argument("histogram binning mismatch");
        for (std::size_t i = 0; i < counts.size(); ++i)
            counts[i] += other.counts[i];
        duration_accumulated += other.duration_accumulated;
        n_trials += other.n_trials;
        return *this;
    }
};

} // namespace qrnode
