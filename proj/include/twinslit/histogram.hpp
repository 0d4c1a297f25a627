#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace twinslit {

// Binned counts over a screen coordinate. Out-of-range hits are tracked so
// sum(counts) never silently disagrees with the number offered.
struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    int nbins = 2;
    std::vector<std::int64_t> counts;
    std::int64_t total = 0;      // everything offered, in range or not
    std::int64_t underflow = 0;
    std::int64_t overflow = 0;

    Histogram() : counts(2, 0) {}
    Histogram(double lo, double hi, int nbins) : lo(lo), hi(hi), nbins(nbins), counts(nbins, 0) {
        if (!(hi > lo) || nbins < 2) throw std::invalid_argument("histogram needs hi > lo, nbins >= 2");
    }

    double bin_width() const { return (hi - lo) / nbins; }
    double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }

    void fill(double x) {
        ++total;
        if (x < lo) {
            ++underflow;
        } else if (x >= hi) {
            ++overflow;
        } else {
            int i = static_cast<int>((x - lo) / bin_width());
            if (i >= nbins) i = nbins - 1;  // x just below hi after rounding
            ++counts[i];
        }
    }

    void merge(const Histogram& other) {
        for (int i = 0; i < nbins; ++i) counts[i] += other.counts[i];
        total += other.total;
        underflow += other.underflow;
        overflow += other.overflow;
    }

    std::int64_t in_range() const { return total - underflow - overflow; }
};

}  // namespace twinslit
