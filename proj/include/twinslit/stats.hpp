#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twinslit {

namespace detail {

// Regularized upper incomplete gamma Q(a, x), series + continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P by series, Q = 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Q by Lentz continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace detail

// Survival function of the chi-squared distribution with k degrees of freedom.
inline double chi2_sf(double x, double k) { return detail::gamma_q(0.5 * k, 0.5 * x); }

// Pearson chi-squared test of observed counts against expected counts (same
// total). Bins with expected < min_expected are pooled into their neighbor.
struct Chi2Result {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

inline Chi2Result chi2_test(const std::vector<double>& observed,
                            const std::vector<double>& expected, double min_expected = 5.0) {
    if (observed.size() != expected.size()) throw std::invalid_argument("chi2 size mismatch");
    std::vector<double> obs, exp;
    double po = 0.0, pe = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        po += observed[i];
        pe += expected[i];
        if (pe >= min_expected) {
            obs.push_back(po);
            exp.push_back(pe);
            po = pe = 0.0;
        }
    }
    if (pe > 0.0 && !exp.empty()) {
        obs.back() += po;
        exp.back() += pe;
    }
    Chi2Result r;
    if (exp.size() < 2) return r;
    for (size_t i = 0; i < exp.size(); ++i) {
        double d = obs[i] - exp[i];
        r.statistic += d * d / exp[i];
    }
    r.dof = static_cast<int>(exp.size()) - 1;
    r.p_value = chi2_sf(r.statistic, r.dof);
    return r;
}

// Total-variation distance between two nonnegative weight vectors, each
// normalized to unit mass first.
inline double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tv size mismatch");
    double sa = 0.0, sb = 0.0;
    for (double v : a) sa += v;
    for (double v : b) sb += v;
    if (!(sa > 0.0) || !(sb > 0.0)) throw std::invalid_argument("tv needs positive mass");
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] / sa - b[i] / sb);
    return 0.5 * d;
}

// One-sample Kolmogorov-Smirnov statistic of samples against a cdf callable.
template <class Cdf>
double ks_statistic(std::vector<double> samples, const Cdf& cdf) {
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double c = cdf(samples[i]);
        d = std::max(d, std::abs(c - i / n));
        d = std::max(d, std::abs((i + 1) / n - c));
    }
    return d;
}

// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(i / double(a.size()) - j / double(b.size())));
    }
    return d;
}

}  // namespace twinslit
