#include "aodvtune/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aodvtune::stats {

double chi_square_survival(double x, double dof) {
    if (!(dof > 0)) throw std::invalid_argument("chi-square needs positive degrees of freedom");
    if (x <= 0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> mid_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double lilliefors_p_value(double d, std::size_t n) {
    double kd = d;
    double nd = static_cast<double>(n);
    if (n > 100) {
        kd = d * std::pow(nd / 100.0, 0.49);
        nd = 100.0;
    }
    double p = std::exp(-7.01256 * kd * kd * (nd + 2.78019) + 2.99587 * kd * std::sqrt(nd + 2.78019) - 0.122119 +
                        0.974598 / std::sqrt(nd) + 1.67997 / nd);
    if (p > 0.1) {
        const double sn = std::sqrt(static_cast<double>(n));
        const double kk = (sn - 0.01 + 0.85 / sn) * d;
        if (kk <= 0.302)
            p = 1.0;
        else if (kk <= 0.5)
            p = 2.76773 - 19.828315 * kk + 80.709644 * kk * kk - 138.55152 * std::pow(kk, 3) +
                81.218052 * std::pow(kk, 4);
        else if (kk <= 0.9)
            p = -4.901232 + 40.662806 * kk - 97.490286 * kk * kk + 94.029866 * std::pow(kk, 3) -
                32.355711 * std::pow(kk, 4);
        else if (kk <= 1.31)
            p = 6.198765 - 19.039835 * kk + 18.357773 * kk * kk - 5.742001 * std::pow(kk, 3);
        else
            p = 0.0;
    }
    return std::clamp(p, 0.0, 1.0);
}

TestResult ks_normality(const SampleSet& s) {
    const auto& x = s.values;
    const std::size_t n = x.size();
    if (n < 5) throw std::invalid_argument("ks_normality needs at least 5 values (" + s.label + ")");

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0) || std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
        throw DegenerateSampleError("sample '" + s.label + "' has zero variance");

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = normal_cdf((sorted[i] - mean) / sd);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
        const double lo = f - static_cast<double>(i) / static_cast<double>(n);
        d = std::max({d, hi, lo});
    }
    const double p = lilliefors_p_value(d, n);
    return {d, p, p < 0.05};
}

namespace {

struct Pooled {
    std::vector<double> values;
    std::vector<std::size_t> sizes;
};

Pooled pool(std::span<const SampleSet> groups) {
    if (groups.size() < 2) throw std::invalid_argument("Kruskal-Wallis needs at least 2 groups");
    Pooled p;
    for (const auto& g : groups) {
        if (g.values.size() < 3)
            throw std::invalid_argument("Kruskal-Wallis needs at least 3 values per group (" + g.label + ")");
        p.values.insert(p.values.end(), g.values.begin(), g.values.end());
        p.sizes.push_back(g.values.size());
    }
    return p;
}

double tie_correction(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        const double t = static_cast<double>(j - i);
        sum += t * t * t - t;
        i = j;
    }
    const double n = static_cast<double>(v.size());
    return 1.0 - sum / (n * n * n - n);
}

// H for ranks laid out group after group.
double h_statistic(std::span<const double> ranks, std::span<const std::size_t> sizes, double correction) {
    const double n = static_cast<double>(ranks.size());
    double acc = 0.0;
    std::size_t at = 0;
    for (std::size_t sz : sizes) {
        double r = 0.0;
        for (std::size_t k = 0; k < sz; ++k) r += ranks[at + k];
        acc += r * r / static_cast<double>(sz);
        at += sz;
    }
    const double h = 12.0 / (n * (n + 1.0)) * acc - 3.0 * (n + 1.0);
    return std::max(0.0, h / correction);
}

} // namespace

TestResult kruskal_wallis(std::span<const SampleSet> groups) {
    const Pooled p = pool(groups);
    const double c = tie_correction(p.values);
    if (c <= 0.0) return {0.0, 1.0, false};
    const auto ranks = mid_ranks(p.values);
    const double h = h_statistic(ranks, p.sizes, c);
    const double pv = chi_square_survival(h, static_cast<double>(groups.size() - 1));
    return {h, pv, pv < 0.05};
}

TestResult kruskal_wallis_exact(std::span<const SampleSet> groups, double max_arrangements) {
    const Pooled p = pool(groups);
    const double c = tie_correction(p.values);
    if (c <= 0.0) return {0.0, 1.0, false};
    const auto ranks = mid_ranks(p.values);
    const double h_obs = h_statistic(ranks, p.sizes, c);

    // multinomial N! / prod(n_i!)
    double arrangements = std::lgamma(static_cast<double>(ranks.size()) + 1.0);
    for (std::size_t sz : p.sizes) arrangements -= std::lgamma(static_cast<double>(sz) + 1.0);
    if (std::exp(arrangements) > max_arrangements)
        throw std::invalid_argument("too many arrangements for an exact Kruskal-Wallis test");

    // Enumerate group labels as a multiset permutation.
    std::vector<std::size_t> labels;
    for (std::size_t g = 0; g < p.sizes.size(); ++g) labels.insert(labels.end(), p.sizes[g], g);
    std::vector<double> laid_out(ranks.size());
    std::vector<std::size_t> fill(p.sizes.size());
    double total = 0.0;
    double extreme = 0.0;
    do {
        std::vector<std::size_t> offset(p.sizes.size(), 0);
        for (std::size_t g = 1; g < p.sizes.size(); ++g) offset[g] = offset[g - 1] + p.sizes[g - 1];
        std::fill(fill.begin(), fill.end(), 0);
        for (std::size_t i = 0; i < labels.size(); ++i) laid_out[offset[labels[i]] + fill[labels[i]]++] = ranks[i];
        total += 1.0;
        if (h_statistic(laid_out, p.sizes, c) >= h_obs - 1e-12) extreme += 1.0;
    } while (std::next_permutation(labels.begin(), labels.end()));

    const double pv = extreme / total;
    return {h_obs, pv, pv < 0.05};
}

} // namespace aodvtune::stats
