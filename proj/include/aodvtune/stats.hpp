#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aodvtune::stats {

struct SampleSet {
    std::string label;
    std::vector<double> values;
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool reject_at_95 = false;
};

class DegenerateSampleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Upper tail of the chi-square distribution, P(X > x) for `dof` degrees of freedom.
double chi_square_survival(double x, double dof);

double normal_cdf(double z);

// Mid-ranks (1-based) of `values`, ties share the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

// Lilliefors p-value for a two-sided KS statistic `d` on `n` points. Uses the
// Dallal-Wilkinson approximation and, above 0.1, the modified-statistic
// polynomial fit.
double lilliefors_p_value(double d, std::size_t n);

// Kolmogorov-Smirnov normality test with mean and standard deviation estimated
// from the sample (Lilliefors). Needs n >= 5; throws DegenerateSampleError on a
// constant sample.
TestResult ks_normality(const SampleSet& s);

// Kruskal-Wallis H with tie correction; p-value from chi-square with k-1 dof.
// Needs >= 2 groups of >= 3 values. All values equal gives H = 0, p = 1.
TestResult kruskal_wallis(std::span<const SampleSet> groups);

// Same statistic with an exact permutation p-value (for small groups). Throws
// std::invalid_argument when the number of arrangements exceeds `max_arrangements`.
TestResult kruskal_wallis_exact(std::span<const SampleSet> groups, double max_arrangements = 5e6);

} // namespace aodvtune::stats
