#pragma once

#include <vector>

namespace ginlab::stats {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

// Survival function of chi^2 with k degrees of freedom at value x.
double chi_square_sf(double x, int dof);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Pearson goodness of fit of counts against expected counts (same total is
// the caller's business); cells with expected < min_expected are pooled into
// their neighbour on the right, the last cell pools left.
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected,
                               double min_expected = 5.0,
                               int fitted_parameters = 0);

// Two-sample chi-square homogeneity test on parallel count vectors, with the
// same pooling rule applied to the combined expectation.
ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b,
                                      double min_expected = 5.0);

}  // namespace ginlab::stats
