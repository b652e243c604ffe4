#include "ginlab/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ginlab::stats {

namespace {

// Lower regularized gamma by series, x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by continued fraction (Lentz), x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be >= 1");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * x);
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3)
        throw std::invalid_argument("fit_slope: need at least 3 paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (double(n - 2) * sxx));
    return fit;
}

namespace {

// Pool adjacent cells until every expected count clears the floor.
void pool(std::vector<double>& obs, std::vector<double>& exp, double floor) {
    std::size_t i = 0;
    while (i < exp.size()) {
        if (exp[i] >= floor || exp.size() == 1) {
            ++i;
            continue;
        }
        std::size_t j = i + 1 < exp.size() ? i + 1 : i - 1;
        exp[j] += exp[i];
        obs[j] += obs[i];
        exp.erase(exp.begin() + i);
        obs.erase(obs.begin() + i);
        if (j < i) i = j;  // re-test the merged cell
    }
}

}  // namespace

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected,
                               double min_expected, int fitted_parameters) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    std::vector<double> obs = observed, exp = expected;
    pool(obs, exp, min_expected);
    ChiSquareResult r;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (exp[i] <= 0.0) continue;
        double d = obs[i] - exp[i];
        r.statistic += d * d / exp[i];
    }
    r.dof = static_cast<int>(obs.size()) - 1 - fitted_parameters;
    if (r.dof < 1) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b,
                                      double min_expected) {
    if (counts_a.size() != counts_b.size() || counts_a.empty())
        throw std::invalid_argument("chi_square_two_sample: size mismatch");
    std::vector<double> a = counts_a, b = counts_b, combined(counts_a.size());
    for (std::size_t i = 0; i < a.size(); ++i) combined[i] = a[i] + b[i];
    // Pool on the combined counts, applying identical merges to both samples.
    std::size_t i = 0;
    while (i < combined.size()) {
        if (combined[i] >= 2.0 * min_expected || combined.size() == 1) {
            ++i;
            continue;
        }
        std::size_t j = i + 1 < combined.size() ? i + 1 : i - 1;
        combined[j] += combined[i];
        a[j] += a[i];
        b[j] += b[i];
        combined.erase(combined.begin() + i);
        a.erase(a.begin() + i);
        b.erase(b.begin() + i);
        if (j < i) i = j;
    }
    double na = 0.0, nb = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        na += a[c];
        nb += b[c];
    }
    ChiSquareResult r;
    if (na == 0.0 || nb == 0.0) {
        r.p_value = 1.0;
        return r;
    }
    const double total = na + nb;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double ea = combined[c] * na / total;
        double eb = combined[c] * nb / total;
        if (ea > 0.0) r.statistic += (a[c] - ea) * (a[c] - ea) / ea;
        if (eb > 0.0) r.statistic += (b[c] - eb) * (b[c] - eb) / eb;
    }
    r.dof = static_cast<int>(a.size()) - 1;
    if (r.dof < 1) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

}  // namespace ginlab::stats
