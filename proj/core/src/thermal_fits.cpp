#include "noisecal/thermal_fits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "noisecal/errors.hpp"
#include "noisecal/least_squares.hpp"

namespace noisecal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double initial_alpha(const std::vector<PowerTemperaturePoint>& points, double t0) {
    std::vector<std::pair<double, double>> hot;  // (ln T, ln P)
    for (const auto& pt : points) {
        if (pt.temperature.kelvin() > t0 && pt.power.watts() > 0.0) {
            hot.emplace_back(std::log(pt.temperature.kelvin()), std::log(pt.power.watts()));
        }
    }
    std::sort(hot.begin(), hot.end());
    // Slope of ln P against ln T over the hottest half.
    const std::size_t start = hot.size() >= 4 ? hot.size() / 2 : 0;
    const std::size_t n = hot.size() - start;
    if (n < 2) return 5.0;
    double mx = 0, my = 0;
    for (std::size_t i = start; i < hot.size(); ++i) {
        mx += hot[i].first;
        my += hot[i].second;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = start; i < hot.size(); ++i) {
        sxx += (hot[i].first - mx) * (hot[i].first - mx);
        sxy += (hot[i].first - mx) * (hot[i].second - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : kNaN;
    if (!std::isfinite(slope) || slope < 1.2) return 5.0;
    return std::min(slope, 20.0);
}

}  // namespace

FitResult fit_power_law(const std::vector<PowerTemperaturePoint>& points, Temperature t_bath,
                        const PowerLawFitOptions& options) {
    const bool fixed = options.fixed_alpha.has_value();
    const std::size_t n_params = fixed ? 1 : 2;
    const double t0 = t_bath.kelvin();
    if (points.size() < n_params) throw UsageError("fit_power_law: not enough points");

    const auto n_hot = std::count_if(points.begin(), points.end(),
                                     [t0](const auto& p) { return p.temperature.kelvin() > t0; });
    const bool all_same = std::all_of(points.begin(), points.end(), [&](const auto& p) {
        return p.temperature == points.front().temperature;
    });
    if (all_same && points.size() > 1) {
        throw SingularFitError("fit_power_law: all temperatures identical, parameters not identifiable");
    }
    if (static_cast<std::size_t>(n_hot) < n_params) {
        throw SingularFitError("fit_power_law: too few points above the bath temperature");
    }
    if (fixed && !(*options.fixed_alpha > 1.0)) throw DomainError("fit_power_law: fixed alpha must exceed 1");

    double alpha0 = fixed ? *options.fixed_alpha : initial_alpha(points, t0);
    const auto hottest = *std::max_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return a.temperature < b.temperature;
    });
    const double sv0 = hottest.power.watts() /
                       (std::pow(hottest.temperature.kelvin(), alpha0) - std::pow(t0, alpha0));

    const double ln_t0 = std::log(t0);
    const ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
        const double sv = std::exp(x[0]);
        const double alpha = fixed ? *options.fixed_alpha : x[1];
        const double t0a = std::pow(t0, alpha);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double p = points[i].power.watts();
            const double u = p / sv + t0a;
            const double ln_u = std::log(u);
            r[i] = ln_u / alpha - std::log(points[i].temperature.kelvin());
            jac(i, 0) = -(p / sv) / (alpha * u);
            if (!fixed) jac(i, 1) = -ln_u / (alpha * alpha) + t0a * ln_t0 / (alpha * u);
        }
    };

    Eigen::VectorXd x0(n_params);
    x0[0] = std::log(sv0);
    if (!fixed) x0[1] = alpha0;
    auto sol = solve_least_squares(residual, x0, static_cast<Eigen::Index>(points.size()));
    if (!sol.x.allFinite() || sol.jacobian_rank() < static_cast<Eigen::Index>(n_params)) {
        throw SingularFitError("fit_power_law: Jacobian is rank deficient at the solution");
    }

    const Eigen::MatrixXd cov = sol.covariance();
    FitResult out;
    const double sv = std::exp(sol.x[0]);
    out.params.push_back({"sigma_v", sv, sv * std::sqrt(cov(0, 0))});
    if (fixed) {
        out.params.push_back({"alpha", *options.fixed_alpha, 0.0});
    } else {
        out.params.push_back({"alpha", sol.x[1], std::sqrt(cov(1, 1))});
    }
    out.residual_norm = sol.residual_norm();
    out.n_points = points.size();
    out.metrics.emplace_back("iterations", sol.iterations);
    if (!sol.converged) out.diagnostics.push_back("power-law fit hit the iteration limit");
    return out;
}

FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw UsageError("fit_exponential: time and value lengths differ");
    if (t.size() < 10) throw UsageError("fit_exponential: segment needs at least 10 samples");
    const std::size_t n = t.size();
    const double t_s = t.front();

    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    FitResult out;
    out.n_points = n;
    out.window = std::make_pair(t.front(), t.back());

    if (*hi_it - *lo_it <= 1e-12 * std::max(std::abs(mean), 1e-300)) {
        out.params = {{"tau", kNaN, kNaN}, {"asymptote", mean, 0.0}, {"amplitude", 0.0, 0.0}};
        out.metrics.emplace_back("r_squared", kNaN);
        out.diagnostics.push_back("constant segment: tau is unidentifiable");
        return out;
    }

    const double y_inf0 = y.back();
    const double amp0 = y.front() - y_inf0;
    double tau0 = (t.back() - t_s) / 3.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(y[i] - y_inf0) <= std::abs(amp0) / std::exp(1.0)) {
            if (t[i] > t_s) tau0 = t[i] - t_s;
            break;
        }
    }

    const ResidualFunction residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
        const double tau = std::exp(x[2]);
        for (std::size_t i = 0; i < n; ++i) {
            const double dt = t[i] - t_s;
            const double e = std::exp(-dt / tau);
            r[i] = x[0] + x[1] * e - y[i];
            jac(i, 0) = 1.0;
            jac(i, 1) = e;
            jac(i, 2) = x[1] * e * dt / tau;
        }
    };
    Eigen::VectorXd x0(3);
    x0 << y_inf0, amp0, std::log(tau0);
    auto sol = solve_least_squares(residual, x0, static_cast<Eigen::Index>(n));

    const double tau = std::exp(sol.x[2]);
    const Eigen::MatrixXd cov = sol.covariance();
    out.params = {{"tau", tau, tau * std::sqrt(std::max(cov(2, 2), 0.0))},
                  {"asymptote", sol.x[0], std::sqrt(std::max(cov(0, 0), 0.0))},
                  {"amplitude", sol.x[1], std::sqrt(std::max(cov(1, 1), 0.0))}};
    out.residual_norm = sol.residual_norm();

    double sst = 0.0;
    for (double v : y) sst += (v - mean) * (v - mean);
    out.metrics.emplace_back("r_squared", 1.0 - sol.residuals.squaredNorm() / sst);
    out.metrics.emplace_back("iterations", sol.iterations);

    if (sol.jacobian_rank() < 3 || std::abs(sol.x[1]) <= 1e-9 * std::abs(sol.x[0])) {
        out.diagnostics.push_back("amplitude indistinguishable from zero: tau is unidentifiable");
    }
    if (!sol.converged) out.diagnostics.push_back("exponential fit hit the iteration limit");

    // Reversals larger than the residual scatter mean the segment is not a single relaxation.
    const double noise = sol.residuals.norm() / std::sqrt(static_cast<double>(n));
    const double trend = sol.x[1] > 0 ? -1.0 : 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = (y[i] - y[i - 1]) * trend;
        if (step < -(3.0 * std::sqrt(2.0) * noise + 1e-12 * std::abs(mean))) {
            out.diagnostics.push_back("segment is not monotone beyond the noise level");
            break;
        }
    }
    return out;
}

FitResult fit_exponential(const TransientTrace& trace, TransientSegment segment,
                          const ExponentialFitOptions& options) {
    trace.validate();
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t i = 0; i < trace.time_s.size(); ++i) {
        const double ti = trace.time_s[i];
        const bool in_segment = segment == TransientSegment::Heat ? (ti >= trace.t_on_s && ti < trace.t_off_s)
                                                                  : ti >= trace.t_off_s;
        if (in_segment) {
            t.push_back(ti);
            y.push_back(trace.temperature[i].kelvin());
        }
    }
    if (options.skip_fraction > 0.0) {
        const auto skip = static_cast<std::ptrdiff_t>(std::floor(options.skip_fraction * static_cast<double>(t.size())));
        t.erase(t.begin(), t.begin() + skip);
        y.erase(y.begin(), y.begin() + skip);
    }
    return fit_exponential(t, y);
}

}  // namespace noisecal
