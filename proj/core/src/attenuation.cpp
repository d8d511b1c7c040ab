#include "noisecal/attenuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "noisecal/errors.hpp"
#include "noisecal/parallel.hpp"
#include "noisecal/rng.hpp"

namespace noisecal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWindowEps = 1e-9;

// Piecewise-linear curve in (dBm, log10 PSD) built from the positive points of a trace.
class LogCurve {
public:
    explicit LogCurve(const PsdTrace& trace) {
        for (std::size_t i = 0; i < trace.drive_axis.size(); ++i) {
            const double p = trace.drive_axis[i].watts();
            const double psd = trace.added_psd[i];
            if (p > 0.0 && psd > 0.0) {
                x_.push_back(trace.drive_axis[i].dbm());
                y_.push_back(std::log10(psd));
            }
        }
    }

    bool usable() const { return x_.size() >= 2; }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    // False outside the support.
    bool eval(double x, double& y) const {
        if (x < x_.front() || x > x_.back()) return false;
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        if (it == x_.end()) {
            y = y_.back();
            return true;
        }
        const auto k = static_cast<std::size_t>(it - x_.begin());
        const double x0 = x_[k - 1], x1 = x_[k];
        const double w = (x - x0) / (x1 - x0);
        y = y_[k - 1] + w * (y_[k] - y_[k - 1]);
        return true;
    }

    double slope(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t k = static_cast<std::size_t>(it - x_.begin());
        k = std::clamp<std::size_t>(k, 1, x_.size() - 1);
        return (y_[k] - y_[k - 1]) / (x_[k] - x_[k - 1]);
    }

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

struct Points {
    std::vector<double> x;
    std::vector<double> y;
};

struct ShiftCost {
    double mean_sq = kInf;
    std::size_t count = 0;
};

ShiftCost shift_cost(const LogCurve& curve, const Points& pts, double s) {
    ShiftCost c;
    double sum = 0.0;
    double y = 0.0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        if (curve.eval(pts.x[i] + s, y)) {
            const double r = y - pts.y[i];
            sum += r * r;
            ++c.count;
        }
    }
    if (c.count >= 3) c.mean_sq = sum / static_cast<double>(c.count);
    return c;
}

double golden_minimize(const LogCurve& curve, const Points& pts, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = shift_cost(curve, pts, c).mean_sq;
    double fd = shift_cost(curve, pts, d).mean_sq;
    while (b - a > 1e-9) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = shift_cost(curve, pts, c).mean_sq;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = shift_cost(curve, pts, d).mean_sq;
        }
    }
    return 0.5 * (a + b);
}

// Grid scan over [lo, hi] followed by golden-section refinement around the best node.
double minimize_shift(const LogCurve& curve, const Points& pts, double lo, double hi, double step) {
    double best_s = std::numeric_limits<double>::quiet_NaN();
    double best = kInf;
    const auto n = static_cast<long>(std::ceil((hi - lo) / step));
    for (long k = 0; k <= n; ++k) {
        const double s = lo + static_cast<double>(k) * step;
        const double c = shift_cost(curve, pts, s).mean_sq;
        if (c < best) {
            best = c;
            best_s = s;
        }
    }
    if (!std::isfinite(best)) return best_s;
    const double refined = golden_minimize(curve, pts, best_s - step, best_s + step);
    return shift_cost(curve, pts, refined).mean_sq <= best ? refined : best_s;
}

double interpolate_linear(const PsdTrace& trace, double dbm) {
    const auto x = trace.drive_dbm();
    if (x.empty() || dbm < x.front() - kWindowEps || dbm > x.back() + kWindowEps) {
        throw DomainError("interpolation point outside the trace's drive axis");
    }
    auto it = std::lower_bound(x.begin(), x.end(), dbm);
    if (it == x.end()) return trace.added_psd.back();
    const auto k = static_cast<std::size_t>(it - x.begin());
    if (k == 0 || *it == dbm) return trace.added_psd[k];
    const double w = (dbm - x[k - 1]) / (x[k] - x[k - 1]);
    return trace.added_psd[k - 1] + w * (trace.added_psd[k] - trace.added_psd[k - 1]);
}

// Least-squares cubic in (x - x0) through the given points.
struct Cubic {
    double x0 = 0.0;
    Eigen::Vector4d c = Eigen::Vector4d::Zero();
    double operator()(double x) const {
        const double u = x - x0;
        return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
    }
};

std::optional<Cubic> fit_cubic(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 8) return std::nullopt;
    Cubic p;
    p.x0 = 0.5 * (x.front() + x.back());
    Eigen::MatrixXd a(x.size(), 4);
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] - p.x0;
        a.row(static_cast<Eigen::Index>(i)) << 1.0, u, u * u, u * u * u;
        b[static_cast<Eigen::Index>(i)] = y[i];
    }
    p.c = a.colPivHouseholderQr().solve(b);
    return p;
}

// Robust white-noise scale from second differences, which cancel a smooth trend.
double trace_noise_std(const PsdTrace& trace) {
    const auto& v = trace.added_psd;
    if (v.size() < 5) return 0.0;
    std::vector<double> d;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) d.push_back(std::abs(v[i + 1] - 2.0 * v[i] + v[i - 1]));
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    return 1.4826 * *mid / std::sqrt(6.0);
}

std::vector<double> running_median3(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == 0 || i + 1 == v.size()) {
            // Two-point edge window: take the smaller value so an edge outlier cannot trigger.
            const std::size_t j = i == 0 ? std::min<std::size_t>(1, v.size() - 1) : i - 1;
            out[i] = std::min(v[i], v[j]);
        } else {
            double a = v[i - 1], b = v[i], c = v[i + 1];
            out[i] = std::max(std::min(a, b), std::min(std::max(a, b), c));
        }
    }
    return out;
}

std::optional<std::size_t> first_crossing(const PsdTrace& trace, double threshold) {
    const auto smooth = running_median3(trace.added_psd);
    for (std::size_t i = 0; i < smooth.size(); ++i) {
        if (smooth[i] > threshold) return i;
    }
    return std::nullopt;
}

}  // namespace

double estimate_floor_std(const PsdTrace& trace, std::size_t n_lowest) {
    if (trace.added_psd.size() < 3 || n_lowest < 3) {
        throw UsageError("estimate_floor_std: need at least three low-power points");
    }
    std::vector<double> v(trace.added_psd.begin(),
                          trace.added_psd.begin() + static_cast<std::ptrdiff_t>(std::min(n_lowest, trace.added_psd.size())));
    auto median = [](std::vector<double> w) {
        const auto mid = w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2);
        std::nth_element(w.begin(), mid, w.end());
        if (w.size() % 2 == 1) return *mid;
        const double hi = *mid;
        const double lo = *std::max_element(w.begin(), mid);
        return 0.5 * (lo + hi);
    };
    const double m = median(v);
    for (auto& x : v) x = std::abs(x - m);
    return 1.4826 * median(v);
}

FitWindow select_fit_window(const PsdTrace& rf, double floor_std, const PsdTrace* reference,
                            std::optional<double> p_max_override_dbm, const WindowOptions& options) {
    rf.validate();
    if (!(floor_std >= 0.0)) throw DomainError("select_fit_window: floor std must be non-negative");
    if (rf.drive_axis.empty()) throw EmptyWindowError("select_fit_window: empty trace; widen the drive sweep");
    const double threshold = options.k_floor * floor_std;

    const auto lo = first_crossing(rf, threshold);
    if (!lo) {
        throw EmptyWindowError(
            "select_fit_window: no point rises above the noise floor; extend the drive sweep to higher power");
    }
    const auto dbm = rf.drive_dbm();
    FitWindow w{dbm[*lo], dbm.back()};

    bool onset_found = false;
    if (reference != nullptr) {
        reference->validate();
        if (const auto onset = first_crossing(*reference, threshold)) {
            w.p_hi_dbm = reference->drive_axis[*onset].dbm();
            onset_found = true;
        }
    }
    if (!onset_found && p_max_override_dbm) w.p_hi_dbm = *p_max_override_dbm;

    const auto in_window = std::count_if(dbm.begin(), dbm.end(), [&](double x) {
        return x >= w.p_lo_dbm - kWindowEps && x <= w.p_hi_dbm + kWindowEps;
    });
    if (w.p_hi_dbm < w.p_lo_dbm || in_window == 0) {
        std::ostringstream os;
        os << "select_fit_window: empty window [" << w.p_lo_dbm << ", " << w.p_hi_dbm
           << "] dBm; widen the drive sweep";
        throw EmptyWindowError(os.str());
    }
    return w;
}

FitResult fit_psd_shift(const PsdTrace& joule, const PsdTrace& rf, const FitWindow& window,
                        const ShiftFitOptions& options) {
    joule.validate();
    rf.validate();
    if (joule.f_det != rf.f_det) throw UsageError("fit_psd_shift: traces were detected at different frequencies");
    if (window.p_hi_dbm < window.p_lo_dbm) throw EmptyWindowError("fit_psd_shift: empty window");

    const LogCurve curve(joule);
    if (!curve.usable()) throw InsufficientOverlapError("fit_psd_shift: reference trace has < 2 positive points");

    Points pts;
    std::size_t dropped_nonpositive = 0;
    for (std::size_t i = 0; i < rf.drive_axis.size(); ++i) {
        if (rf.drive_axis[i].watts() <= 0.0) continue;
        const double x = rf.drive_axis[i].dbm();
        if (x < window.p_lo_dbm - kWindowEps || x > window.p_hi_dbm + kWindowEps) continue;
        if (rf.added_psd[i] <= 0.0) {
            ++dropped_nonpositive;
            continue;
        }
        pts.x.push_back(x);
        pts.y.push_back(std::log10(rf.added_psd[i]));
    }
    if (pts.x.size() < 3) throw InsufficientOverlapError("fit_psd_shift: fewer than 3 usable points in window");

    const auto [xr_min, xr_max] = std::minmax_element(pts.x.begin(), pts.x.end());
    const double s_lo = curve.x_min() - *xr_max;
    const double s_hi = curve.x_max() - *xr_min;
    const double s_hat = minimize_shift(curve, pts, s_lo, s_hi, 0.05);
    const ShiftCost at_best = shift_cost(curve, pts, s_hat);
    if (!std::isfinite(s_hat) || at_best.count < 3) {
        throw InsufficientOverlapError("fit_psd_shift: fewer than 3 points overlap the reference trace");
    }

    // Fitted values and residuals on the overlapping subset.
    Points overlap;
    std::vector<double> fitted;
    std::vector<double> resid;
    double slope_sq = 0.0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
        double y = 0.0;
        if (curve.eval(pts.x[i] + s_hat, y)) {
            overlap.x.push_back(pts.x[i]);
            overlap.y.push_back(pts.y[i]);
            fitted.push_back(y);
            resid.push_back(y - pts.y[i]);
            const double sl = curve.slope(pts.x[i] + s_hat);
            slope_sq += sl * sl;
        }
    }
    const auto m = resid.size();
    double ssr = 0.0;
    for (double r : resid) ssr += r * r;
    const double analytic_se = std::sqrt(ssr / static_cast<double>(m - 1) / slope_sq);

    // Parametric bootstrap. Both traces carry additive radiometer noise of roughly
    // constant absolute size. Replicates are drawn around a smooth cubic model of the
    // overlaid curve; drawing the RF points from the noisy Joule curve itself would
    // let the Joule noise cancel between the two traces.
    double se = analytic_se;
    if (options.bootstrap_resamples > 1) {
        const double sd_joule = trace_noise_std(joule);
        const double sd_rf = trace_noise_std(rf);
        const double x_lo = overlap.x.front() + s_hat - 1.0;
        const double x_hi = overlap.x.back() + s_hat + 1.0;
        std::vector<double> cx, cy;
        for (std::size_t i = 0; i < joule.drive_axis.size(); ++i) {
            const double x = joule.drive_axis[i].dbm();
            if (x >= x_lo && x <= x_hi && joule.added_psd[i] > 0.0) {
                cx.push_back(x);
                cy.push_back(std::log10(joule.added_psd[i]));
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            cx.push_back(overlap.x[i] + s_hat);
            cy.push_back(overlap.y[i]);
        }
        std::vector<std::size_t> order(cx.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cx[a] < cx[b]; });
        std::vector<double> sx, sy;
        for (auto i : order) {
            sx.push_back(cx[i]);
            sy.push_back(cy[i]);
        }
        const auto model = fit_cubic(sx, sy);

        PsdTrace joule_model = joule;
        std::vector<double> rf_model(m);
        for (std::size_t i = 0; i < m; ++i) rf_model[i] = std::pow(10.0, model ? (*model)(overlap.x[i] + s_hat) : fitted[i]);
        if (model) {
            for (std::size_t i = 0; i < joule.drive_axis.size(); ++i) {
                const double x = joule.drive_axis[i].dbm();
                if (x >= x_lo && x <= x_hi) joule_model.added_psd[i] = std::pow(10.0, (*model)(x));
            }
        }

        RngStream rng(options.seed, "bootstrap/psd_shift");
        PsdTrace joule_b = joule_model;
        Points boot;
        double sum = 0.0, sum_sq = 0.0;
        int used = 0;
        for (int b = 0; b < options.bootstrap_resamples; ++b) {
            for (std::size_t i = 0; i < joule.added_psd.size(); ++i) {
                joule_b.added_psd[i] = joule_model.added_psd[i] + sd_joule * rng.normal();
            }
            boot.x.clear();
            boot.y.clear();
            for (std::size_t i = 0; i < m; ++i) {
                const double v = rf_model[i] + sd_rf * rng.normal();
                if (v > 0.0) {
                    boot.x.push_back(overlap.x[i]);
                    boot.y.push_back(std::log10(v));
                }
            }
            const LogCurve curve_b(joule_b);
            if (!curve_b.usable() || boot.x.size() < 3) continue;
            const double s_b = minimize_shift(curve_b, boot, s_hat - 3.0, s_hat + 3.0, 0.1);
            if (!std::isfinite(s_b)) continue;
            sum += s_b;
            sum_sq += s_b * s_b;
            ++used;
        }
        if (used > 1) {
            const double mean = sum / used;
            se = std::sqrt(std::max(0.0, (sum_sq - used * mean * mean) / (used - 1)));
        }
    }

    FitResult out;
    out.params.push_back({"a_total_db", s_hat, se});
    out.residual_norm = std::sqrt(ssr);
    out.n_points = m;
    out.window = std::make_pair(window.p_lo_dbm, window.p_hi_dbm);
    out.metrics.emplace_back("overlap_count", static_cast<double>(m));
    out.metrics.emplace_back("analytic_std_error_db", analytic_se);
    if (m < pts.x.size()) {
        out.diagnostics.push_back(std::to_string(pts.x.size() - m) +
                                  " window point(s) fell outside the reference trace after shifting");
    }
    if (dropped_nonpositive > 0) {
        out.diagnostics.push_back(std::to_string(dropped_nonpositive) + " non-positive PSD point(s) dropped");
    }
    return out;
}

PowerRatio a_line_from_total(PowerRatio a_total, PowerRatio a_att) {
    if (a_att.linear() >= 1.0) throw DomainError("a_line_from_total: A_att = 1 leaves nothing dissipated");
    return PowerRatio(a_total.linear() / (1.0 - a_att.linear()));
}

double contamination_fraction(double psd_total, double psd_other, PowerRatio a_att) {
    if (!(psd_total > 0.0)) throw DomainError("contamination_fraction: total PSD must be positive");
    return std::clamp(a_att.linear() * psd_other / psd_total, 0.0, 1.0);
}

double contamination_fraction(const PsdTrace& total, const PsdTrace& reference, PowerRatio a_att,
                              PowerLevel at_power) {
    const double dbm = at_power.dbm();
    return contamination_fraction(interpolate_linear(total, dbm), interpolate_linear(reference, dbm), a_att);
}

std::vector<ProfileEntry> attenuation_profile(const std::vector<ProfileInput>& inputs, PowerRatio a_att,
                                              const ProfileOptions& options) {
    std::vector<ProfileEntry> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) {
        if (!in.rf.f_sig) throw UsageError("attenuation_profile: RF trace without f_sig");
        out.push_back(ProfileEntry{*in.rf.f_sig, in.rf.f_det, 0.0, 0.0, 0, std::nullopt, std::nullopt});
    }

    parallel_for(inputs.size(), options.jobs, [&](std::size_t i) {
        const auto& in = inputs[i];
        auto& entry = out[i];
        try {
            ShiftFitOptions shift = options.shift;
            std::ostringstream label;
            label.precision(17);
            label << "profile/" << entry.f_sig.hz() << '/' << entry.f_det.hz();
            shift.seed = derive_stream_seed(options.shift.seed, label.str());
            const FitResult fit = fit_psd_shift(in.joule, in.rf, in.window, shift);
            const auto a_total = PowerRatio::from_db(fit.value("a_total_db"));
            entry.a_line_db = a_line_from_total(a_total, a_att).db();
            entry.a_line_err_db = fit.error("a_total_db");
            entry.overlap_count = fit.n_points;
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
    });

    std::map<double, std::vector<std::size_t>> by_freq;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!out[i].error) by_freq[out[i].f_sig.hz()].push_back(i);
    }
    for (const auto& [f, idx] : by_freq) {
        if (idx.size() < 2) continue;
        double lo = kInf, hi = -kInf;
        for (auto i : idx) {
            lo = std::min(lo, out[i].a_line_db);
            hi = std::max(hi, out[i].a_line_db);
        }
        for (auto i : idx) out[i].discrepancy_db = hi - lo;
    }
    return out;
}

}  // namespace noisecal
