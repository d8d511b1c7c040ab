#include "noisecal/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace noisecal {

ThermalModel::ThermalModel(double sigma_, double alpha_, double volume_, Temperature t_bath_, double gamma_)
    : sigma(sigma_), alpha(alpha_), volume(volume_), t_bath(t_bath_), gamma(gamma_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("ThermalModel: sigma must be positive");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("ThermalModel: alpha must exceed 1");
    if (!(volume > 0.0) || !std::isfinite(volume)) throw DomainError("ThermalModel: volume must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("ThermalModel: gamma must be positive");
}

double ThermalModel::cooling_power(double t_kelvin) const {
    return sigma_v() * (std::pow(t_kelvin, alpha) - std::pow(t_bath.kelvin(), alpha));
}

double ThermalModel::linearized_time_constant(double t_kelvin) const {
    return gamma * std::pow(t_kelvin, 2.0 - alpha) / (alpha * sigma);
}

Temperature steady_state_temperature(const ThermalModel& tm, PowerLevel p) {
    if (p.watts() == 0.0) return tm.t_bath;
    const double base = p.watts() / tm.sigma_v() + std::pow(tm.t_bath.kelvin(), tm.alpha);
    return Temperature(std::pow(base, 1.0 / tm.alpha));
}

PowerLevel power_for_temperature(const ThermalModel& tm, Temperature t) {
    if (t < tm.t_bath) throw DomainError("power_for_temperature: target below bath temperature");
    return PowerLevel(tm.cooling_power(t.kelvin()));
}

PowerLevel joule_power(double r_att_ohm, double current_a) {
    if (!(r_att_ohm > 0.0)) throw DomainError("joule_power: resistance must be positive");
    return PowerLevel(r_att_ohm * current_a * current_a);
}

PowerLevel dissipated_rf_power(PowerRatio a_line, PowerRatio a_att, PowerLevel p_sig) {
    if (a_line.linear() > 1.0 || a_att.linear() > 1.0) {
        throw DomainError("dissipated_rf_power: attenuations must lie in (0, 1]");
    }
    return PowerLevel(a_line.linear() * (1.0 - a_att.linear()) * p_sig.watts());
}

PowerSchedule::PowerSchedule(std::vector<PowerStep> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw UsageError("PowerSchedule: at least one step required");
    for (std::size_t i = 1; i < steps_.size(); ++i) {
        if (!(steps_[i].start_s > steps_[i - 1].start_s)) {
            throw UsageError("PowerSchedule: step start times must be strictly increasing");
        }
    }
}

PowerSchedule PowerSchedule::pulse(PowerLevel p, double t_on, double t_off) {
    if (!(t_off > t_on)) throw UsageError("PowerSchedule::pulse: t_off must follow t_on");
    const double start = std::min(0.0, t_on) - 1.0;
    return PowerSchedule({{start, PowerLevel(0.0)}, {t_on, p}, {t_off, PowerLevel(0.0)}});
}

PowerLevel PowerSchedule::at(double t) const {
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double v, const PowerStep& s) { return v < s.start_s; });
    if (it == steps_.begin()) return steps_.front().power;
    return std::prev(it)->power;
}

namespace {

using State = double;

// Integrates at constant power from t0 to t1 and returns the final temperature.
double integrate_segment(const ThermalModel& tm, double power, double t_start, double t0, double t1,
                         const TransientOptions& options) {
    namespace odeint = boost::numeric::odeint;
    const double sigma_v = tm.sigma_v();
    const double bath_term = std::pow(tm.t_bath.kelvin(), tm.alpha);
    const double cap_coeff = tm.gamma * tm.volume;
    auto rhs = [&](const State& t, State& dtdt, double /*time*/) {
        const double tt = std::max(t, 1e-9);
        dtdt = (power - sigma_v * (std::pow(tt, tm.alpha) - bath_term)) / (cap_coeff * tt);
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(options.abs_tol, options.rel_tol);
    State state = t_start;
    const double dt0 = std::min(t1 - t0, 0.05 * tm.linearized_time_constant(std::max(t_start, tm.t_bath.kelvin())));
    odeint::integrate_adaptive(stepper, rhs, state, t0, t1, dt0);
    return state;
}

}  // namespace

std::vector<Temperature> transient_temperature(const ThermalModel& tm, const PowerSchedule& power,
                                               std::span<const double> t_grid,
                                               const TransientOptions& options) {
    if (t_grid.empty()) return {};
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw UsageError("transient_temperature: time grid must be strictly increasing");
        }
    }

    std::vector<Temperature> out;
    out.reserve(t_grid.size());
    double temp = steady_state_temperature(tm, power.at(t_grid.front())).kelvin();
    out.emplace_back(temp);

    const auto& steps = power.steps();
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        // Split the interval at every power discontinuity inside it.
        double t = t_grid[i - 1];
        const double t_end = t_grid[i];
        for (const auto& step : steps) {
            if (step.start_s > t && step.start_s < t_end) {
                temp = integrate_segment(tm, power.at(t).watts(), temp, t, step.start_s, options);
                t = step.start_s;
            }
        }
        double next = integrate_segment(tm, power.at(t).watts(), temp, t, t_end, options);
        if (!std::isfinite(next) || next <= 0.0) {
            TransientOptions tight = options;
            tight.rel_tol *= 1e-2;
            tight.abs_tol *= 1e-2;
            next = integrate_segment(tm, power.at(t).watts(), temp, t, t_end, tight);
            if (!std::isfinite(next) || next <= 0.0) {
                throw std::runtime_error("transient_temperature: integration produced a non-finite temperature");
            }
        }
        temp = next;
        out.emplace_back(temp);
    }
    return out;
}

}  // namespace noisecal
