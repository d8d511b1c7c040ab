#include "noisecal/readout.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "noisecal/constants.hpp"
#include "noisecal/errors.hpp"
#include "noisecal/photons.hpp"

namespace noisecal {

FitResult added_noise_from_iq(const IqRecord& rec, PowerLevel p_input) {
    rec.validate();
    if (!(p_input.watts() > 0.0)) throw DomainError("added_noise_from_iq: input power must be positive");

    const auto n = static_cast<double>(rec.samples.size());
    double si = 0.0, sq = 0.0;
    for (const auto& s : rec.samples) {
        si += s.i;
        sq += s.q;
    }
    const double mi = si / n;
    const double mq = sq / n;
    double vii = 0.0, vqq = 0.0, viq = 0.0;
    for (const auto& s : rec.samples) {
        const double di = s.i - mi;
        const double dq = s.q - mq;
        vii += di * di;
        vqq += dq * dq;
        viq += di * dq;
    }
    vii /= n - 1.0;
    vqq /= n - 1.0;
    viq /= n - 1.0;

    const double var = 0.5 * (vii + vqq);
    if (!(var > 0.0)) throw DomainError("added_noise_from_iq: zero scatter, record is degenerate");

    // |mean|^2 overestimates mu^2 by the variance of the mean in both quadratures.
    const double mu_sq = std::max(mi * mi + mq * mq - 2.0 * var / n, 0.0);
    if (!(mu_sq > 0.0)) throw DomainError("added_noise_from_iq: tone amplitude not resolved above the noise");
    const double mu = std::sqrt(mu_sq);
    const double sigma = std::sqrt(var);

    const double n_sig = p_input.watts() * rec.t_int_s / photon_energy(rec.f_sig);
    const double ratio = var / mu_sq;
    const double n_add = n_sig * ratio - 0.5;

    // Delta method: pooled variance has 2(n-1) degrees of freedom, |mean|^2 has
    // variance 4 mu^2 sigma^2 / n.
    const double rel_var = 1.0 / (n - 1.0) + 4.0 * var / (n * mu_sq);
    const double n_add_se = n_sig * ratio * std::sqrt(rel_var);

    FitResult out;
    out.params = {{"n_add", n_add, n_add_se},
                  {"mu", mu, sigma / std::sqrt(n)},
                  {"sigma", sigma, sigma / (2.0 * std::sqrt(n - 1.0))}};
    out.n_points = rec.samples.size();
    out.metrics = {{"n_sig", n_sig},
                   {"snr", mu / sigma},
                   {"isotropy_offdiag", viq / var},
                   {"isotropy_var_ratio", vii / vqq}};
    out.diagnostics = rec.diagnostics;

    const double iso_tol = 3.0 / std::sqrt(n);
    if (std::abs(viq) > iso_tol * var || std::abs(vii - vqq) > 2.0 * std::sqrt(2.0) * iso_tol * var) {
        out.diagnostics.push_back("IQ cloud is not isotropic within statistical tolerance");
    }
    if (n_add < -2.0 * n_add_se) {
        out.diagnostics.push_back("added noise below the quantum limit beyond its error bar: input power is likely wrong");
    }
    return out;
}

PowerLevel output_tone_power(const IqRecord& rec, double mu) {
    const double flux = (mu / rec.digitizer_scale) * (mu / rec.digitizer_scale);
    return PowerLevel(flux * photon_energy(rec.f_sig));
}

PowerRatio gain_estimate(PowerLevel output_tone_power, PowerLevel p_input) {
    if (!(output_tone_power.watts() > 0.0) || !(p_input.watts() > 0.0)) {
        throw DomainError("gain_estimate: powers must be positive");
    }
    return PowerRatio(output_tone_power.watts() / p_input.watts());
}

ValueWithError gain_with_uncertainty(PowerLevel output_tone_power, PowerLevel p_input, double input_err_db,
                                     double output_err_db) {
    const double g_db = gain_estimate(output_tone_power, p_input).db();
    return {g_db, std::hypot(input_err_db, output_err_db)};
}

ThermometerConvention thermometer_convention_from_string(std::string_view s) {
    if (s == "si-angular") return ThermometerConvention::SiAngular;
    if (s == "cyclic-linewidth") return ThermometerConvention::CyclicLinewidth;
    if (s == "planck-cyclic") return ThermometerConvention::PlanckCyclic;
    throw UsageError("unknown thermometer convention '" + std::string(s) +
                     "' (expected si-angular, cyclic-linewidth or planck-cyclic)");
}

std::string_view to_string(ThermometerConvention c) {
    switch (c) {
        case ThermometerConvention::SiAngular: return "si-angular";
        case ThermometerConvention::CyclicLinewidth: return "cyclic-linewidth";
        case ThermometerConvention::PlanckCyclic: return "planck-cyclic";
    }
    return "unknown";
}

PowerRatio thermometer_attenuation(Frequency f_ge, double linewidth_rad_s, PowerLevel p_in_min,
                                   ThermometerConvention convention) {
    if (!(linewidth_rad_s > 0.0) || !(p_in_min.watts() > 0.0)) {
        throw DomainError("thermometer_attenuation: linewidth and power must be positive");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    double numerator = 0.0;
    switch (convention) {
        case ThermometerConvention::SiAngular:
            numerator = constants::hbar * f_ge.angular() * linewidth_rad_s;
            break;
        case ThermometerConvention::CyclicLinewidth:
            numerator = constants::hbar * f_ge.angular() * linewidth_rad_s / two_pi;
            break;
        case ThermometerConvention::PlanckCyclic:
            numerator = constants::planck * f_ge.hz() * linewidth_rad_s / two_pi;
            break;
        default:
            throw UsageError("thermometer_attenuation: unknown convention");
    }
    return PowerRatio(numerator / (8.0 * p_in_min.watts()));
}

PowerRatio thermometer_attenuation_from_drive(Frequency f_ge, double linewidth_rad_s, double drive_rate_rad_s,
                                              PowerLevel p_in) {
    if (!(linewidth_rad_s > 0.0) || !(drive_rate_rad_s > 0.0) || !(p_in.watts() > 0.0)) {
        throw DomainError("thermometer_attenuation_from_drive: arguments must be positive");
    }
    return PowerRatio(constants::hbar * f_ge.angular() * drive_rate_rad_s * drive_rate_rad_s /
                      (4.0 * linewidth_rad_s * p_in.watts()));
}

}  // namespace noisecal
