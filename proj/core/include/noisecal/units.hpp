#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "noisecal/errors.hpp"

namespace noisecal {

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail

/// Ordinary frequency in hertz. Angular frequency is derived on demand.
class Frequency {
public:
    explicit Frequency(double hz) : hz_(hz) {
        detail::require(std::isfinite(hz) && hz > 0.0, "Frequency must be positive and finite");
    }
    static Frequency ghz(double v) { return Frequency(v * 1e9); }

    double hz() const { return hz_; }
    double angular() const { return 2.0 * std::numbers::pi * hz_; }

    friend bool operator==(const Frequency&, const Frequency&) = default;
    friend auto operator<=>(const Frequency&, const Frequency&) = default;

private:
    double hz_;
};

/// Absolute power in watts, with dBm accessors.
class PowerLevel {
public:
    explicit PowerLevel(double watts) : w_(watts) {
        detail::require(std::isfinite(watts) && watts >= 0.0, "PowerLevel must be non-negative and finite");
    }
    static PowerLevel from_dbm(double dbm) { return PowerLevel(1e-3 * std::pow(10.0, dbm / 10.0)); }

    double watts() const { return w_; }
    // -inf for zero power.
    double dbm() const { return 10.0 * std::log10(w_ / 1e-3); }

    friend bool operator==(const PowerLevel&, const PowerLevel&) = default;
    friend auto operator<=>(const PowerLevel&, const PowerLevel&) = default;

private:
    double w_;
};

/// Dimensionless linear power ratio (attenuation <= 1, gain may exceed 1).
class PowerRatio {
public:
    explicit PowerRatio(double linear) : v_(linear) {
        detail::require(std::isfinite(linear) && linear > 0.0, "PowerRatio must be positive and finite");
    }
    static PowerRatio from_db(double db) { return PowerRatio(std::pow(10.0, db / 10.0)); }

    double linear() const { return v_; }
    double db() const { return 10.0 * std::log10(v_); }

    friend PowerRatio operator*(PowerRatio a, PowerRatio b) { return PowerRatio(a.v_ * b.v_); }
    friend PowerLevel operator*(PowerRatio a, PowerLevel p) { return PowerLevel(a.v_ * p.watts()); }
    friend bool operator==(const PowerRatio&, const PowerRatio&) = default;
    friend auto operator<=>(const PowerRatio&, const PowerRatio&) = default;

private:
    double v_;
};

class Temperature {
public:
    explicit Temperature(double kelvin) : k_(kelvin) {
        detail::require(std::isfinite(kelvin) && kelvin > 0.0, "Temperature must be positive and finite");
    }
    static Temperature mk(double v) { return Temperature(v * 1e-3); }

    double kelvin() const { return k_; }

    friend bool operator==(const Temperature&, const Temperature&) = default;
    friend auto operator<=>(const Temperature&, const Temperature&) = default;

private:
    double k_;
};

/// Mean photon number of a bosonic mode.
class Occupation {
public:
    explicit Occupation(double n) : n_(n) {
        detail::require(std::isfinite(n) && n >= 0.0, "Occupation must be non-negative and finite");
    }

    double photons() const { return n_; }

    friend bool operator==(const Occupation&, const Occupation&) = default;
    friend auto operator<=>(const Occupation&, const Occupation&) = default;

private:
    double n_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

}  // namespace noisecal
