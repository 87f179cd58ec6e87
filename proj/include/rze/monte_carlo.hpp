#pragma once

/**
 * @file monte_carlo.hpp
 * @brief Monte Carlo checks of the Poisson defining identities on a window.
 *
 * Campbell:  E[ sum_{x in gamma} f(x) ]      = integral f d sigma
 * Laplace:   E[ exp(sum_{x in gamma} f(x)) ] = exp( integral (e^f - 1) d sigma )
 *
 * Trial i draws its configuration from derive_seed(seed, Stream::trials, i);
 * per-trial values are stored by index and reduced in index order, so the
 * statistics do not depend on the number of worker threads.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rze/compensated_sum.hpp"
#include "rze/detail/format.hpp"
#include "rze/error.hpp"
#include "rze/parallel.hpp"
#include "rze/point_process.hpp"

namespace rze {

/// Radial test functions whose window integrals are computable.
class TestFunction {
public:
    enum class Kind { zero, indicator, gaussian, radial_poly, neg_quadratic, kill };

    static TestFunction zero() { return TestFunction(Kind::zero, 0.0, 0.0, "zero"); }

    /// height on |z| <= radius, 0 outside.
    static TestFunction indicator(double radius, double height = 1.0) {
        check_positive(radius, "indicator radius");
        return TestFunction(Kind::indicator, radius, height,
                            "indicator:" + detail::format_double(radius) + ":" + detail::format_double(height));
    }

    /// amplitude * exp(-a |z|^2)
    static TestFunction gaussian(double a, double amplitude = 1.0) {
        check_positive(a, "gaussian rate");
        return TestFunction(Kind::gaussian, a, amplitude,
                            "gaussian:" + detail::format_double(a) + ":" + detail::format_double(amplitude));
    }

    /// amplitude * (1 - |z|^2 / r^2)^2 on |z| < r, 0 outside.
    static TestFunction radial_poly(double radius, double amplitude = 1.0) {
        check_positive(radius, "polynomial cutoff radius");
        return TestFunction(Kind::radial_poly, radius, amplitude,
                            "poly:" + detail::format_double(radius) + ":" + detail::format_double(amplitude));
    }

    /// -|z|^2 on |z| <= radius, 0 outside.
    static TestFunction neg_quadratic(double radius) {
        check_positive(radius, "quadratic radius");
        return TestFunction(Kind::neg_quadratic, radius, 0.0, "quadratic:" + detail::format_double(radius));
    }

    /// f = -inf on |z| <= radius (e^f = 0), 0 outside. Only meaningful for the Laplace check.
    static TestFunction kill(double radius) {
        check_positive(radius, "kill radius");
        return TestFunction(Kind::kill, radius, 0.0, "kill:" + detail::format_double(radius));
    }

    Kind kind() const noexcept { return kind_; }
    const std::string& description() const noexcept { return description_; }

    /// f at modulus rho.
    double value(double rho) const noexcept {
        switch (kind_) {
            case Kind::zero: return 0.0;
            case Kind::indicator: return rho <= p1_ ? p2_ : 0.0;
            case Kind::gaussian: return p2_ * std::exp(-p1_ * rho * rho);
            case Kind::radial_poly: {
                if (rho >= p1_) {
                    return 0.0;
                }
                const double t = 1.0 - (rho * rho) / (p1_ * p1_);
                return p2_ * t * t;
            }
            case Kind::neg_quadratic: return rho <= p1_ ? -rho * rho : 0.0;
            case Kind::kill: return rho <= p1_ ? -std::numeric_limits<double>::infinity() : 0.0;
        }
        return 0.0;
    }

    /// e^{f} - 1 at modulus rho.
    double expm1_value(double rho) const noexcept {
        if (kind_ == Kind::kill) {
            return rho <= p1_ ? -1.0 : 0.0;
        }
        return std::expm1(value(rho));
    }

    /// Radius of the discontinuity or support edge, 0 when smooth.
    double breakpoint() const noexcept {
        switch (kind_) {
            case Kind::indicator:
            case Kind::radial_poly:
            case Kind::neg_quadratic:
            case Kind::kill: return p1_;
            default: return 0.0;
        }
    }

private:
    TestFunction(Kind kind, double p1, double p2, std::string description)
        : kind_(kind), p1_(p1), p2_(p2), description_(std::move(description)) {}

    static void check_positive(double x, const char* what) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw ValidationError(std::string(what) + " must be positive and finite");
        }
    }

    Kind kind_;
    double p1_;
    double p2_;
    std::string description_;
};

struct McStatistics {
    std::string check;  // "campbell" or "laplace"
    std::uint64_t trials = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double reference = 0.0;
    double z_score = 0.0;
};

namespace detail {

inline McStatistics summarize(std::string check, const std::vector<double>& values, double reference) {
    McStatistics s;
    s.check = std::move(check);
    s.trials = values.size();
    s.reference = reference;
    const double n = static_cast<double>(values.size());
    CompensatedSum sum;
    for (double v : values) {
        sum += v;
    }
    s.mean = sum.value() / n;
    CompensatedSum sq;
    for (double v : values) {
        sq += (v - s.mean) * (v - s.mean);
    }
    const double variance = values.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
    s.std_error = std::sqrt(variance / n);
    const double diff = s.mean - s.reference;
    if (s.std_error > 0.0) {
        s.z_score = diff / s.std_error;
    } else {
        s.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return s;
}

template <class TrialValue>
std::vector<double> run_trials(const IntensityMeasure& intensity, const Window& window, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads, TrialValue&& trial_value) {
    if (trials < 1) {
        throw ValidationError("Monte Carlo check needs at least one trial");
    }
    total_mass(intensity, window);  // validates the intensity on the window once, up front
    std::vector<double> values(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        const Configuration gamma = sample_poisson(intensity, window, derive_seed(seed, Stream::trials, i));
        values[i] = trial_value(gamma);
    });
    return values;
}

}  // namespace detail

/// integral_window f d sigma.
inline double campbell_reference(const TestFunction& f, const IntensityMeasure& intensity, const Window& window) {
    if (f.kind() == TestFunction::Kind::kill) {
        throw ValidationError("the kill test function has no finite Campbell integral; use the Laplace check");
    }
    if (f.kind() == TestFunction::Kind::zero) {
        return 0.0;
    }
    return radial_integral(intensity, window.inner_radius(), window.outer_radius(),
                           [&f](double rho) { return f.value(rho); }, f.breakpoint());
}

/// exp( integral_window (e^f - 1) d sigma ).
inline double laplace_reference(const TestFunction& f, const IntensityMeasure& intensity, const Window& window) {
    if (f.kind() == TestFunction::Kind::zero) {
        return 1.0;
    }
    return std::exp(radial_integral(intensity, window.inner_radius(), window.outer_radius(),
                                    [&f](double rho) { return f.expm1_value(rho); }, f.breakpoint()));
}

inline McStatistics campbell_mc_check(const TestFunction& f, const IntensityMeasure& intensity, const Window& window,
                                      std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
    const double reference = campbell_reference(f, intensity, window);
    const auto values = detail::run_trials(intensity, window, trials, seed, threads, [&f](const Configuration& gamma) {
        CompensatedSum s;
        for (const cplx& x : gamma.points()) {
            s += f.value(std::abs(x));
        }
        return s.value();
    });
    return detail::summarize("campbell", values, reference);
}

inline McStatistics laplace_mc_check(const TestFunction& f, const IntensityMeasure& intensity, const Window& window,
                                     std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
    const double reference = laplace_reference(f, intensity, window);
    const auto values = detail::run_trials(intensity, window, trials, seed, threads, [&f](const Configuration& gamma) {
        CompensatedSum s;
        for (const cplx& x : gamma.points()) {
            const double v = f.value(std::abs(x));
            if (v == -std::numeric_limits<double>::infinity()) {
                return 0.0;
            }
            s += v;
        }
        return std::exp(s.value());
    });
    return detail::summarize("laplace", values, reference);
}

}  // namespace rze
