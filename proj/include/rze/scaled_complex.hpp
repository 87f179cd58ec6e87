#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace rze {

/// A complex number stored as mantissa * 2^exponent so that products over
/// thousands of factors can be carried past the double range. Values inside
/// the double range are kept with exponent 0, i.e. as a plain complex.
class ScaledComplex {
public:
    ScaledComplex() = default;
    ScaledComplex(std::complex<double> value) : mantissa_(value) {}  // NOLINT(implicit)
    ScaledComplex(std::complex<double> mantissa, std::int64_t exponent) : mantissa_(mantissa), exponent_(exponent) {}

    /// exp(log_value), with the exponent split off when Re(log_value) leaves +-700.
    static ScaledComplex from_log(std::complex<double> log_value) {
        const double re = log_value.real();
        if (re == -std::numeric_limits<double>::infinity()) {
            return ScaledComplex{};
        }
        if (std::abs(re) <= kPlainLimit) {
            return ScaledComplex{std::exp(log_value)};
        }
        const auto k = static_cast<std::int64_t>(std::floor(re / std::numbers::ln2));
        const std::complex<double> reduced{re - static_cast<double>(k) * std::numbers::ln2, log_value.imag()};
        return ScaledComplex{std::exp(reduced), k};
    }

    const std::complex<double>& mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }

    bool is_zero() const noexcept { return mantissa_ == std::complex<double>{}; }

    /// True when the value can be returned as a plain double-precision complex.
    bool is_plain() const noexcept { return exponent_ == 0; }

    /// ln|value|; -inf at an exact zero.
    double log_abs() const noexcept {
        if (is_zero()) {
            return -std::numeric_limits<double>::infinity();
        }
        return std::log(std::abs(mantissa_)) + static_cast<double>(exponent_) * std::numbers::ln2;
    }

    /// Principal argument in (-pi, pi]; 0 at an exact zero.
    double phase() const noexcept { return std::arg(mantissa_); }

    /// Converts to a plain complex; overflows to inf or underflows to 0 outside the double range.
    std::complex<double> to_complex() const noexcept {
        if (exponent_ == 0) {
            return mantissa_;
        }
        const int e = exponent_ > std::numeric_limits<int>::max()   ? std::numeric_limits<int>::max()
                      : exponent_ < std::numeric_limits<int>::min() ? std::numeric_limits<int>::min()
                                                                    : static_cast<int>(exponent_);
        return {std::ldexp(mantissa_.real(), e), std::ldexp(mantissa_.imag(), e)};
    }

    ScaledComplex& operator*=(const ScaledComplex& other) noexcept {
        mantissa_ *= other.mantissa_;
        exponent_ += other.exponent_;
        normalize();
        return *this;
    }

    friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) noexcept { return a *= b; }

private:
    static constexpr double kPlainLimit = 700.0;

    // Pulls the binary exponent out of the mantissa once it drifts far from 1,
    // and folds it back in when the value fits a double again.
    void normalize() noexcept {
        if (is_zero()) {
            exponent_ = 0;
            return;
        }
        const double m = std::max(std::abs(mantissa_.real()), std::abs(mantissa_.imag()));
        int e = 0;
        std::frexp(m, &e);
        if (e > 512 || e < -512 || exponent_ != 0) {
            mantissa_ = {std::ldexp(mantissa_.real(), -e), std::ldexp(mantissa_.imag(), -e)};
            exponent_ += e;
        }
        if (exponent_ != 0 && exponent_ > -900 && exponent_ < 900) {
            const int back = static_cast<int>(exponent_);
            const std::complex<double> plain{std::ldexp(mantissa_.real(), back), std::ldexp(mantissa_.imag(), back)};
            const double pm = std::max(std::abs(plain.real()), std::abs(plain.imag()));
            if (pm > 0x1p-1000 && pm < 0x1p1000) {
                mantissa_ = plain;
                exponent_ = 0;
            }
        }
    }

    std::complex<double> mantissa_{};
    std::int64_t exponent_ = 0;
};

}  // namespace rze
