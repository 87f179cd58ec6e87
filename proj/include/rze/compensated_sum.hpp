#pragma once

#include <cmath>
#include <complex>

namespace rze {

/// Neumaier's variant of Kahan summation: error O(eps) independent of the
/// number of terms, and robust when a term exceeds the running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Componentwise compensated sum of complex terms.
class CompensatedComplexSum {
public:
    void add(std::complex<double> z) noexcept {
        re_.add(z.real());
        im_.add(z.imag());
    }

    CompensatedComplexSum& operator+=(std::complex<double> z) noexcept {
        add(z);
        return *this;
    }

    std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

}  // namespace rze
