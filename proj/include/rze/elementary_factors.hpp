#pragma once

/**
 * @file elementary_factors.hpp
 * @brief Elementary factors E_p(w) = (1 - w) exp(w + w^2/2 + ... + w^p/p).
 *
 * Near the origin E_p(w) = 1 - w^{p+1}/(p+1) - ..., so both log E_p and
 * 1 - E_p lose their leading p+1 digits when formed from the closed form.
 * Inside |w| < 1/2 they are instead evaluated from the tail series
 *
 *     log E_p(w) = -sum_{k > p} w^k / k,
 *
 * which converges at least like 2^{-k}. Outside, the closed form is
 * well-conditioned.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "rze/error.hpp"

namespace rze {

using cplx = std::complex<double>;

/// Number of exponential correction terms p in E_p.
class Genus {
public:
    explicit Genus(int p) : p_(p) {
        if (p < 0) {
            throw ValidationError("genus must be non-negative, got " + std::to_string(p));
        }
    }

    int value() const noexcept { return p_; }

    /// Enforces p >= 2, the genus for which the tail integral over |x| > R converges.
    void require_convergent(const char* what) const {
        if (p_ < 2) {
            throw ValidationError(std::string(what) + " requires genus p >= 2 (the tail integral of |z/x|^{p+1} over the plane "
                                  "diverges for p < 2), got p = " + std::to_string(p_));
        }
    }

    friend bool operator==(Genus, Genus) = default;

private:
    int p_;
};

/// Relative tolerance on the term magnitude at which the tail series stops.
inline constexpr double kSeriesTolerance = 1e-16;

/// |w| below which the tail series is used instead of the closed form.
inline constexpr double kSeriesRadius = 0.5;

namespace detail {

// sum_{k=1..p} w^k / k by Horner.
inline cplx correction_polynomial(int p, cplx w) noexcept {
    if (p == 0) {
        return {};
    }
    cplx s{1.0 / p, 0.0};
    for (int k = p - 1; k >= 1; --k) {
        s = 1.0 / k + w * s;
    }
    return w * s;
}

// -sum_{k>p} w^k / k for |w| < 1/2, stopped once a term drops below
// tolerance relative to the running sum.
inline cplx tail_series(int p, cplx w, double tolerance = kSeriesTolerance) noexcept {
    cplx power = w;
    for (int k = 1; k <= p; ++k) {
        power *= w;
    }
    cplx sum = power / static_cast<double>(p + 1);
    const double tol2 = tolerance * tolerance;
    for (int k = p + 2; k < p + 2 + 4096; ++k) {
        power *= w;
        const cplx term = power / static_cast<double>(k);
        sum += term;
        if (std::norm(term) <= tol2 * std::norm(sum)) {
            break;
        }
    }
    return -sum;
}

inline cplx expm1(cplx z) noexcept {
    const double a = z.real();
    const double b = z.imag();
    const double h = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * h * h, std::exp(a) * std::sin(b)};
}

// log E_p(z/x) with the zero factor formed as (x - z)/x, which is exactly 0
// when z == x. Caller guarantees z != x.
inline cplx log_factor(int p, cplx z, cplx x) noexcept {
    const cplx w = z / x;
    if (std::norm(w) < kSeriesRadius * kSeriesRadius) {
        return tail_series(p, w);
    }
    return std::log((x - z) / x) + correction_polynomial(p, w);
}

// E_p(z/x) computed directly; used only near a zero where the value is small.
inline cplx direct_factor(int p, cplx z, cplx x) noexcept {
    const cplx w = z / x;
    return ((x - z) / x) * std::exp(correction_polynomial(p, w));
}

}  // namespace detail

/// E_p(w). Throws RangeError when the exponential overflows; use log_E there.
inline cplx eval_E(Genus genus, cplx w) {
    const int p = genus.value();
    if (p == 0) {
        return 1.0 - w;
    }
    const cplx poly = detail::correction_polynomial(p, w);
    if (!(poly.real() < 709.0)) {
        throw RangeError("E_p(w) overflows double range at |w| = " + std::to_string(std::abs(w)) + "; use log_E");
    }
    return (1.0 - w) * std::exp(poly);
}

/// Principal-branch log E_p(w). Throws DomainError at the zero w = 1.
inline cplx log_E(Genus genus, cplx w, double series_tolerance = kSeriesTolerance) {
    if (w == cplx{1.0, 0.0}) {
        throw DomainError("log E_p(w) is singular at w = 1");
    }
    const int p = genus.value();
    if (std::norm(w) < kSeriesRadius * kSeriesRadius) {
        return detail::tail_series(p, w, series_tolerance);
    }
    return std::log(1.0 - w) + detail::correction_polynomial(p, w);
}

/// 1 - E_p(w) without cancellation near w = 0; ~ w^{p+1}/(p+1) there.
inline cplx one_minus_E(Genus genus, cplx w) {
    const int p = genus.value();
    if (p == 0) {
        return w;
    }
    if (std::norm(w) < kSeriesRadius * kSeriesRadius) {
        return -detail::expm1(detail::tail_series(p, w));
    }
    return 1.0 - eval_E(genus, w);
}

/// |1 - E_p(w)| <= |w|^{p+1} for |w| < 1, up to a relative slack for rounding.
inline bool check_lemma1(Genus genus, cplx w, double slack = 1e-12) {
    const double r = std::abs(w);
    if (!(r < 1.0)) {
        throw DomainError("the bound |1 - E_p(w)| <= |w|^{p+1} needs |w| < 1, got |w| = " + std::to_string(r));
    }
    return std::abs(one_minus_E(genus, w)) <= std::pow(r, genus.value() + 1) * (1.0 + slack);
}

/// Polar sample set for estimating A_p: log-spaced moduli times uniform angles.
struct EstimationGrid {
    double min_modulus = 1e-6;
    double max_modulus = 1e3;
    std::size_t radial_nodes = 400;
    std::size_t angular_nodes = 256;
    double safety_factor = 1.1;

    std::vector<cplx> nodes() const {
        if (!(min_modulus > 0.0) || !(max_modulus > min_modulus) || radial_nodes < 2 || angular_nodes < 1 ||
            !(safety_factor >= 1.0)) {
            throw ValidationError("invalid A_p estimation grid");
        }
        std::vector<cplx> out;
        out.reserve(radial_nodes * angular_nodes);
        const double l0 = std::log(min_modulus);
        const double l1 = std::log(max_modulus);
        for (std::size_t i = 0; i < radial_nodes; ++i) {
            const double r = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(radial_nodes - 1));
            for (std::size_t j = 0; j < angular_nodes; ++j) {
                const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angular_nodes);
                out.push_back(std::polar(r, theta));
            }
        }
        return out;
    }
};

/// Grid-certified constant for ln|E_p(w)| <= A_p |w|^{p+1} / (1 + |w|).
/// Valid on the grid it was estimated on; no global claim is made.
struct LemmaConstant {
    Genus genus{0};
    double value = 0.0;     // A_p after the safety factor
    double supremum = 0.0;  // grid supremum before inflation
    EstimationGrid grid;
};

/// ln|E_p(w)| * (1 + |w|) / |w|^{p+1}; -inf at the zero w = 1.
inline double lemma2_ratio(Genus genus, cplx w) {
    if (w == cplx{1.0, 0.0}) {
        return -std::numeric_limits<double>::infinity();
    }
    const double r = std::abs(w);
    const double log_abs = log_E(genus, w).real();
    // r^{p+1} may underflow for tiny r; divide stepwise.
    double ratio = log_abs * (1.0 + r);
    for (int k = 0; k <= genus.value(); ++k) {
        ratio /= r;
    }
    return ratio;
}

inline LemmaConstant estimate_A(Genus genus, const EstimationGrid& grid = {}) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const cplx& w : grid.nodes()) {
        const double q = lemma2_ratio(genus, w);
        if (q > sup) {
            sup = q;
        }
    }
    if (!std::isfinite(sup)) {
        throw RangeError("A_p estimate is not finite on the requested grid");
    }
    // A_p must be positive; a non-positive supremum still certifies with any small positive constant.
    const double a = sup > 0.0 ? sup * grid.safety_factor : std::numeric_limits<double>::min();
    return LemmaConstant{genus, a, sup, grid};
}

/// ln|E_p(w)| <= A_p |w|^{p+1} / (1 + |w|).
inline bool check_lemma2(const LemmaConstant& constant, cplx w) {
    if (w == cplx{}) {
        return true;
    }
    return lemma2_ratio(constant.genus, w) <= constant.value;
}

}  // namespace rze
