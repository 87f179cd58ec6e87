#pragma once

/**
 * @file weierstrass_product.hpp
 * @brief Certified evaluation of Pi_p(z, gamma) = prod_{x in gamma} E_p(z/x)^{m_x}.
 *
 * The product is evaluated over the sampled window B_S. The points beyond S
 * are never drawn; their contribution to log Pi on B_R is bounded in
 * expectation through the Campbell identity and |1 - E_p(w)| <= |w|^{p+1}:
 *
 *     E sum_{|x|>S} |z/x|^{p+1} <= 2 pi c R^{p+1} int_S^inf rho^{-p} d rho
 *                                = 2 pi c R^{p+1} S^{1-p} / (p - 1),
 *
 * finite exactly when p >= 2, and turned into a confidence statement by Markov.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rze/compensated_sum.hpp"
#include "rze/detail/format.hpp"
#include "rze/elementary_factors.hpp"
#include "rze/error.hpp"
#include "rze/parallel.hpp"
#include "rze/point_process.hpp"
#include "rze/scaled_complex.hpp"

namespace rze {

/// Certified bound on the dropped tail of log Pi over |x| > S.
struct TailBound {
    double expected_tail = 0.0;
    double confidence_level = 0.0;
    double bound_at_confidence = 0.0;  // expected_tail / (1 - confidence_level)
};

namespace detail {

inline void check_tail_arguments(Genus genus, double eval_radius, double sample_radius, double confidence,
                                 double mark_mean) {
    genus.require_convergent("tail certificate");
    if (!(eval_radius > 0.0) || !(sample_radius > eval_radius)) {
        throw ValidationError("tail certificate needs 0 < R < S, got R=" + format_double(eval_radius) +
                              " S=" + format_double(sample_radius));
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw ValidationError("confidence level must lie in (0, 1)");
    }
    if (!(mark_mean >= 1.0) || !std::isfinite(mark_mean)) {
        throw ValidationError("mark mean must be finite and at least 1");
    }
}

inline TailBound make_tail(double expected, double confidence) {
    return TailBound{expected, confidence, expected / (1.0 - confidence)};
}

}  // namespace detail

/// Tail bound for Lebesgue intensity `scale`. `mark_mean` multiplies the
/// bound for marked configurations (expected multiplicity per point).
inline TailBound tail_bound(Genus genus, double scale, double eval_radius, double sample_radius, double confidence,
                            double mark_mean = 1.0) {
    detail::check_tail_arguments(genus, eval_radius, sample_radius, confidence, mark_mean);
    if (!(scale > 0.0)) {
        throw ValidationError("intensity scale must be positive");
    }
    const int p = genus.value();
    // R^{p+1} S^{1-p} written as R^2 (R/S)^{p-1} to stay in range.
    const double expected = mark_mean * scale * 2.0 * std::numbers::pi * eval_radius * eval_radius *
                            std::pow(eval_radius / sample_radius, p - 1) / static_cast<double>(p - 1);
    return detail::make_tail(expected, confidence);
}

/// Tail bound for any intensity; radial densities are integrated numerically
/// over [S, inf).
inline TailBound tail_bound(Genus genus, const IntensityMeasure& intensity, double eval_radius, double sample_radius,
                            double confidence, double mark_mean = 1.0) {
    if (intensity.kind() == IntensityMeasure::Kind::lebesgue) {
        return tail_bound(genus, intensity.scale(), eval_radius, sample_radius, confidence, mark_mean);
    }
    detail::check_tail_arguments(genus, eval_radius, sample_radius, confidence, mark_mean);
    const int p = genus.value();
    // rho = S / t maps [S, inf) onto (0, 1]; rho^{-p} d rho = S^{1-p} t^{p-2} dt.
    const double s = sample_radius;
    const auto integral = integrate(
        [&](double t) {
            if (t <= 0.0) {
                return 0.0;
            }
            return std::pow(t, p - 2) * intensity.intensity_at(s / t);
        },
        0.0, 1.0);
    const double expected = mark_mean * 2.0 * std::numbers::pi * eval_radius * eval_radius *
                            std::pow(eval_radius / sample_radius, p - 1) * integral.value;
    return detail::make_tail(expected, confidence);
}

/// What the evaluator needs to attach a tail certificate.
struct CertificateRequest {
    IntensityMeasure intensity;
    double confidence = 0.95;
    double mark_mean = 1.0;
};

struct EvaluatorOptions {
    /// Replace the factors with |x| > far_field_factor * R by their Taylor
    /// expansion around z = 0 (a polynomial in z/R with precomputed power sums).
    bool far_field = true;
    double far_field_factor = 1.25;
    std::size_t far_field_min_points = 32;
    /// Absolute truncation target for the dropped expansion terms.
    double far_field_tolerance = 1e-17;
};

struct LogValue {
    cplx value;
    std::optional<TailBound> tail;
};

/// Immutable bundle (configuration, genus, R, certificate) answering point
/// evaluations of Pi_p on the closed disk |z| <= R. Safe to share across threads.
class ProductEvaluator {
public:
    ProductEvaluator(const Configuration& config, Genus genus, double eval_radius,
                     std::optional<CertificateRequest> certificate = std::nullopt, EvaluatorOptions options = {})
        : genus_(genus), eval_radius_(eval_radius), window_(config.window()), seed_(config.seed()), marked_(false) {
        zeros_.reserve(config.size());
        for (const cplx& x : config.points()) {
            zeros_.push_back({x, 1});
        }
        build(certificate, options);
    }

    ProductEvaluator(const MarkedConfiguration& config, Genus genus, double eval_radius,
                     std::optional<CertificateRequest> certificate = std::nullopt, EvaluatorOptions options = {})
        : genus_(genus),
          eval_radius_(eval_radius),
          window_(config.window()),
          seed_(config.seed()),
          marked_(true),
          zeros_(config.entries()) {
        build(certificate, options);
    }

    Genus genus() const noexcept { return genus_; }
    double eval_radius() const noexcept { return eval_radius_; }
    double sample_radius() const noexcept { return window_.outer_radius(); }
    const Window& window() const noexcept { return window_; }
    std::uint64_t seed() const noexcept { return seed_; }
    bool is_marked() const noexcept { return marked_; }
    const std::optional<TailBound>& tail() const noexcept { return tail_; }

    /// All zeros with multiplicities, ascending modulus.
    std::span<const MarkedPoint> zeros() const noexcept { return zeros_; }

    /// Number of Taylor terms used for the far field; 0 when every factor is evaluated directly.
    std::size_t far_field_terms() const noexcept { return far_coeffs_.size(); }

    /// sum_x m_x log E_p(z/x) with principal-branch logs, compensated and in ascending |x|.
    LogValue log_product(cplx z) const {
        check_region(z);
        const int p = genus_.value();
        CompensatedComplexSum sum;
        for (std::size_t i = 0; i < near_count_; ++i) {
            const auto& [x, m] = zeros_[i];
            if (x == z) {
                throw DomainError("log Pi is singular at the configuration point (" + detail::format_double(x.real()) +
                                  ", " + detail::format_double(x.imag()) + "); use eval_product");
            }
            sum += static_cast<double>(m) * detail::log_factor(p, z, x);
        }
        sum += far_field(z);
        return LogValue{sum.value(), tail_};
    }

    /// Pi_p(z); exactly zero iff z is a configuration point.
    ScaledComplex eval_product(cplx z) const {
        check_region(z);
        const int p = genus_.value();
        const double near = kNearZeroFraction * eval_radius_;
        const double near2 = near * near;
        CompensatedComplexSum sum;
        ScaledComplex direct{cplx{1.0, 0.0}};
        bool has_direct = false;
        for (std::size_t i = 0; i < near_count_; ++i) {
            const auto& [x, m] = zeros_[i];
            const cplx diff = x - z;
            if (std::norm(diff) <= near2) {
                if (diff == cplx{}) {
                    return ScaledComplex{};
                }
                const ScaledComplex f{detail::direct_factor(p, z, x)};
                for (std::uint64_t k = 0; k < m; ++k) {
                    direct *= f;
                }
                has_direct = true;
                continue;
            }
            sum += static_cast<double>(m) * detail::log_factor(p, z, x);
        }
        sum += far_field(z);
        ScaledComplex out = ScaledComplex::from_log(sum.value());
        if (has_direct) {
            out *= direct;
        }
        return out;
    }

private:
    // Below this distance (relative to R) from a zero the factor is multiplied directly.
    static constexpr double kNearZeroFraction = 1e-8;
    // Relative slack on |z| <= R for contour nodes that round just past R.
    static constexpr double kRegionSlack = 1e-12;

    void build(const std::optional<CertificateRequest>& certificate, const EvaluatorOptions& options) {
        if (!(eval_radius_ > 0.0) || !std::isfinite(eval_radius_)) {
            throw ValidationError("evaluation radius R must be positive and finite");
        }
        if (!(eval_radius_ < window_.outer_radius())) {
            throw ValidationError("evaluation radius R=" + detail::format_double(eval_radius_) +
                                  " must be below the sample radius S=" + detail::format_double(window_.outer_radius()));
        }
        if (certificate) {
            tail_ = tail_bound(genus_, certificate->intensity, eval_radius_, window_.outer_radius(),
                               certificate->confidence, certificate->mark_mean);
        }
        near_count_ = zeros_.size();
        if (!options.far_field) {
            return;
        }
        if (!(options.far_field_factor > 1.0)) {
            throw ValidationError("far-field factor must exceed 1");
        }
        const double cut = options.far_field_factor * eval_radius_;
        std::size_t first_far = 0;
        while (first_far < zeros_.size() && std::abs(zeros_[first_far].point) <= cut) {
            ++first_far;
        }
        if (zeros_.size() - first_far < options.far_field_min_points) {
            return;
        }
        build_far_field(first_far, options.far_field_tolerance);
        near_count_ = first_far;
    }

    // log of the far factors is -sum_{k>p} (1/k) sum_x m_x (R/x)^k u^k with u = z/R, |u| <= 1.
    // Truncating at K leaves at most M rho^{K+1} / ((K+1)(1-rho)), rho = R / min|x|.
    void build_far_field(std::size_t first_far, double tolerance) {
        const int p = genus_.value();
        double total_mult = 0.0;
        for (std::size_t i = first_far; i < zeros_.size(); ++i) {
            total_mult += static_cast<double>(zeros_[i].multiplicity);
        }
        const double rho = eval_radius_ / std::abs(zeros_[first_far].point);
        int last = p + 1;
        while (last < kMaxFarTerms &&
               total_mult * std::pow(rho, last + 1) / ((last + 1) * (1.0 - rho)) > tolerance) {
            ++last;
        }
        const std::size_t terms = static_cast<std::size_t>(last - p);
        std::vector<CompensatedComplexSum> sums(terms);
        for (std::size_t i = first_far; i < zeros_.size(); ++i) {
            const cplx v = eval_radius_ / zeros_[i].point;
            const double m = static_cast<double>(zeros_[i].multiplicity);
            cplx power = v;
            for (int k = 1; k <= p; ++k) {
                power *= v;
            }
            for (std::size_t j = 0; j < terms; ++j) {
                sums[j] += m * power;
                power *= v;
            }
        }
        far_coeffs_.resize(terms);
        for (std::size_t j = 0; j < terms; ++j) {
            far_coeffs_[j] = -sums[j].value() / static_cast<double>(p + 1 + static_cast<int>(j));
        }
    }

    cplx far_field(cplx z) const noexcept {
        if (far_coeffs_.empty()) {
            return {};
        }
        const cplx u = z / eval_radius_;
        cplx acc = far_coeffs_.back();
        for (std::size_t j = far_coeffs_.size() - 1; j-- > 0;) {
            acc = far_coeffs_[j] + u * acc;
        }
        cplx lead = u;
        for (int k = 1; k <= genus_.value(); ++k) {
            lead *= u;
        }
        return acc * lead;
    }

    void check_region(cplx z) const {
        if (!(std::abs(z) <= eval_radius_ * (1.0 + kRegionSlack))) {
            throw DomainError("z = (" + detail::format_double(z.real()) + ", " + detail::format_double(z.imag()) +
                              ") lies outside the certified disk |z| <= " + detail::format_double(eval_radius_));
        }
    }

    static constexpr int kMaxFarTerms = 400;

    Genus genus_;
    double eval_radius_;
    Window window_;
    std::uint64_t seed_;
    bool marked_;
    std::vector<MarkedPoint> zeros_;
    std::size_t near_count_ = 0;
    std::vector<cplx> far_coeffs_;
    std::optional<TailBound> tail_;
};

inline LogValue log_product(const ProductEvaluator& ev, cplx z) { return ev.log_product(z); }

inline ScaledComplex eval_product(const ProductEvaluator& ev, cplx z) { return ev.eval_product(z); }

/// Pi_p(z) for an evaluator built from a MarkedConfiguration.
inline ScaledComplex eval_marked_product(const ProductEvaluator& ev, cplx z) {
    if (!ev.is_marked()) {
        throw ValidationError("eval_marked_product needs an evaluator built from a marked configuration");
    }
    return ev.eval_product(z);
}

/// prod_n E_{p_n}(z / a_n) for a finite zero list with per-zero genus.
inline cplx classical_product(std::span<const cplx> zeros, std::span<const int> genus_seq, cplx z) {
    if (zeros.size() != genus_seq.size()) {
        throw ValidationError("zero list and genus list differ in length");
    }
    for (std::size_t n = 0; n < zeros.size(); ++n) {
        if (zeros[n] == cplx{}) {
            throw ValidationError("classical product zeros must be nonzero (entry " + std::to_string(n) + ")");
        }
        Genus{genus_seq[n]};
    }
    CompensatedComplexSum sum;
    for (std::size_t n = 0; n < zeros.size(); ++n) {
        if (zeros[n] == z) {
            return {};
        }
        sum += detail::log_factor(genus_seq[n], z, zeros[n]);
    }
    return std::exp(sum.value());
}

// ---------------------------------------------------------------------------
// Grid evaluation
// ---------------------------------------------------------------------------

/// Rectangle [re_min, re_max] x [im_min, im_max] sampled on nx x ny nodes.
struct EvaluationGrid {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;
    std::size_t nx = 101;
    std::size_t ny = 101;

    cplx node(std::size_t ix, std::size_t iy) const noexcept {
        const double re = nx == 1 ? re_min : re_min + (re_max - re_min) * static_cast<double>(ix) / static_cast<double>(nx - 1);
        const double im = ny == 1 ? im_min : im_min + (im_max - im_min) * static_cast<double>(iy) / static_cast<double>(ny - 1);
        return {re, im};
    }
};

struct GridNode {
    cplx z;
    double log_abs;  // -inf at an exact zero
    double phase;    // principal argument, 0 at an exact zero
};

/// Row-major nodes: index = iy * nx + ix, real part varying fastest.
struct GridResult {
    EvaluationGrid grid;
    std::vector<GridNode> nodes;
};

inline GridResult grid_evaluate(const ProductEvaluator& ev, const EvaluationGrid& grid, unsigned threads = 1) {
    if (grid.nx < 1 || grid.ny < 1 || !(grid.re_max >= grid.re_min) || !(grid.im_max >= grid.im_min)) {
        throw ValidationError("grid needs at least one node per axis and ordered bounds");
    }
    const double r = ev.eval_radius();
    for (const cplx c : {cplx{grid.re_min, grid.im_min}, cplx{grid.re_min, grid.im_max}, cplx{grid.re_max, grid.im_min},
                         cplx{grid.re_max, grid.im_max}}) {
        if (std::abs(c) > r * (1.0 + 1e-12)) {
            throw ValidationError("grid corner (" + detail::format_double(c.real()) + ", " + detail::format_double(c.imag()) +
                                  ") lies outside the certified disk |z| <= " + detail::format_double(r));
        }
    }
    GridResult out{grid, std::vector<GridNode>(grid.nx * grid.ny)};
    parallel_for(grid.ny, threads, [&](std::size_t iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const cplx z = grid.node(ix, iy);
            const ScaledComplex v = ev.eval_product(z);
            out.nodes[iy * grid.nx + ix] = GridNode{z, v.log_abs(), v.is_zero() ? 0.0 : v.phase()};
        }
    });
    return out;
}

}  // namespace rze
