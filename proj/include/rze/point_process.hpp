#pragma once

/**
 * @file point_process.hpp
 * @brief Poisson and marked Poisson configurations on bounded windows of the plane.
 *
 * A Poisson configuration with intensity measure sigma restricted to a window W
 * is drawn as N ~ Poisson(sigma(W)) followed by N i.i.d. points from the
 * normalized restriction sigma|_W / sigma(W). Every built-in intensity is
 * rotation invariant, so a point is a radius from the radial marginal and a
 * uniform angle.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/math/tools/roots.hpp>

#include "rze/detail/format.hpp"
#include "rze/error.hpp"
#include "rze/quadrature.hpp"
#include "rze/rng.hpp"

namespace rze {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Window
// ---------------------------------------------------------------------------

/// Closed disk |z| <= outer or closed annulus inner <= |z| <= outer.
class Window {
public:
    enum class Kind { disk, annulus };

    static Window disk(double radius) { return Window(Kind::disk, 0.0, radius); }

    static Window annulus(double inner, double outer) { return Window(Kind::annulus, inner, outer); }

    Kind kind() const noexcept { return kind_; }
    double inner_radius() const noexcept { return inner_; }
    double outer_radius() const noexcept { return outer_; }

    bool contains(cplx z) const noexcept {
        const double r = std::abs(z);
        return r >= inner_ && r <= outer_;
    }

    double area() const noexcept { return std::numbers::pi * (outer_ * outer_ - inner_ * inner_); }

    std::string description() const {
        if (kind_ == Kind::disk) {
            return "disk:" + detail::format_double(outer_);
        }
        return "annulus:" + detail::format_double(inner_) + ":" + detail::format_double(outer_);
    }

    friend bool operator==(const Window&, const Window&) = default;

private:
    Window(Kind kind, double inner, double outer) : kind_(kind), inner_(inner), outer_(outer) {
        if (!(inner >= 0.0) || !(outer > inner) || !std::isfinite(outer)) {
            throw ValidationError("window needs 0 <= inner_radius < outer_radius < inf, got inner=" +
                                  detail::format_double(inner) + " outer=" + detail::format_double(outer));
        }
        if (kind == Kind::disk && inner != 0.0) {
            throw ValidationError("disk window has inner radius 0");
        }
    }

    Kind kind_;
    double inner_;
    double outer_;
};

// ---------------------------------------------------------------------------
// Intensity measure
// ---------------------------------------------------------------------------

/// sigma(dz) = scale * density(|z|) dz, with density == 1 for the Lebesgue kind.
class IntensityMeasure {
public:
    enum class Kind { lebesgue, radial };
    using Density = std::function<double(double)>;

    static IntensityMeasure lebesgue(double scale) {
        check_scale(scale);
        return IntensityMeasure(Kind::lebesgue, scale, nullptr, "lebesgue:" + detail::format_double(scale));
    }

    /// Arbitrary radial density; `description` is echoed into provenance records.
    static IntensityMeasure radial(double scale, Density density, std::string description) {
        check_scale(scale);
        if (!density) {
            throw ValidationError("radial intensity needs a density function");
        }
        return IntensityMeasure(Kind::radial, scale, std::make_shared<Density>(std::move(density)), std::move(description));
    }

    /// density(rho) = exp(-rho / length)
    static IntensityMeasure radial_exponential(double length, double scale = 1.0) {
        if (!(length > 0.0)) {
            throw ValidationError("exponential radial density needs a positive length");
        }
        return radial(scale, [length](double rho) { return std::exp(-rho / length); },
                      "radial:exp:" + detail::format_double(length) + ":" + detail::format_double(scale));
    }

    /// density(rho) = (1 + rho)^{-alpha}
    static IntensityMeasure radial_power(double alpha, double scale = 1.0) {
        if (!(alpha >= 0.0)) {
            throw ValidationError("power-law radial density needs a non-negative exponent");
        }
        return radial(scale, [alpha](double rho) { return std::pow(1.0 + rho, -alpha); },
                      "radial:power:" + detail::format_double(alpha) + ":" + detail::format_double(scale));
    }

    Kind kind() const noexcept { return kind_; }
    double scale() const noexcept { return scale_; }
    const std::string& description() const noexcept { return description_; }

    /// Density w.r.t. Lebesgue measure at modulus rho, including the scale.
    double intensity_at(double rho) const {
        if (kind_ == Kind::lebesgue) {
            return scale_;
        }
        const double d = (*density_)(rho);
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw ValidationError("radial density must be finite and non-negative, got " + detail::format_double(d) +
                                  " at rho=" + detail::format_double(rho));
        }
        return scale_ * d;
    }

private:
    IntensityMeasure(Kind kind, double scale, std::shared_ptr<const Density> density, std::string description)
        : kind_(kind), scale_(scale), density_(std::move(density)), description_(std::move(description)) {}

    static void check_scale(double scale) {
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw ValidationError("intensity scale must be positive and finite, got " + detail::format_double(scale) +
                                  " (use Configuration::empty for the zero-intensity limit)");
        }
    }

    Kind kind_;
    double scale_;
    std::shared_ptr<const Density> density_;
    std::string description_;
};

/// 2*pi * integral_{a}^{b} rho * g(rho) * intensity(rho) d rho, split at an optional interior breakpoint.
template <class G>
double radial_integral(const IntensityMeasure& intensity, double a, double b, G&& g, double breakpoint = 0.0,
                       double rel_tol = 1e-10) {
    auto integrand = [&](double rho) { return rho * g(rho) * intensity.intensity_at(rho); };
    double total = 0.0;
    if (breakpoint > a && breakpoint < b) {
        total = integrate(integrand, a, breakpoint, rel_tol).value + integrate(integrand, breakpoint, b, rel_tol).value;
    } else {
        total = integrate(integrand, a, b, rel_tol).value;
    }
    return 2.0 * std::numbers::pi * total;
}

/// sigma(window).
inline double total_mass(const IntensityMeasure& intensity, const Window& window) {
    if (intensity.kind() == IntensityMeasure::Kind::lebesgue) {
        return intensity.scale() * window.area();
    }
    return radial_integral(intensity, window.inner_radius(), window.outer_radius(), [](double) { return 1.0; });
}

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

namespace detail {

// Sort key: modulus, then argument.
inline bool point_less(cplx a, cplx b) noexcept {
    const double ra = std::abs(a);
    const double rb = std::abs(b);
    if (ra != rb) {
        return ra < rb;
    }
    return std::arg(a) < std::arg(b);
}

inline void check_point(cplx x, const Window& window) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw ValidationError("configuration point is not finite");
    }
    if (x == cplx{}) {
        throw ValidationError("configuration point at the origin is excluded from the product");
    }
    if (!window.contains(x)) {
        throw ValidationError("configuration point (" + format_double(x.real()) + ", " + format_double(x.imag()) +
                              ") lies outside window " + window.description());
    }
}

}  // namespace detail

/// Finite set of nonzero points in a window, sorted by modulus then argument.
class Configuration {
public:
    Configuration(std::vector<cplx> points, Window window, std::uint64_t seed)
        : points_(std::move(points)), window_(window), seed_(seed) {
        for (const cplx& x : points_) {
            detail::check_point(x, window_);
        }
        sort_points();
    }

    static Configuration empty(Window window, std::uint64_t seed = 0) { return Configuration({}, window, seed); }

    const std::vector<cplx>& points() const noexcept { return points_; }
    const Window& window() const noexcept { return window_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    void sort_points() {
        std::vector<std::pair<std::pair<double, double>, cplx>> keyed;
        keyed.reserve(points_.size());
        for (const cplx& x : points_) {
            keyed.push_back({{std::abs(x), std::arg(x)}, x});
        }
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            points_[i] = keyed[i].second;
        }
    }

    std::vector<cplx> points_;
    Window window_;
    std::uint64_t seed_;
};

struct MarkedPoint {
    cplx point;
    std::uint64_t multiplicity = 1;

    friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

/// Points paired with positive integer multiplicities, sorted like Configuration.
class MarkedConfiguration {
public:
    MarkedConfiguration(std::vector<MarkedPoint> entries, Window window, std::uint64_t seed)
        : entries_(std::move(entries)), window_(window), seed_(seed) {
        for (const auto& e : entries_) {
            detail::check_point(e.point, window_);
            if (e.multiplicity < 1) {
                throw ValidationError("multiplicity must be at least 1");
            }
        }
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const MarkedPoint& a, const MarkedPoint& b) { return detail::point_less(a.point, b.point); });
    }

    const std::vector<MarkedPoint>& entries() const noexcept { return entries_; }
    const Window& window() const noexcept { return window_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Drops the marks.
    Configuration ground() const {
        std::vector<cplx> pts;
        pts.reserve(entries_.size());
        for (const auto& e : entries_) {
            pts.push_back(e.point);
        }
        return Configuration(std::move(pts), window_, seed_);
    }

    /// Unmarked configuration listing each point n_x times.
    Configuration replicated() const {
        std::vector<cplx> pts;
        for (const auto& e : entries_) {
            pts.insert(pts.end(), e.multiplicity, e.point);
        }
        return Configuration(std::move(pts), window_, seed_);
    }

    friend bool operator==(const MarkedConfiguration&, const MarkedConfiguration&) = default;

private:
    std::vector<MarkedPoint> entries_;
    Window window_;
    std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Mark distributions
// ---------------------------------------------------------------------------

/// Probability law on {1, 2, 3, ...} with finite mean.
class MarkDistribution {
public:
    enum class Kind { deterministic, geometric, zeta };

    /// Point mass at n.
    static MarkDistribution deterministic(std::uint64_t n) {
        if (n < 1) {
            throw ValidationError("deterministic mark must be at least 1");
        }
        MarkDistribution d(Kind::deterministic, "deterministic:" + std::to_string(n));
        d.value_ = static_cast<double>(n);
        d.mean_ = static_cast<double>(n);
        return d;
    }

    /// P(n) = (1-q)^{n-1} q, mean 1/q.
    static MarkDistribution geometric(double q) {
        if (!(q > 0.0 && q <= 1.0)) {
            throw ValidationError("geometric mark distribution needs success probability in (0, 1], got " +
                                  detail::format_double(q));
        }
        MarkDistribution d(Kind::geometric, "geometric:" + detail::format_double(q));
        d.value_ = q;
        d.mean_ = 1.0 / q;
        return d;
    }

    /// P(n) proportional to n^{-s}, on {1..max_mark} or on all of N when max_mark == 0.
    /// The untruncated law has finite mean only for s > 2.
    static MarkDistribution zeta(double s, std::uint64_t max_mark = 0) {
        if (!std::isfinite(s)) {
            throw ValidationError("zeta mark exponent must be finite");
        }
        std::string desc = "zeta:" + detail::format_double(s);
        if (max_mark == 0) {
            if (!(s > 2.0)) {
                throw ValidationError("zeta mark distribution with exponent " + detail::format_double(s) +
                                      " has infinite mean; marks need sum_n n lambda(n) < inf (exponent > 2 or a "
                                      "truncation n_max)");
            }
            MarkDistribution d(Kind::zeta, desc);
            d.value_ = s;
            d.mean_ = boost::math::zeta(s - 1.0) / boost::math::zeta(s);
            return d;
        }
        if (max_mark > 10'000'000ULL) {
            throw ValidationError("zeta truncation n_max above 1e7 is not supported");
        }
        MarkDistribution d(Kind::zeta, desc + ":" + std::to_string(max_mark));
        d.value_ = s;
        d.max_mark_ = max_mark;
        std::vector<double> cdf(max_mark);
        double norm = 0.0;
        double first = 0.0;
        for (std::uint64_t n = 1; n <= max_mark; ++n) {
            const double pn = std::pow(static_cast<double>(n), -s);
            norm += pn;
            first += static_cast<double>(n) * pn;
            cdf[n - 1] = norm;
        }
        for (double& c : cdf) {
            c /= norm;
        }
        cdf.back() = 1.0;
        d.cdf_ = std::make_shared<const std::vector<double>>(std::move(cdf));
        d.mean_ = first / norm;
        return d;
    }

    Kind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    const std::string& description() const noexcept { return description_; }

    std::uint64_t sample(Rng& rng) const {
        switch (kind_) {
            case Kind::deterministic: return static_cast<std::uint64_t>(value_);
            case Kind::geometric: {
                if (value_ == 1.0) {
                    return 1;
                }
                const double u = rng.uniform();
                return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-value_)));
            }
            case Kind::zeta:
                if (cdf_) {
                    const double u = rng.uniform();
                    const auto it = std::lower_bound(cdf_->begin(), cdf_->end(), u);
                    return 1 + static_cast<std::uint64_t>(it - cdf_->begin());
                }
                return sample_zeta_rejection(rng);
        }
        return 1;
    }

private:
    MarkDistribution(Kind kind, std::string description) : kind_(kind), description_(std::move(description)) {}

    // Devroye's rejection sampler for the untruncated zeta law.
    std::uint64_t sample_zeta_rejection(Rng& rng) const {
        const double s = value_;
        const double b = std::pow(2.0, s - 1.0);
        for (;;) {
            const double u = rng.uniform();
            const double v = rng.uniform();
            const double x = std::floor(std::pow(u, -1.0 / (s - 1.0)));
            if (x > 0x1p62) {
                continue;
            }
            const double t = std::pow(1.0 + 1.0 / x, s - 1.0);
            if (v * x * (t - 1.0) / (b - 1.0) <= t / b) {
                return static_cast<std::uint64_t>(x);
            }
        }
    }

    Kind kind_;
    std::string description_;
    double value_ = 0.0;
    double mean_ = 0.0;
    std::uint64_t max_mark_ = 0;
    std::shared_ptr<const std::vector<double>> cdf_;
};

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

namespace detail {

// Inverse CDF of the radial marginal 2*pi*rho*intensity(rho) on [inner, outer],
// tabulated on equal cells with a fixed Gauss-Legendre rule and inverted inside
// a cell by bracketing root finding on the same rule.
class RadialSampler {
public:
    RadialSampler(const IntensityMeasure& intensity, const Window& window, std::size_t cells = 2048)
        : intensity_(&intensity), inner_(window.inner_radius()), outer_(window.outer_radius()) {
        edges_.resize(cells + 1);
        cumulative_.resize(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i) {
            edges_[i] = inner_ + (outer_ - inner_) * static_cast<double>(i) / static_cast<double>(cells);
        }
        edges_.back() = outer_;
        cumulative_[0] = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            cumulative_[i + 1] = cumulative_[i] + cell_mass(edges_[i], edges_[i + 1]);
        }
        if (!(cumulative_.back() > 0.0)) {
            throw ValidationError("radial intensity has zero mass on the window");
        }
    }

    double radius(double u) const {
        const double target = u * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        std::size_t cell = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin(), 1)) - 1;
        cell = std::min(cell, edges_.size() - 2);
        const double a = edges_[cell];
        const double b = edges_[cell + 1];
        const double need = target - cumulative_[cell];
        auto g = [&](double r) { return cell_mass(a, r) - need; };
        const double ga = -need;
        const double gb = g(b);
        if (ga >= 0.0) {
            return a;
        }
        if (gb <= 0.0) {
            return b;
        }
        std::uintmax_t iters = 100;
        const auto bracket =
            boost::math::tools::toms748_solve(g, a, b, ga, gb, boost::math::tools::eps_tolerance<double>(52), iters);
        return 0.5 * (bracket.first + bracket.second);
    }

private:
    double cell_mass(double a, double b) const {
        if (b <= a) {
            return 0.0;
        }
        return boost::math::quadrature::gauss<double, 20>::integrate(
            [this](double rho) { return rho * intensity_->intensity_at(rho); }, a, b);
    }

    const IntensityMeasure* intensity_;
    double inner_;
    double outer_;
    std::vector<double> edges_;
    std::vector<double> cumulative_;
};

// Draws `count` points from the normalized restriction of the intensity to
// [inner, outer]; points exactly at the origin or rounded out of the window
// are redrawn.
inline std::vector<cplx> draw_points(const IntensityMeasure& intensity, const Window& window, std::uint64_t count,
                                     Rng& rng) {
    std::vector<cplx> pts;
    pts.reserve(count);
    const double in = window.inner_radius();
    const double out = window.outer_radius();
    std::unique_ptr<RadialSampler> radial;
    if (intensity.kind() == IntensityMeasure::Kind::radial && count > 0) {
        radial = std::make_unique<RadialSampler>(intensity, window);
    }
    while (pts.size() < count) {
        const double u = rng.uniform();
        const double v = rng.uniform();
        const double rho = radial ? radial->radius(u) : std::sqrt(u * (out * out - in * in) + in * in);
        const cplx x = std::polar(rho, 2.0 * std::numbers::pi * v);
        if (x == cplx{} || !window.contains(x)) {
            continue;
        }
        pts.push_back(x);
    }
    return pts;
}

}  // namespace detail

/// Poisson configuration on `window`; deterministic in `seed`.
inline Configuration sample_poisson(const IntensityMeasure& intensity, const Window& window, std::uint64_t seed) {
    const double mass = total_mass(intensity, window);
    if (!std::isfinite(mass)) {
        throw ValidationError("intensity has infinite mass on window " + window.description());
    }
    Rng rng(derive_seed(seed, Stream::points));
    const std::uint64_t n = rng.poisson(mass);
    return Configuration(detail::draw_points(intensity, window, n, rng), window, seed);
}

/// Marked Poisson configuration: ground process as sample_poisson with the
/// same seed, marks i.i.d. from a separate stream.
inline MarkedConfiguration sample_marked(const IntensityMeasure& intensity, const MarkDistribution& marks,
                                         const Window& window, std::uint64_t seed) {
    const Configuration ground = sample_poisson(intensity, window, seed);
    Rng rng(derive_seed(seed, Stream::marks));
    std::vector<MarkedPoint> entries;
    entries.reserve(ground.size());
    for (const cplx& x : ground.points()) {
        entries.push_back({x, marks.sample(rng)});
    }
    return MarkedConfiguration(std::move(entries), window, seed);
}

/// Superposes an independent Poisson sample on the annulus outer < |z| <= new_outer.
/// The points of `config` are kept unchanged, so the result is a coupled
/// extension of the same realization to the larger window.
inline Configuration extend_window(const Configuration& config, const IntensityMeasure& intensity, double new_outer) {
    const Window& w = config.window();
    if (!(new_outer > w.outer_radius())) {
        throw ValidationError("window extension needs a larger outer radius");
    }
    const Window ring = Window::annulus(w.outer_radius(), new_outer);
    const double mass = total_mass(intensity, ring);
    std::uint64_t bits = 0;
    static_assert(sizeof bits == sizeof new_outer);
    std::memcpy(&bits, &new_outer, sizeof bits);
    Rng rng(derive_seed(config.seed(), Stream::extension, bits));
    const std::uint64_t n = rng.poisson(mass);
    std::vector<cplx> pts = config.points();
    for (const cplx& x : detail::draw_points(intensity, ring, n, rng)) {
        pts.push_back(x);
    }
    const Window grown =
        w.kind() == Window::Kind::disk ? Window::disk(new_outer) : Window::annulus(w.inner_radius(), new_outer);
    return Configuration(std::move(pts), grown, config.seed());
}

/// (points with |x| <= R, points with |x| > R). The closed ball goes inside.
/// When R equals the outer radius the outer part is empty and keeps the parent window.
inline std::pair<Configuration, Configuration> split(const Configuration& config, double radius) {
    const Window& w = config.window();
    if (!(radius > w.inner_radius()) || !(radius <= w.outer_radius())) {
        throw ValidationError("split radius " + detail::format_double(radius) + " outside the radial extent of window " +
                              w.description());
    }
    std::vector<cplx> inside;
    std::vector<cplx> outside;
    for (const cplx& x : config.points()) {
        (std::abs(x) <= radius ? inside : outside).push_back(x);
    }
    const Window inner_window =
        w.kind() == Window::Kind::disk ? Window::disk(radius) : Window::annulus(w.inner_radius(), radius);
    const Window outer_window = radius < w.outer_radius() ? Window::annulus(radius, w.outer_radius()) : w;
    return {Configuration(std::move(inside), inner_window, config.seed()),
            Configuration(std::move(outside), outer_window, config.seed())};
}

}  // namespace rze
