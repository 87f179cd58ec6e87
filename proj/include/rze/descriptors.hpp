#pragma once

/// Parsers for the shell-friendly `key:value[:value]` descriptors, the
/// inverses of the description() strings of the corresponding types.
///
///   intensity   lebesgue:<scale> | radial:exp:<length>[:<scale>] | radial:power:<alpha>[:<scale>]
///   window      disk:<R> | annulus:<inner>:<outer>
///   marks       deterministic:<n> | geometric:<q> | zeta:<s>[:<n_max>]
///   function    zero | indicator:<r>[:<height>] | gaussian:<a>[:<amp>] | poly:<r>[:<amp>]
///               | quadratic:<r> | kill:<r>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rze/error.hpp"
#include "rze/monte_carlo.hpp"
#include "rze/point_process.hpp"

namespace rze {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(':', start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline double parse_real(std::string_view field, std::string_view context) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ValidationError("cannot parse number '" + std::string(field) + "' in '" + std::string(context) + "'");
    }
    return value;
}

inline std::uint64_t parse_count(std::string_view field, std::string_view context) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ValidationError("cannot parse integer '" + std::string(field) + "' in '" + std::string(context) + "'");
    }
    return value;
}

inline void expect_fields(const std::vector<std::string_view>& f, std::size_t lo, std::size_t hi, std::string_view text) {
    if (f.size() < lo || f.size() > hi) {
        throw ValidationError("malformed descriptor '" + std::string(text) + "'");
    }
}

}  // namespace detail

inline IntensityMeasure parse_intensity(std::string_view text) {
    const auto f = detail::split_fields(text);
    if (f[0] == "lebesgue") {
        detail::expect_fields(f, 2, 2, text);
        return IntensityMeasure::lebesgue(detail::parse_real(f[1], text));
    }
    if (f[0] == "radial") {
        detail::expect_fields(f, 3, 4, text);
        const double param = detail::parse_real(f[2], text);
        const double scale = f.size() == 4 ? detail::parse_real(f[3], text) : 1.0;
        if (f[1] == "exp") {
            return IntensityMeasure::radial_exponential(param, scale);
        }
        if (f[1] == "power") {
            return IntensityMeasure::radial_power(param, scale);
        }
    }
    throw ValidationError("unknown intensity '" + std::string(text) + "'");
}

inline Window parse_window(std::string_view text) {
    const auto f = detail::split_fields(text);
    if (f[0] == "disk") {
        detail::expect_fields(f, 2, 2, text);
        return Window::disk(detail::parse_real(f[1], text));
    }
    if (f[0] == "annulus") {
        detail::expect_fields(f, 3, 3, text);
        return Window::annulus(detail::parse_real(f[1], text), detail::parse_real(f[2], text));
    }
    throw ValidationError("unknown window '" + std::string(text) + "'");
}

inline MarkDistribution parse_marks(std::string_view text) {
    const auto f = detail::split_fields(text);
    if (f[0] == "deterministic") {
        detail::expect_fields(f, 2, 2, text);
        return MarkDistribution::deterministic(detail::parse_count(f[1], text));
    }
    if (f[0] == "geometric") {
        detail::expect_fields(f, 2, 2, text);
        return MarkDistribution::geometric(detail::parse_real(f[1], text));
    }
    if (f[0] == "zeta") {
        detail::expect_fields(f, 2, 3, text);
        const double s = detail::parse_real(f[1], text);
        if (f.size() == 3) {
            const std::uint64_t n_max = detail::parse_count(f[2], text);
            if (n_max == 0) {
                throw ValidationError("zeta truncation n_max must be at least 1");
            }
            return MarkDistribution::zeta(s, n_max);
        }
        return MarkDistribution::zeta(s);
    }
    throw ValidationError("unknown mark distribution '" + std::string(text) + "'");
}

inline TestFunction parse_test_function(std::string_view text) {
    const auto f = detail::split_fields(text);
    auto optional = [&](std::size_t i, double fallback) { return f.size() > i ? detail::parse_real(f[i], text) : fallback; };
    if (f[0] == "zero") {
        detail::expect_fields(f, 1, 1, text);
        return TestFunction::zero();
    }
    if (f[0] == "indicator") {
        detail::expect_fields(f, 2, 3, text);
        return TestFunction::indicator(detail::parse_real(f[1], text), optional(2, 1.0));
    }
    if (f[0] == "gaussian") {
        detail::expect_fields(f, 2, 3, text);
        return TestFunction::gaussian(detail::parse_real(f[1], text), optional(2, 1.0));
    }
    if (f[0] == "poly") {
        detail::expect_fields(f, 2, 3, text);
        return TestFunction::radial_poly(detail::parse_real(f[1], text), optional(2, 1.0));
    }
    if (f[0] == "quadratic") {
        detail::expect_fields(f, 2, 2, text);
        return TestFunction::neg_quadratic(detail::parse_real(f[1], text));
    }
    if (f[0] == "kill") {
        detail::expect_fields(f, 2, 2, text);
        return TestFunction::kill(detail::parse_real(f[1], text));
    }
    throw ValidationError("unknown test function '" + std::string(text) + "'");
}

}  // namespace rze
