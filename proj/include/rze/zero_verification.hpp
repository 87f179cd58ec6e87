#pragma once

/**
 * @file zero_verification.hpp
 * @brief Argument-principle zero counts for constructed products.
 *
 * The winding number of Pi_p along a circle is accumulated from principal
 * phase increments arg(Pi(z_{k+1}) / Pi(z_k)) between consecutive nodes. The
 * node count is doubled until every increment is below pi/2, which keeps each
 * increment on the correct branch; the increments then sum to 2 pi times an
 * integer up to rounding.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rze/compensated_sum.hpp"
#include "rze/detail/format.hpp"
#include "rze/error.hpp"
#include "rze/parallel.hpp"
#include "rze/weierstrass_product.hpp"

namespace rze {

struct ContourSpec {
    cplx center;
    double radius = 0.0;
    std::size_t quadrature_nodes = 512;
    /// No zero may lie within guard_fraction * radius of the circle.
    double guard_fraction = 0.1;
};

struct WindingResult {
    std::int64_t count = 0;
    double residual = 0.0;  // |winding - count| in turns
    std::size_t nodes = 0;  // node count after refinement
};

inline constexpr std::size_t kMaxContourNodes = std::size_t{1} << 16;

namespace detail {

inline std::string point_string(cplx z) { return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")"; }

inline void check_contour(const ProductEvaluator& ev, const ContourSpec& c) {
    if (!(c.radius > 0.0) || !std::isfinite(c.radius) || c.quadrature_nodes < 4 || !(c.guard_fraction >= 0.0)) {
        throw ValidationError("contour needs a positive radius, at least 4 nodes and a non-negative guard");
    }
    const double guard = c.guard_fraction * c.radius;
    if (std::abs(c.center) + c.radius + guard > ev.eval_radius() * (1.0 + 1e-12)) {
        throw ValidationError("contour around " + point_string(c.center) + " with radius " + format_double(c.radius) +
                              " leaves the certified disk |z| <= " + format_double(ev.eval_radius()));
    }
    for (const auto& zero : ev.zeros()) {
        if (std::abs(std::abs(zero.point - c.center) - c.radius) < guard) {
            throw ValidationError("zero " + point_string(zero.point) + " lies within " + format_double(guard) +
                                  " of the contour around " + point_string(c.center));
        }
    }
}

}  // namespace detail

/// Winding number of Pi_p around the contour, with refinement diagnostics.
inline WindingResult winding_count_detailed(const ProductEvaluator& ev, const ContourSpec& contour) {
    detail::check_contour(ev, contour);
    std::size_t n = contour.quadrature_nodes;
    auto node = [&](std::size_t k, std::size_t count) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        return contour.center + std::polar(contour.radius, theta);
    };
    auto value = [&](cplx z) {
        const ScaledComplex v = ev.eval_product(z);
        if (v.is_zero()) {
            throw InconclusiveError("contour node " + detail::point_string(z) + " hits a zero of the product");
        }
        return v.phase();
    };
    // Phases rather than values: plain mantissas near e^700 overflow when multiplied.
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = value(node(k, n));
    }
    for (;;) {
        double max_step = 0.0;
        CompensatedSum total;
        for (std::size_t k = 0; k < n; ++k) {
            const double step = std::remainder(values[(k + 1) % n] - values[k], 2.0 * std::numbers::pi);
            max_step = std::max(max_step, std::abs(step));
            total += step;
        }
        if (max_step < 0.5 * std::numbers::pi) {
            const double turns = total.value() / (2.0 * std::numbers::pi);
            const double rounded = std::round(turns);
            const double residual = std::abs(turns - rounded);
            if (!(residual < 0.1)) {
                throw InconclusiveError("winding residual " + detail::format_double(residual) + " around " +
                                        detail::point_string(contour.center));
            }
            return WindingResult{static_cast<std::int64_t>(rounded), residual, n};
        }
        if (2 * n > kMaxContourNodes) {
            throw InconclusiveError("phase increments around " + detail::point_string(contour.center) +
                                    " still exceed pi/2 at " + std::to_string(n) + " nodes");
        }
        // Doubling keeps the old nodes at even indices.
        std::vector<double> refined(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            refined[2 * k] = values[k];
            refined[2 * k + 1] = value(node(2 * k + 1, 2 * n));
        }
        values = std::move(refined);
        n *= 2;
    }
}

inline std::int64_t winding_count(const ProductEvaluator& ev, const ContourSpec& contour) {
    return winding_count_detailed(ev, contour).count;
}

// ---------------------------------------------------------------------------
// Zero-set verification
// ---------------------------------------------------------------------------

struct IsolationPolicy {
    double neighbor_fraction = 0.25;   // r <= neighbor_fraction * nearest-neighbour distance
    double radius_fraction = 0.05;     // r <= radius_fraction * R
    double joint_threshold = 1e-10;    // r below joint_threshold * R: verify with the neighbour jointly
    double guard_fraction = 0.1;       // per-point contour crossing guard
    std::size_t quadrature_nodes = 512;
    double bulk_start_fraction = 0.95;  // first bulk radius R' / R
    double bulk_guard_fraction = 1e-3;  // bulk contour keeps zeros 1e-3 R away
    double bulk_step_fraction = 1e-3;   // nudge step for R'
    int bulk_max_steps = 100;
};

struct PointRecord {
    std::vector<cplx> points;  // one entry, or several for a joint contour
    cplx center;
    std::uint64_t expected = 0;
    std::int64_t counted = 0;
    double radius = 0.0;
    double residual = 0.0;
    std::size_t nodes = 0;

    bool passed() const noexcept { return counted >= 0 && static_cast<std::uint64_t>(counted) == expected; }
};

struct BulkRecord {
    double radius = 0.0;
    std::uint64_t expected = 0;
    std::int64_t counted = 0;
    double residual = 0.0;
    std::size_t nodes = 0;

    bool passed() const noexcept { return counted >= 0 && static_cast<std::uint64_t>(counted) == expected; }
};

struct ZeroReport {
    std::vector<PointRecord> points;
    BulkRecord bulk;
    bool passed = false;
};

namespace detail {

// Indices of claimed points grouped into contours. Points whose isolation
// radius would drop below the joint threshold are merged with their nearest
// claimed neighbour (union-find).
inline std::vector<std::vector<std::size_t>> group_claims(std::span<const MarkedPoint> claims, double joint_distance) {
    const std::size_t n = claims.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(claims[i].point - claims[j].point) < joint_distance) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (slot[root] == n) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

}  // namespace detail

/// Checks that Pi_p vanishes at each claimed point in B_R with the claimed
/// multiplicity, and that a bulk contour |z| = R' < R encloses exactly the
/// claimed total. Pass `ev.zeros()` as the claims to self-verify.
inline ZeroReport verify_zero_set(const ProductEvaluator& ev, std::span<const MarkedPoint> claimed,
                                  const IsolationPolicy& policy = {}, unsigned threads = 1) {
    const double big_r = ev.eval_radius();
    std::vector<MarkedPoint> claims;
    for (const auto& c : claimed) {
        if (std::abs(c.point) <= big_r) {
            claims.push_back(c);
        }
    }
    const auto zeros = ev.zeros();

    // Claims closer than the joint distance cannot be isolated from each other.
    const double joint_distance = policy.joint_threshold * big_r / policy.neighbor_fraction;
    const auto groups = detail::group_claims(claims, joint_distance);

    ZeroReport report;
    report.points.resize(groups.size());
    parallel_for(groups.size(), threads, [&](std::size_t g) {
        PointRecord& rec = report.points[g];
        CompensatedComplexSum centroid;
        for (std::size_t i : groups[g]) {
            rec.points.push_back(claims[i].point);
            rec.expected += claims[i].multiplicity;
            centroid += claims[i].point;
        }
        rec.center = centroid.value() / static_cast<double>(groups[g].size());
        double extent = 0.0;
        for (const cplx& x : rec.points) {
            extent = std::max(extent, std::abs(x - rec.center));
        }
        // Nearest obstacle: other claims, and actual zeros not sitting on this group.
        const double own = 2.0 * extent;
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < claims.size(); ++j) {
            if (std::find(groups[g].begin(), groups[g].end(), j) == groups[g].end()) {
                nearest = std::min(nearest, std::abs(claims[j].point - rec.center));
            }
        }
        for (const auto& zero : zeros) {
            const double d = std::abs(zero.point - rec.center);
            if (d > own) {
                nearest = std::min(nearest, d);
            }
        }
        double radius = std::min(policy.neighbor_fraction * nearest, policy.radius_fraction * big_r);
        radius = std::min(radius, (big_r - std::abs(rec.center)) / (1.0 + policy.guard_fraction));
        if (!(radius >= policy.joint_threshold * big_r) || !(radius * (1.0 - policy.guard_fraction) > own)) {
            throw InconclusiveError("cannot isolate claimed zero " + detail::point_string(rec.center) +
                                    " with a contour (radius " + detail::format_double(radius) + ")");
        }
        rec.radius = radius;
        const WindingResult w =
            winding_count_detailed(ev, ContourSpec{rec.center, radius, policy.quadrature_nodes, policy.guard_fraction});
        rec.counted = w.count;
        rec.residual = w.residual;
        rec.nodes = w.nodes;
    });

    // Bulk contour: R' nudged around its start until no zero or claim is within the guard band.
    const double guard = policy.bulk_guard_fraction * big_r;
    const double step = policy.bulk_step_fraction * big_r;
    std::optional<double> bulk_radius;
    for (int k = 0; k <= 2 * policy.bulk_max_steps && !bulk_radius; ++k) {
        const int offset = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
        const double candidate = policy.bulk_start_fraction * big_r + offset * step;
        if (!(candidate > guard) || candidate + guard > big_r) {
            continue;
        }
        bool clear = true;
        for (const auto& zero : zeros) {
            if (std::abs(std::abs(zero.point) - candidate) < guard) {
                clear = false;
                break;
            }
        }
        for (const auto& c : claims) {
            if (std::abs(std::abs(c.point) - candidate) < guard) {
                clear = false;
                break;
            }
        }
        if (clear) {
            bulk_radius = candidate;
        }
    }
    if (!bulk_radius) {
        throw InconclusiveError("no bulk contour radius clear of zeros within " + std::to_string(policy.bulk_max_steps) +
                                " steps");
    }
    BulkRecord bulk;
    bulk.radius = *bulk_radius;
    for (const auto& c : claims) {
        if (std::abs(c.point) < bulk.radius) {
            bulk.expected += c.multiplicity;
        }
    }
    const WindingResult w =
        winding_count_detailed(ev, ContourSpec{cplx{}, bulk.radius, policy.quadrature_nodes, guard / bulk.radius});
    bulk.counted = w.count;
    bulk.residual = w.residual;
    bulk.nodes = w.nodes;
    report.bulk = bulk;
    report.passed = bulk.passed() && std::all_of(report.points.begin(), report.points.end(),
                                                 [](const PointRecord& r) { return r.passed(); });
    return report;
}

inline ZeroReport verify_zero_set(const ProductEvaluator& ev, const IsolationPolicy& policy = {}, unsigned threads = 1) {
    return verify_zero_set(ev, ev.zeros(), policy, threads);
}

}  // namespace rze
