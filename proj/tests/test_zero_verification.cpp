#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "rze/zero_verification.hpp"

using rze::cplx;
using rze::ContourSpec;
using rze::Genus;
using rze::IntensityMeasure;
using rze::ProductEvaluator;
using rze::Window;

TEST(Winding, CountsKnownZeros) {
    const rze::MarkedConfiguration c({{cplx{0.5, 0.0}, 1}, {cplx{-0.5, 0.2}, 2}, {cplx{0.0, 1.5}, 1}}, Window::disk(5.0), 0);
    const ProductEvaluator ev(c, Genus{2}, 2.0);
    EXPECT_EQ(rze::winding_count(ev, ContourSpec{{0.5, 0.0}, 0.2}), 1);
    EXPECT_EQ(rze::winding_count(ev, ContourSpec{{-0.5, 0.2}, 0.2}), 2);
    EXPECT_EQ(rze::winding_count(ev, ContourSpec{{}, 1.0}), 3);
    EXPECT_EQ(rze::winding_count(ev, ContourSpec{{}, 1.8}), 4);
    EXPECT_EQ(rze::winding_count(ev, ContourSpec{{1.0, -1.0}, 0.3}), 0);
    const auto d = rze::winding_count_detailed(ev, ContourSpec{{}, 1.0});
    EXPECT_LT(d.residual, 0.1);
    EXPECT_GE(d.nodes, 512u);
}

TEST(Winding, RejectsBadContours) {
    const ProductEvaluator ev(rze::Configuration({cplx{0.5, 0.0}}, Window::disk(5.0), 0), Genus{2}, 2.0);
    // zero within the guard band of the circle
    EXPECT_THROW(rze::winding_count(ev, ContourSpec{{}, 0.51}), rze::ValidationError);
    EXPECT_THROW(rze::winding_count(ev, ContourSpec{{1.5, 0.0}, 0.6}), rze::ValidationError);
    EXPECT_THROW(rze::winding_count(ev, ContourSpec{{}, 0.0}), rze::ValidationError);
}

TEST(Verify, SelfVerificationPasses) {
    const auto config = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(20.0), 11);
    const ProductEvaluator ev(config, Genus{2}, 3.0);
    const auto report = rze::verify_zero_set(ev);
    EXPECT_TRUE(report.passed);
    std::uint64_t inside = 0;
    for (const cplx& x : config.points()) {
        inside += std::abs(x) <= 3.0 ? 1 : 0;
    }
    EXPECT_EQ(report.points.size(), inside);
    EXPECT_EQ(static_cast<std::uint64_t>(report.bulk.counted), report.bulk.expected);
    EXPECT_GT(report.bulk.radius, 0.0);
    EXPECT_LT(report.bulk.radius, 3.0);
}

TEST(Verify, MarkedMultiplicities) {
    const auto marked = rze::sample_marked(IntensityMeasure::lebesgue(1.0), rze::MarkDistribution::geometric(0.5),
                                           Window::disk(15.0), 2);
    const ProductEvaluator ev(marked, Genus{2}, 3.0);
    const auto report = rze::verify_zero_set(ev);
    EXPECT_TRUE(report.passed);
    for (const auto& rec : report.points) {
        ASSERT_EQ(rec.points.size(), 1u);
        EXPECT_EQ(static_cast<std::uint64_t>(rec.counted), rec.expected);
    }
}

TEST(Verify, WrongClaimsFail) {
    const auto config = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(10.0), 5);
    const ProductEvaluator ev(config, Genus{2}, 2.0);
    std::vector<rze::MarkedPoint> claims(ev.zeros().begin(), ev.zeros().end());
    ASSERT_FALSE(claims.empty());

    auto doubled = claims;
    doubled.front().multiplicity = 2;
    EXPECT_FALSE(rze::verify_zero_set(ev, doubled).passed);

    auto missing = claims;
    missing.erase(missing.begin());
    const auto r = rze::verify_zero_set(ev, missing);
    EXPECT_FALSE(r.passed);
    EXPECT_FALSE(r.bulk.passed());

    auto moved = claims;
    moved.front().point += cplx{0.0, 0.01};
    EXPECT_FALSE(rze::verify_zero_set(ev, moved).passed);
}

TEST(Verify, ThreadCountDoesNotChangeReport) {
    const auto config = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(12.0), 8);
    const ProductEvaluator ev(config, Genus{3}, 2.5);
    const auto a = rze::verify_zero_set(ev, {}, 1);
    const auto b = rze::verify_zero_set(ev, {}, 4);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].counted, b.points[i].counted);
        EXPECT_EQ(a.points[i].radius, b.points[i].radius);
        EXPECT_EQ(a.points[i].residual, b.points[i].residual);
    }
    EXPECT_EQ(a.bulk.radius, b.bulk.radius);
}

TEST(Verify, ClusteredClaimsAreJoined) {
    // Two zeros 1e-12 apart cannot be separated by a contour of radius >= 1e-10 R.
    const cplx x{0.4, 0.3};
    const rze::Configuration c({x, x + cplx{1e-12, 0.0}, cplx{-0.6, 0.0}}, Window::disk(4.0), 0);
    const ProductEvaluator ev(c, Genus{2}, 1.0);
    const auto report = rze::verify_zero_set(ev);
    EXPECT_TRUE(report.passed);
    EXPECT_EQ(report.points.size(), 2u);
    bool saw_joint = false;
    for (const auto& rec : report.points) {
        if (rec.points.size() == 2) {
            saw_joint = true;
            EXPECT_EQ(rec.expected, 2u);
            EXPECT_EQ(rec.counted, 2);
        }
    }
    EXPECT_TRUE(saw_joint);
}

TEST(Verify, EmptyDiskHasNoZeros) {
    const ProductEvaluator ev(rze::Configuration({cplx{3.0, 0.0}}, Window::disk(4.0), 0), Genus{2}, 1.0);
    const auto report = rze::verify_zero_set(ev);
    EXPECT_TRUE(report.passed);
    EXPECT_TRUE(report.points.empty());
    EXPECT_EQ(report.bulk.counted, 0);
}
