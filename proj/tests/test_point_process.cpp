#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rze/descriptors.hpp"
#include "rze/point_process.hpp"

using rze::cplx;
using rze::IntensityMeasure;
using rze::Window;

TEST(Window, Validation) {
    EXPECT_THROW(Window::disk(0.0), rze::ValidationError);
    EXPECT_THROW(Window::disk(-1.0), rze::ValidationError);
    EXPECT_THROW(Window::annulus(2.0, 1.0), rze::ValidationError);
    EXPECT_THROW(Window::annulus(-1.0, 1.0), rze::ValidationError);
    EXPECT_NEAR(Window::annulus(1.0, 2.0).area(), 3.0 * std::numbers::pi, 1e-14);
    EXPECT_TRUE(Window::disk(1.0).contains(cplx{1.0, 0.0}));
    EXPECT_FALSE(Window::disk(1.0).contains(cplx{1.0, 1e-7}));
    EXPECT_EQ(Window::annulus(1, 3).description(), "annulus:1:3");
}

TEST(Intensity, Validation) {
    EXPECT_THROW(IntensityMeasure::lebesgue(0.0), rze::ValidationError);
    EXPECT_THROW(IntensityMeasure::lebesgue(-2.0), rze::ValidationError);
    EXPECT_THROW(IntensityMeasure::radial_exponential(0.0), rze::ValidationError);
    EXPECT_THROW(rze::parse_intensity("poisson:1"), rze::ValidationError);
    EXPECT_THROW(rze::parse_intensity("lebesgue:abc"), rze::ValidationError);
    EXPECT_EQ(rze::parse_intensity("radial:exp:2").description(), "radial:exp:2:1");
}

TEST(Intensity, TotalMassAgainstIndependentQuadrature) {
    const Window w = Window::annulus(0.5, 4.0);
    EXPECT_NEAR(rze::total_mass(IntensityMeasure::lebesgue(2.0), w), 2.0 * w.area(), 1e-12);
    const auto exp_int = IntensityMeasure::radial_exponential(1.5, 3.0);
    const double want = oracle::simpson([](double r) { return 2.0 * std::numbers::pi * r * 3.0 * std::exp(-r / 1.5); },
                                        0.5, 4.0, 1e-13);
    EXPECT_LE(std::abs(rze::total_mass(exp_int, w) - want), 1e-10 * want);
}

TEST(Sample, EmptyWhenMassIsSmall) {
    // mass pi * 1e-8: practically always empty
    const auto c = rze::sample_poisson(IntensityMeasure::lebesgue(1e-8), Window::disk(1.0), 1);
    EXPECT_TRUE(c.empty());
}

TEST(Sample, DeterministicInSeed) {
    const auto a = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(5.0), 42);
    const auto b = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(5.0), 42);
    const auto c = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(5.0), 43);
    EXPECT_EQ(a.points(), b.points());
    EXPECT_NE(a.points(), c.points());
    EXPECT_EQ(a.seed(), 42u);
}

TEST(Sample, PointsInsideWindowSortedAndDistinct) {
    const Window w = Window::annulus(1.0, 3.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = rze::sample_poisson(IntensityMeasure::lebesgue(4.0), w, seed);
        std::set<std::pair<double, double>> seen;
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_TRUE(w.contains(c.points()[i]));
            EXPECT_NE(c.points()[i], cplx{});
            if (i > 0) {
                EXPECT_LE(std::abs(c.points()[i - 1]), std::abs(c.points()[i]));
            }
            seen.insert({c.points()[i].real(), c.points()[i].imag()});
        }
        EXPECT_EQ(seen.size(), c.size());
    }
}

TEST(Sample, CountMeanAndVarianceArePoisson) {
    // Lebesgue intensity 1 on the disk of radius 5: mean = var = 25 pi.
    const double mass = 25.0 * std::numbers::pi;
    const int trials = 4000;
    double sum = 0.0;
    double sq = 0.0;
    double radius_sq = 0.0;
    double points = 0.0;
    for (int s = 0; s < trials; ++s) {
        const auto c = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(5.0), 1000 + s);
        const double n = static_cast<double>(c.size());
        sum += n;
        sq += n * n;
        for (const cplx& x : c.points()) {
            radius_sq += std::norm(x);
        }
        points += n;
    }
    const double mean = sum / trials;
    const double var = sq / trials - mean * mean;
    EXPECT_NEAR(mean, mass, 4.0 * std::sqrt(mass / trials));
    EXPECT_NEAR(var / mass, 1.0, 0.1);
    // |x|^2 is uniform on [0, 25]: mean 12.5, sd 25/sqrt(12).
    EXPECT_NEAR(radius_sq / points, 12.5, 4.0 * 25.0 / std::sqrt(12.0 * points));
}

TEST(Sample, RadialIntensityFollowsDensity) {
    const auto intensity = IntensityMeasure::radial_exponential(1.0, 2.0);
    const Window w = Window::disk(6.0);
    const double mass = rze::total_mass(intensity, w);
    const double inner = rze::radial_integral(intensity, 0.0, 1.0, [](double) { return 1.0; });
    double n_total = 0.0;
    double n_inner = 0.0;
    const int trials = 2000;
    for (int s = 0; s < trials; ++s) {
        const auto c = rze::sample_poisson(intensity, w, 77 + s);
        n_total += static_cast<double>(c.size());
        n_inner += static_cast<double>(std::count_if(c.points().begin(), c.points().end(),
                                                     [](cplx x) { return std::abs(x) <= 1.0; }));
    }
    EXPECT_NEAR(n_total / trials, mass, 4.0 * std::sqrt(mass / trials));
    EXPECT_NEAR(n_inner / trials, inner, 4.0 * std::sqrt(inner / trials));
}

TEST(Configuration, RejectsBadPoints) {
    const Window w = Window::disk(1.0);
    EXPECT_THROW(rze::Configuration({cplx{2.0, 0.0}}, w, 0), rze::ValidationError);
    EXPECT_THROW(rze::Configuration({cplx{}}, w, 0), rze::ValidationError);
    // Repeated points are how multiplicities are written out unmarked.
    EXPECT_EQ(rze::Configuration({cplx{0.5, 0.0}, cplx{0.5, 0.0}}, w, 0).size(), 2u);
    EXPECT_THROW(rze::Configuration({cplx{std::nan(""), 0.0}}, w, 0), rze::ValidationError);
}

TEST(Extension, KeepsOriginalPoints) {
    const auto lambda = IntensityMeasure::lebesgue(1.0);
    const auto base = rze::sample_poisson(lambda, Window::disk(3.0), 5);
    const auto big = rze::extend_window(base, lambda, 6.0);
    EXPECT_EQ(big.window().outer_radius(), 6.0);
    const auto [inside, outside] = rze::split(big, 3.0);
    EXPECT_EQ(inside.points(), base.points());
    for (const cplx& x : outside.points()) {
        EXPECT_GT(std::abs(x), 3.0);
    }
    EXPECT_EQ(rze::extend_window(base, lambda, 6.0).points(), big.points());
    EXPECT_THROW(rze::extend_window(base, lambda, 3.0), rze::ValidationError);
}

TEST(Extension, AddedMassMatchesAnnulus) {
    const auto lambda = IntensityMeasure::lebesgue(1.0);
    double added = 0.0;
    const int trials = 1000;
    for (int s = 0; s < trials; ++s) {
        const auto base = rze::sample_poisson(lambda, Window::disk(2.0), s);
        added += static_cast<double>(rze::extend_window(base, lambda, 3.0).size() - base.size());
    }
    const double mass = 5.0 * std::numbers::pi;
    EXPECT_NEAR(added / trials, mass, 4.0 * std::sqrt(mass / trials));
}

TEST(Split, BoundaryCases) {
    const auto c = rze::sample_poisson(IntensityMeasure::lebesgue(1.0), Window::disk(4.0), 9);
    const auto [in_all, out_none] = rze::split(c, 4.0);
    EXPECT_EQ(in_all.size(), c.size());
    EXPECT_TRUE(out_none.empty());
    EXPECT_THROW(rze::split(c, 0.0), rze::ValidationError);
    EXPECT_THROW(rze::split(c, 5.0), rze::ValidationError);
    const auto [a, b] = rze::split(c, 2.0);
    EXPECT_EQ(a.size() + b.size(), c.size());
}

TEST(Marks, DistributionsAndMeans) {
    EXPECT_EQ(rze::MarkDistribution::deterministic(3).mean(), 3.0);
    EXPECT_EQ(rze::MarkDistribution::geometric(0.25).mean(), 4.0);
    EXPECT_THROW(rze::MarkDistribution::geometric(0.0), rze::ValidationError);
    EXPECT_THROW(rze::MarkDistribution::deterministic(0), rze::ValidationError);
    EXPECT_THROW(rze::MarkDistribution::zeta(2.0), rze::ValidationError);
    EXPECT_THROW(rze::MarkDistribution::zeta(1.5), rze::ValidationError);
    EXPECT_NO_THROW(rze::MarkDistribution::zeta(1.5, 100));
    // zeta(2)/zeta(3)
    EXPECT_NEAR(rze::MarkDistribution::zeta(3.0).mean(), 1.3684327776202058, 1e-13);
    EXPECT_THROW(rze::parse_marks("zeta:3:0"), rze::ValidationError);
}

TEST(Marks, EmpiricalMeans) {
    const std::vector<rze::MarkDistribution> laws{rze::MarkDistribution::geometric(0.5),
                                                  rze::MarkDistribution::zeta(4.0),
                                                  rze::MarkDistribution::zeta(1.5, 50)};
    for (const auto& law : laws) {
        rze::Rng rng(123);
        const int n = 200000;
        double sum = 0.0;
        double sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = static_cast<double>(law.sample(rng));
            ASSERT_GE(m, 1.0);
            sum += m;
            sq += m * m;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sq / n - mean * mean);
        EXPECT_NEAR(mean, law.mean(), 5.0 * sd / std::sqrt(n)) << law.description();
    }
}

TEST(Marks, MarkedSampleSharesGround) {
    const auto lambda = IntensityMeasure::lebesgue(1.0);
    const Window w = Window::disk(4.0);
    const auto marked = rze::sample_marked(lambda, rze::MarkDistribution::geometric(0.5), w, 31);
    EXPECT_EQ(marked.ground().points(), rze::sample_poisson(lambda, w, 31).points());
    std::size_t total = 0;
    for (const auto& e : marked.entries()) {
        total += e.multiplicity;
    }
    EXPECT_EQ(marked.replicated().size(), total);
    const auto det = rze::sample_marked(lambda, rze::MarkDistribution::deterministic(1), w, 31);
    EXPECT_EQ(det.replicated().points(), det.ground().points());
}
