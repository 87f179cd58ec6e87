// Samples Poisson zeros in the disk of radius 50, builds the genus-2 product,
// prints a few values on |z| <= 5 and checks the zeros by contour counts.

#include <cstdio>

#include "rze/rze.hpp"

int main() {
    using namespace rze;

    const auto intensity = IntensityMeasure::lebesgue(1.0);
    const auto gamma = sample_poisson(intensity, Window::disk(50.0), 2024);
    std::printf("sampled %zu zeros\n", gamma.size());

    const ProductEvaluator ev(gamma, Genus{2}, 5.0, CertificateRequest{intensity, 0.95});
    for (const cplx z : {cplx{0.0, 0.0}, cplx{1.0, 0.5}, cplx{-3.0, 2.0}}) {
        const ScaledComplex v = ev.eval_product(z);
        std::printf("log|Pi(%g%+gi)| = %.6f  arg = %.6f\n", z.real(), z.imag(), v.log_abs(), v.phase());
    }
    std::printf("tail bound: E = %.4g, at 95%% confidence %.4g\n", ev.tail()->expected_tail,
                ev.tail()->bound_at_confidence);

    const ZeroReport report = verify_zero_set(ev);
    std::printf("zero check: %s (%zu contours, bulk %lld/%llu)\n", report.passed ? "passed" : "FAILED",
                report.points.size(), static_cast<long long>(report.bulk.counted),
                static_cast<unsigned long long>(report.bulk.expected));
    return report.passed ? 0 : 1;
}
