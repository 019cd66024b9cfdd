#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ksynth/errors.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/forward_model.hpp"
#include "ksynth/phantoms.hpp"
#include "oracles.hpp"

using namespace ksynth;

namespace {

const KernelMtfProfile kFlat = KernelMtfProfile::tabulated({{0.0, 1.0}, {1e6, 1.0}});

ForwardOperator smooth_operator(std::size_t n, double dfov) {
    // strictly positive transfer filter (smooth kernel sampled directly)
    return ForwardOperator(sample_on_grid(KernelMtfProfile::builtin_smooth(), FrequencyGrid(n, dfov)));
}

}  // namespace

TEST_CASE("identity filter is the identity operator") {
    const ForwardOperator op(sample_on_grid(kFlat, FrequencyGrid(32, 10.0)));
    const Image x = oracles::random_image(32, 10.0, 3);
    CHECK(oracles::rel_l2(op.apply_h(x), x) < 1e-13);
}

TEST_CASE("constant images pass through at DC gain 1") {
    const ForwardOperator op = smooth_operator(32, 10.0);
    Image c(32, 10.0);
    for (auto& p : c.pixels()) p = 3.25;
    const Image out = op.apply_h(c);
    for (double v : out.pixels()) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("size and dfov mismatches are rejected") {
    const ForwardOperator op = smooth_operator(32, 10.0);
    CHECK_THROWS_AS(op.apply_h(Image(16, 10.0)), SizeMismatch);
    CHECK_THROWS_AS(op.apply_h(Image(32, 12.0)), DfovMismatch);
}

TEST_CASE("apply_h matches a dense operator built from unit impulses") {
    const std::size_t n = 16;
    const ForwardOperator op = smooth_operator(n, 10.0);
    const auto dense =
        oracles::dense_matrix([&](const Image& e) { return op.apply_h(e); }, n, 10.0);
    const Image x = oracles::random_image(n, 10.0, 17);
    const std::vector<double> want = oracles::mat_vec(dense, x.pixels());
    CHECK(oracles::rel_l2(op.apply_h(x).pixels(), want) < 1e-10);
}

TEST_CASE("apply_h matches H = F^H diag(Lambda) F built from the naive DFT") {
    // fully independent route: brute-force DFT, diagonal multiply, brute-force
    // inverse via conjugation
    const std::size_t n = 8;
    const TransferFilter filter =
        sample_on_grid(KernelMtfProfile::builtin_smooth(), FrequencyGrid(n, 10.0));
    const ForwardOperator op{TransferFilter(filter)};
    const Image x = oracles::random_image(n, 10.0, 23);
    Spectrum spec = oracles::naive_dft2(x);
    for (std::size_t i = 0; i < n * n; ++i) spec.bins[i] *= filter.values[i];
    // inverse DFT of a conjugate-symmetric spectrum, direct summation
    Image want(n, 10.0);
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t xpix = 0; xpix < n; ++xpix) {
            std::complex<double> acc = 0.0;
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t v = 0; v < n; ++v) {
                    const double phase = 2.0 * M_PI *
                                         (static_cast<double>(u * y) + static_cast<double>(v * xpix)) /
                                         static_cast<double>(n);
                    acc += spec.bins[u * n + v] * std::complex<double>(std::cos(phase), std::sin(phase));
                }
            want.at(y, xpix) = acc.real() / static_cast<double>(n);
        }
    }
    CHECK(oracles::rel_l2(op.apply_h(x), want) < 1e-11);
}

TEST_CASE("adjoint: <Hx, y> == <x, H^T y> and shared code path") {
    const std::size_t n = 32;
    const ForwardOperator op = smooth_operator(n, 10.0);
    const Image x = oracles::random_image(n, 10.0, 5);
    const Image y = oracles::random_image(n, 10.0, 6);
    const double lhs = oracles::dot(op.apply_h(x).pixels(), y.pixels());
    const double rhs = oracles::dot(x.pixels(), op.apply_h_adjoint(y).pixels());
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));

    const Image a = op.apply_h(y);
    const Image b = op.apply_h_adjoint(y);
    for (std::size_t i = 0; i < a.pixels().size(); ++i) CHECK(a.pixels()[i] == b.pixels()[i]);
}

TEST_CASE("operator is linear") {
    const ForwardOperator op = smooth_operator(16, 10.0);
    const Image x = oracles::random_image(16, 10.0, 8);
    const Image w = oracles::random_image(16, 10.0, 9);
    Image combo(16, 10.0);
    for (std::size_t i = 0; i < combo.pixels().size(); ++i)
        combo.pixels()[i] = 2.0 * x.pixels()[i] - 0.5 * w.pixels()[i];
    const Image lhs = op.apply_h(combo);
    const Image hx = op.apply_h(x), hw = op.apply_h(w);
    Image rhs(16, 10.0);
    for (std::size_t i = 0; i < rhs.pixels().size(); ++i)
        rhs.pixels()[i] = 2.0 * hx.pixels()[i] - 0.5 * hw.pixels()[i];
    CHECK(oracles::rel_l2(lhs, rhs) < 1e-12);
}

TEST_CASE("tikhonov_init closed forms and dense oracle") {
    const std::size_t n = 16;
    const ForwardOperator op = smooth_operator(n, 10.0);
    const Image x = oracles::random_image(n, 10.0, 10);

    // exact deconvolution at lambda = 0 (filter strictly positive)
    const Image recovered = op.tikhonov_init(op.apply_h(x), 0.0);
    CHECK(oracles::rel_l2(recovered, x) < 1e-8);

    // identity filter: scalar closed form y / (1 + lambda)
    const ForwardOperator unit(sample_on_grid(kFlat, FrequencyGrid(n, 10.0)));
    const Image scaled = unit.tikhonov_init(x, 0.5);
    for (std::size_t i = 0; i < scaled.pixels().size(); ++i)
        CHECK(scaled.pixels()[i] == doctest::Approx(x.pixels()[i] / 1.5).epsilon(1e-12));

    // dense linear-algebra oracle: (H^T H + lambda I) x = H^T y
    const double lambda = 0.37;
    const auto h = oracles::dense_matrix([&](const Image& e) { return op.apply_h(e); }, n, 10.0);
    const auto ht = oracles::transpose(h, n * n);
    auto normal = oracles::mat_mul(ht, h, n * n);
    for (std::size_t i = 0; i < n * n; ++i) normal[i * n * n + i] += lambda;
    const Image y = oracles::random_image(n, 10.0, 11);
    const auto want = oracles::solve_dense(normal, oracles::mat_vec(ht, y.pixels()));
    CHECK(oracles::rel_l2(op.tikhonov_init(y, lambda).pixels(), want) < 1e-10);
}

TEST_CASE("tikhonov_init refuses a singular system") {
    const auto vanishing = KernelMtfProfile::tabulated({{0.0, 1.0}, {1.0, 0.0}, {1e6, 0.0}});
    const ForwardOperator op(sample_on_grid(vanishing, FrequencyGrid(32, 10.0)));
    CHECK_THROWS_AS(op.tikhonov_init(Image(32, 10.0), 0.0), SingularSystem);
    CHECK_NOTHROW(op.tikhonov_init(Image(32, 10.0), 0.5));
}

TEST_CASE("dc_step closed forms, dense oracle, optimality") {
    const std::size_t n = 16;
    const Image y = oracles::random_image(n, 10.0, 12);
    const Image z = oracles::random_image(n, 10.0, 13);

    // identity filter: (y + lambda z) / (1 + lambda)
    const ForwardOperator unit(sample_on_grid(kFlat, FrequencyGrid(n, 10.0)));
    const Image blend = unit.dc_step(y, z, 0.25);
    for (std::size_t i = 0; i < blend.pixels().size(); ++i)
        CHECK(blend.pixels()[i] ==
              doctest::Approx((y.pixels()[i] + 0.25 * z.pixels()[i]) / 1.25).epsilon(1e-11));

    // huge lambda pins the output to z
    const ForwardOperator op = smooth_operator(n, 10.0);
    const Image pinned = op.dc_step(y, z, 1e8);
    CHECK(oracles::rel_l2(pinned, z) < 1e-7);

    // dense oracle: (H^T H + lambda I) x = H^T y + lambda z
    const double lambda = 0.42;
    const auto h = oracles::dense_matrix([&](const Image& e) { return op.apply_h(e); }, n, 10.0);
    const auto ht = oracles::transpose(h, n * n);
    auto normal = oracles::mat_mul(ht, h, n * n);
    for (std::size_t i = 0; i < n * n; ++i) normal[i * n * n + i] += lambda;
    auto rhs = oracles::mat_vec(ht, y.pixels());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += lambda * z.pixels()[i];
    const auto want = oracles::solve_dense(normal, rhs);
    const Image got = op.dc_step(y, z, lambda);
    CHECK(oracles::rel_l2(got.pixels(), want) < 1e-10);

    // objective optimality under random perturbations
    const std::size_t n2 = 32;
    const ForwardOperator op2 = smooth_operator(n2, 10.0);
    const Image y2 = oracles::random_image(n2, 10.0, 14);
    const Image z2 = oracles::random_image(n2, 10.0, 15);
    const Image xstar = op2.dc_step(y2, z2, lambda);
    auto objective = [&](const Image& x) {
        const Image hx = op2.apply_h(x);
        double val = 0.0;
        for (std::size_t i = 0; i < x.pixels().size(); ++i) {
            const double r = y2.pixels()[i] - hx.pixels()[i];
            const double d = x.pixels()[i] - z2.pixels()[i];
            val += r * r + lambda * d * d;
        }
        return val;
    };
    const double at_star = objective(xstar);
    for (int trial = 0; trial < 100; ++trial) {
        const Image delta = oracles::random_image(n2, 10.0, 100 + trial, -1e-2, 1e-2);
        Image perturbed = xstar;
        for (std::size_t i = 0; i < perturbed.pixels().size(); ++i)
            perturbed.pixels()[i] += delta.pixels()[i];
        CHECK(objective(perturbed) >= at_star);
    }
}

TEST_CASE("dc_step is jointly linear in (y, z)") {
    const std::size_t n = 16;
    const ForwardOperator op = smooth_operator(n, 10.0);
    const double lambda = 0.5;
    const Image y1 = oracles::random_image(n, 10.0, 20), y2 = oracles::random_image(n, 10.0, 21);
    const Image z1 = oracles::random_image(n, 10.0, 22), z2 = oracles::random_image(n, 10.0, 23);
    Image ysum(n, 10.0), zsum(n, 10.0);
    for (std::size_t i = 0; i < n * n; ++i) {
        ysum.pixels()[i] = 1.5 * y1.pixels()[i] - 0.75 * y2.pixels()[i];
        zsum.pixels()[i] = 1.5 * z1.pixels()[i] - 0.75 * z2.pixels()[i];
    }
    const Image lhs = op.dc_step(ysum, zsum, lambda);
    const Image a = op.dc_step(y1, z1, lambda), b = op.dc_step(y2, z2, lambda);
    Image rhs(n, 10.0);
    for (std::size_t i = 0; i < n * n; ++i)
        rhs.pixels()[i] = 1.5 * a.pixels()[i] - 0.75 * b.pixels()[i];
    CHECK(oracles::rel_l2(lhs, rhs) < 1e-10);
}

TEST_CASE("dc_step fixed point is idempotent") {
    const std::size_t n = 32;
    const ForwardOperator op = smooth_operator(n, 10.0);
    const Image y = oracles::random_image(n, 10.0, 30);
    const Image fixed_point = op.tikhonov_init(y, 0.0);  // x* with H x* = y
    const Image once = op.dc_step(y, fixed_point, 0.6);
    CHECK(oracles::rel_l2(once, fixed_point) < 1e-9);
    const Image twice = op.dc_step(y, once, 0.6);
    CHECK(oracles::rel_l2(twice, once) < 1e-9);
}

TEST_CASE("dc_step_grad_z closed form and adjoint identity") {
    const std::size_t n = 16;
    const Image u = oracles::random_image(n, 10.0, 40);

    const ForwardOperator unit(sample_on_grid(kFlat, FrequencyGrid(n, 10.0)));
    const Image g = unit.dc_step_grad_z(u, 0.5);
    for (std::size_t i = 0; i < g.pixels().size(); ++i)
        CHECK(g.pixels()[i] == doctest::Approx(u.pixels()[i] * 0.5 / 1.5).epsilon(1e-11));

    // lambda = 0 kills the z path entirely
    const ForwardOperator op = smooth_operator(n, 10.0);
    const Image zero = op.dc_step_grad_z(u, 0.0);
    for (double v : zero.pixels()) CHECK(std::abs(v) < 1e-15);

    // <dc(y, z) - dc(y, 0), w> == <z, grad_z(w)>
    const double lambda = 0.45;
    const Image y = oracles::random_image(n, 10.0, 41);
    const Image z = oracles::random_image(n, 10.0, 42);
    const Image w = oracles::random_image(n, 10.0, 43);
    const Image with_z = op.dc_step(y, z, lambda);
    const Image without_z = op.dc_step(y, Image(n, 10.0), lambda);
    double lhs = 0.0;
    for (std::size_t i = 0; i < n * n; ++i)
        lhs += (with_z.pixels()[i] - without_z.pixels()[i]) * w.pixels()[i];
    const double rhs = oracles::dot(z.pixels(), op.dc_step_grad_z(w, lambda).pixels());
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
}

TEST_CASE("direct ratio synthesis recovers the sharp image from the smooth one") {
    const std::size_t n = 64;
    const double dfov = 10.0;
    const auto smooth = KernelMtfProfile::builtin_smooth();
    const auto sharp = KernelMtfProfile::builtin_sharp();
    const FrequencyGrid grid(n, dfov);
    const Image gt = shepp_logan(n, dfov);
    const Image y_smooth = ForwardOperator(sample_on_grid(smooth, grid)).apply_h(gt);
    const Image x_sharp = ForwardOperator(sample_on_grid(sharp, grid)).apply_h(gt);
    const Image converted = direct_ratio_synthesis(y_smooth, ratio_filter(smooth, sharp, grid, 0.0));
    CHECK(oracles::rel_l2(converted, x_sharp) < 1e-8);

    // ratio == 1 leaves the image unchanged
    const Image same = direct_ratio_synthesis(y_smooth, ratio_filter(smooth, smooth, grid, 0.0));
    CHECK(oracles::rel_l2(same, y_smooth) < 1e-12);
}

TEST_CASE("boosting ratio amplifies white noise") {
    const std::size_t n = 64;
    const FrequencyGrid grid(n, 10.0);
    const TransferFilter boost =
        ratio_filter(KernelMtfProfile::builtin_smooth(), KernelMtfProfile::builtin_sharp(), grid, 1e-4);
    double var_in = 0.0, var_out = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(900 + seed);
        Image noise(n, 10.0);
        for (auto& p : noise.pixels()) p = rng.gaussian();
        const Image out = direct_ratio_synthesis(noise, boost);
        for (std::size_t i = 0; i < n * n; ++i) {
            var_in += noise.pixels()[i] * noise.pixels()[i];
            var_out += out.pixels()[i] * out.pixels()[i];
        }
    }
    CHECK(var_out > var_in);
}

TEST_CASE("make_forward_operator maps target-kernel images to input-kernel images") {
    const std::size_t n = 32;
    const double dfov = 10.0;
    const auto smooth = KernelMtfProfile::builtin_smooth();
    const auto sharp = KernelMtfProfile::builtin_sharp();
    const FrequencyGrid grid(n, dfov);
    const ForwardOperator op = make_forward_operator(smooth, sharp, grid, 0.0);
    const Image gt = shepp_logan(n, dfov);
    const Image x_sharp = ForwardOperator(sample_on_grid(sharp, grid)).apply_h(gt);
    const Image y_smooth = ForwardOperator(sample_on_grid(smooth, grid)).apply_h(gt);
    CHECK(oracles::rel_l2(op.apply_h(x_sharp), y_smooth) < 1e-8);
}
