// Acceptance suite: every criterion prints one PASS/FAIL line and the
// process exits with the number of failures. An optional list of criterion
// numbers restricts the run (all by default).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "ksynth/denoiser.hpp"
#include "ksynth/evaluation.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/forward_model.hpp"
#include "ksynth/mtf.hpp"
#include "ksynth/phantoms.hpp"
#include "ksynth/rng.hpp"
#include "ksynth/solver.hpp"
#include "oracles.hpp"

using namespace ksynth;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
    int id;
    std::string label;
    bool passed;
    std::string detail;
};

std::vector<Criterion> g_results;

void report(int id, const std::string& label, bool passed, const std::string& detail) {
    std::printf("[%s] %2d. %s — %s\n", passed ? "PASS" : "FAIL", id, label.c_str(), detail.c_str());
    std::fflush(stdout);
    g_results.push_back({id, label, passed, detail});
}

ForwardOperator smooth_kernel_operator(std::size_t n, double dfov) {
    return ForwardOperator(sample_on_grid(KernelMtfProfile::builtin_smooth(), FrequencyGrid(n, dfov)));
}

// ---------------------------------------------------------------- 1
void criterion_dense_oracle() {
    const auto t0 = Clock::now();
    const std::size_t n = 16;
    const double dfov = 10.0;
    const ForwardOperator op = smooth_kernel_operator(n, dfov);
    const std::size_t dim = n * n;

    const auto h = oracles::dense_matrix([&](const Image& e) { return op.apply_h(e); }, n, dfov);
    const auto ht = oracles::transpose(h, dim);

    const Image x = oracles::random_image(n, dfov, 1);
    const Image y = oracles::random_image(n, dfov, 2);
    const Image z = oracles::random_image(n, dfov, 3);

    double worst = 0.0;
    worst = std::max(worst, oracles::rel_l2(op.apply_h(x).pixels(), oracles::mat_vec(h, x.pixels())));
    worst = std::max(worst, oracles::rel_l2(op.apply_h_adjoint(y).pixels(),
                                            oracles::mat_vec(ht, y.pixels())));

    const double lambda = 0.5;
    auto normal = oracles::mat_mul(ht, h, dim);
    for (std::size_t i = 0; i < dim; ++i) normal[i * dim + i] += lambda;
    const auto tik_want = oracles::solve_dense(normal, oracles::mat_vec(ht, y.pixels()));
    worst = std::max(worst, oracles::rel_l2(op.tikhonov_init(y, lambda).pixels(), tik_want));

    auto rhs = oracles::mat_vec(ht, y.pixels());
    for (std::size_t i = 0; i < dim; ++i) rhs[i] += lambda * z.pixels()[i];
    const auto dc_want = oracles::solve_dense(normal, rhs);
    worst = std::max(worst, oracles::rel_l2(op.dc_step(y, z, lambda).pixels(), dc_want));

    const double elapsed = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "max relative L2 %.3e (tol 1e-10), %.2f s (tol 5 s)",
                  worst, elapsed);
    report(1, "dense-oracle equivalence of H, H^T, Tikhonov, DC at N=16", worst < 1e-10 && elapsed < 5.0,
           detail);
}

// ---------------------------------------------------------------- 2
void criterion_direct_synthesis() {
    const std::size_t n = 256;
    // the eps = 0 inversion is well-posed only while the input MTF stays
    // above ~1e-3 on every sampled grid; pick the kernel pair so that holds
    // out to the DFOV 5 cm corner frequency
    const auto smooth = KernelMtfProfile::smooth_gaussian(15.0, 2.0);
    const auto sharp = KernelMtfProfile::sharp_boosted(25.0, 2.0, 0.25, 10.0);
    double worst = 0.0;
    double min_input_mtf = 1e300;
    for (double dfov : {5.0, 10.0, 15.0, 20.0}) {
        const FrequencyGrid grid(n, dfov);
        min_input_mtf = std::min(min_input_mtf, sample_on_grid(smooth, grid).min_value());
        const Image gt = shepp_logan(n, dfov);
        const Image y = ForwardOperator(sample_on_grid(smooth, grid)).apply_h(gt);
        const Image want = ForwardOperator(sample_on_grid(sharp, grid)).apply_h(gt);
        const Image got = direct_ratio_synthesis(y, ratio_filter(smooth, sharp, grid, 0.0));
        worst = std::max(worst, oracles::rel_l2(got, want));
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "max relative L2 %.3e over DFOV {5,10,15,20} (tol 1e-6), min input MTF %.2e",
                  worst, min_input_mtf);
    report(2, "exact direct MTF-ratio synthesis at N=256", worst < 1e-6 && min_input_mtf > 1e-3,
           detail);
}

// ---------------------------------------------------------------- 3
void criterion_lambda_schedule() {
    const std::size_t n = 32;
    const ForwardOperator op = smooth_kernel_operator(n, 10.0);
    const Image y = oracles::random_image(n, 10.0, 4);
    const DenoiserParams identity = DenoiserParams::zeros({16, 16});
    UnrollConfig cfg;  // defaults: K=5, lambda0=0.5, decay=0.9
    std::vector<double> recorded;
    synthesize(y, op, identity, cfg, &recorded);

    const double expected[] = {0.5, 0.45, 0.405, 0.3645, 0.32805};
    bool ok = recorded.size() == 5;
    double rec = 0.5;
    double worst = 0.0;
    for (std::size_t k = 0; ok && k < 5; ++k) {
        ok = ok && recorded[k] == rec;  // bitwise match of the decayed recursion
        worst = std::max(worst, std::abs(recorded[k] - expected[k]) / expected[k]);
        rec *= 0.9;
    }
    ok = ok && worst < 1e-15;
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "recorded [0.5, 0.45, 0.405, 0.3645, 0.32805], max dev %.2e (tol 1e-15)", worst);
    report(3, "lambda schedule 0.5 * 0.9^k over five unrolls", ok, detail);
}

// ---------------------------------------------------------------- 4
void criterion_spectral_recursion() {
    const std::size_t n = 64;
    const double dfov = 10.0;
    const ForwardOperator op = smooth_kernel_operator(n, dfov);
    const Image y = op.apply_h(shepp_logan(n, dfov));
    const DenoiserParams identity = DenoiserParams::zeros({16, 16});
    UnrollConfig cfg;  // K = 5
    auto [out, tape] = synthesize_with_tape(y, op, identity, cfg);

    const Spectrum yspec = fft2(y);
    const auto& lam = op.transfer().values;
    std::vector<std::complex<double>> xspec(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        xspec[i] = lam[i] * yspec.bins[i] / (lam[i] * lam[i] + cfg.lambda0);
    double worst = 0.0;
    double lk = cfg.lambda0;
    for (int k = 0; k < cfg.unrolls; ++k) {
        for (std::size_t i = 0; i < n * n; ++i)
            xspec[i] = (lam[i] * yspec.bins[i] + lk * xspec[i]) / (lam[i] * lam[i] + lk);
        Spectrum s(n);
        s.bins = xspec;
        worst = std::max(worst,
                         oracles::rel_l2(tape.iterates[static_cast<std::size_t>(k) + 1], ifft2(s, dfov)));
        lk *= cfg.decay;
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail), "max per-unroll relative L2 %.3e (tol 1e-10)", worst);
    report(4, "per-unroll spectral recursion, identity denoiser, K=5 at N=64", worst < 1e-10, detail);
}

// ---------------------------------------------------------------- 5
void criterion_gradients() {
    const std::size_t n = 8;
    const double h = 1e-5;
    bool ok = true;
    double worst_pipeline = 0.0, worst_loss = 0.0;

    // full K=2 pipeline vs central differences
    const ForwardOperator op = smooth_kernel_operator(n, 10.0);
    const Image y = oracles::random_image(n, 10.0, 7, 0.2, 1.2);
    const Image target = oracles::random_image(n, 10.0, 8, 0.2, 1.2);
    UnrollConfig cfg;
    cfg.unrolls = 2;
    DenoiserParams params = DenoiserParams::init({6, 6}, 10);
    for (auto& layer : params.layers())
        for (auto& w : layer.w) w += 0.01;

    auto [pred, tape] = synthesize_with_tape(y, op, params, cfg);
    const LossResult lr = loss(pred, target, 0.0);
    const auto grads = backprop_unrolls(tape, op, params, lr.grad).to_flat();
    auto loss_of = [&](const DenoiserParams& theta) {
        return loss(synthesize(y, op, theta, cfg), target, 0.0).value;
    };
    const auto flat = params.to_flat();
    Rng pick(13);
    int checked = 0, attempts = 0;
    while (checked < 30 && ++attempts < 3000) {
        const std::size_t i = pick.next_u64() % flat.size();
        if (std::abs(grads[i]) < 1e-10) continue;
        DenoiserParams theta = params;
        auto mod = flat;
        mod[i] = flat[i] + h;
        theta.from_flat(mod);
        const double up = loss_of(theta);
        mod[i] = flat[i] - h;
        theta.from_flat(mod);
        const double down = loss_of(theta);
        const double numeric = (up - down) / (2.0 * h);
        worst_pipeline = std::max(
            worst_pipeline, std::abs(grads[i] - numeric) / std::max(std::abs(numeric), 1e-8));
        ++checked;
    }
    ok = ok && checked == 30 && worst_pipeline < 1e-3;

    // SSIM + MSE loss gradient at N=16
    const std::size_t m = 16;
    const Image p16 = oracles::random_image(m, 10.0, 20, 0.0, 1.0);
    const Image t16 = oracles::random_image(m, 10.0, 21, 0.0, 1.0);
    const LossResult full = loss(p16, t16, 0.1);
    Image pvar = p16;
    Rng pick2(22);
    for (int t = 0; t < 30; ++t) {
        const std::size_t i = pick2.next_u64() % (m * m);
        const double base = pvar.pixels()[i];
        pvar.pixels()[i] = base + 1e-6;
        const double up = loss(pvar, t16, 0.1).value;
        pvar.pixels()[i] = base - 1e-6;
        const double down = loss(pvar, t16, 0.1).value;
        pvar.pixels()[i] = base;
        const double numeric = (up - down) / 2e-6;
        worst_loss = std::max(worst_loss, std::abs(full.grad.pixels()[i] - numeric) /
                                              std::max(std::abs(numeric), 1e-8));
    }
    ok = ok && worst_loss < 1e-4;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "pipeline max rel err %.3e (tol 1e-3), loss grad max rel err %.3e (tol 1e-4)",
                  worst_pipeline, worst_loss);
    report(5, "gradient integrity: unrolled pipeline and MSE+SSIM loss", ok, detail);
}

// ---------------------------------------------------------------- 6
void criterion_mtf_estimation() {
    const std::size_t n = 256;
    const auto prof = KernelMtfProfile::smooth_gaussian(2.0, 2.0);
    bool ok = true;
    double worst_clean = 0.0, worst_noisy = 0.0;
    for (double dfov : {5.0, 10.0, 20.0}) {
        const FrequencyGrid grid(n, dfov);
        const double nyq = grid.nyquist_lp_per_cm();
        const ForwardOperator op(sample_on_grid(prof, grid));
        const Image clean = op.apply_h(wire_phantom(n, dfov, 1.0));

        const MtfCurve curve = estimate_mtf(clean, 64, MtfWindow::None);
        const MtfCurve ref = curve_from_profile(prof, dfov, nyq, 512, "reference");
        worst_clean = std::max(worst_clean, mtf_fidelity(curve, ref, 0.0, 0.8 * nyq));

        const double sigma = clean.max() / 100.0;  // SNR 40 dB against the peak
        std::vector<double> mean_mtf;
        std::vector<double> freqs;
        for (int s = 0; s < 10; ++s) {
            Image noisy = clean;
            const Image noise = shaped_noise(
                grid, NoiseModel{sigma, KernelMtfProfile::builtin_smooth(), 1.0},
                4000 + static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(dfov * 100));
            for (std::size_t i = 0; i < noisy.pixels().size(); ++i)
                noisy.pixels()[i] += noise.pixels()[i];
            const MtfCurve c = estimate_mtf(noisy, 64, MtfWindow::Hann);
            if (mean_mtf.empty()) {
                mean_mtf.assign(c.mtf.size(), 0.0);
                freqs = c.freq_lp_per_cm;
            }
            for (std::size_t k = 0; k < c.mtf.size(); ++k) mean_mtf[k] += c.mtf[k] / 10.0;
        }
        MtfCurve mean_curve;
        mean_curve.freq_lp_per_cm = freqs;
        mean_curve.mtf = mean_mtf;
        worst_noisy = std::max(worst_noisy, mtf_fidelity(mean_curve, ref, 0.0, 0.6 * nyq));
    }
    ok = worst_clean < 0.02 && worst_noisy < 0.05;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "noiseless RMSE %.4f (tol 0.02), noisy RMSE %.4f (tol 0.05), DFOV {5,10,20}",
                  worst_clean, worst_noisy);
    report(6, "wire-phantom MTF estimation against the applied profile", ok, detail);
}

// ---------------------------------------------------------------- 7
double autocorr_fwhm_px(std::size_t n, double dfov, const NoiseModel& model, int seeds,
                        std::uint64_t seed0) {
    const FrequencyGrid grid(n, dfov);
    std::vector<double> mean_power(n * n, 0.0);
    for (int s = 0; s < seeds; ++s) {
        const Image noise = shaped_noise(grid, model, seed0 + static_cast<std::uint64_t>(s));
        const Spectrum spec = fft2(noise);
        for (std::size_t i = 0; i < n * n; ++i) mean_power[i] += std::norm(spec.bins[i]);
    }
    Spectrum power(n);
    for (std::size_t i = 0; i < n * n; ++i) power.bins[i] = mean_power[i] / seeds;
    const Image acf = ifft2(power, dfov);
    const double peak = acf.at(0, 0);
    for (std::size_t j = 1; j < n / 2; ++j) {
        const double cur = acf.at(0, j) / peak;
        if (cur < 0.5) {
            const double prev = acf.at(0, j - 1) / peak;
            return 2.0 * (static_cast<double>(j - 1) + (prev - 0.5) / (prev - cur));
        }
    }
    return static_cast<double>(n);
}

void criterion_noise_texture_law() {
    const std::size_t n = 256;
    const NoiseModel model{1.0, KernelMtfProfile::smooth_gaussian(2.0, 2.0), 1.0};
    double fwhm_cm[3];
    double fwhm_px[3];
    const double dfovs[3] = {5.0, 10.0, 20.0};
    for (int d = 0; d < 3; ++d) {
        fwhm_px[d] = autocorr_fwhm_px(n, dfovs[d], model, 100,
                                      7000 + static_cast<std::uint64_t>(d) * 1000);
        fwhm_cm[d] = fwhm_px[d] * dfovs[d] / static_cast<double>(n);
    }
    double lo = fwhm_cm[0], hi = fwhm_cm[0];
    for (double v : fwhm_cm) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double spread = (hi - lo) / lo;
    const bool ok = spread < 0.10 && fwhm_px[2] < fwhm_px[1] && fwhm_px[1] < fwhm_px[0];
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "FWHM %.4f/%.4f/%.4f cm at DFOV 5/10/20, spread %.1f%% (tol 10%%)", fwhm_cm[0],
                  fwhm_cm[1], fwhm_cm[2], spread * 100.0);
    report(7, "speckle autocorrelation width in cm is DFOV-invariant", ok, detail);
}

// ---------------------------------------------------------------- 8 & 9 share data helpers
// Noisy input slice against the clean target slice: the supervision that
// makes the noise-control comparison meaningful at desk scale.
std::vector<TrainingPair> build_pairs(std::size_t n, const std::vector<double>& dfovs,
                                      std::size_t count, double sigma, std::uint64_t seed0) {
    const auto smooth = KernelMtfProfile::builtin_smooth();
    const auto sharp = KernelMtfProfile::builtin_sharp();
    std::vector<TrainingPair> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double dfov = dfovs[i % dfovs.size()];
        Rng rot_rng(seed0 + i, 7);
        const Image gt = shepp_logan_variant(n, dfov, rot_rng.uniform(0.0, 360.0), 1.0);
        TrainingPair noisy =
            make_training_pair(gt, smooth, sharp, NoiseModel{sigma, smooth, 1.0}, seed0 + i);
        TrainingPair clean =
            make_training_pair(gt, smooth, sharp, NoiseModel{0.0, smooth, 1.0}, seed0 + i);
        pairs.push_back({std::move(noisy.input), std::move(clean.target)});
    }
    return pairs;
}

void criterion_desk_training() {
    const auto t0 = Clock::now();
    const std::size_t n = 64;
    const double sigma = 0.03;
    const std::vector<double> dfovs = {5.0, 10.0, 15.0, 20.0};
    const auto smooth = KernelMtfProfile::builtin_smooth();
    const auto sharp = KernelMtfProfile::builtin_sharp();

    const std::vector<TrainingPair> train_pairs = build_pairs(n, dfovs, 200, sigma, 10000);
    const auto factory = make_operator_factory(smooth, sharp, 1e-4);

    TrainConfig tcfg;
    tcfg.epochs = 30;
    tcfg.learning_rate = 1e-3;
    tcfg.batch_size = 10;
    tcfg.w_ssim = 0.1;
    UnrollConfig ucfg;  // K = 5 defaults
    const TrainResult result = train(train_pairs, factory, tcfg, ucfg, 42);

    const double initial_loss = result.log.front().mean_loss;
    const double final_loss = result.log.back().mean_loss;

    // 40 held-out noisy pairs: trained pipeline vs the direct ratio baseline
    const std::vector<TrainingPair> test_pairs = build_pairs(n, dfovs, 40, sigma, 20000);
    double modl_mse = 0.0, direct_mse = 0.0;
    for (const auto& pair : test_pairs) {
        const double dfov = pair.input.dfov_cm();
        const FrequencyGrid grid(n, dfov);
        const ForwardOperator op = make_forward_operator(smooth, sharp, grid, 1e-4);
        const Image modl = synthesize(pair.input, op, result.params, ucfg);
        const Image direct =
            direct_ratio_synthesis(pair.input, ratio_filter(smooth, sharp, grid, 1e-4));
        modl_mse += image_metrics(modl, pair.target).mse / test_pairs.size();
        direct_mse += image_metrics(direct, pair.target).mse / test_pairs.size();
    }
    const double elapsed = seconds_since(t0);
    const bool ok = final_loss < 0.5 * initial_loss && modl_mse <= direct_mse && elapsed < 1800.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "loss %.5f -> %.5f (need < 0.5x), test MSE modl %.6f vs direct %.6f, %.0f s "
                  "(tol 1800 s)",
                  initial_loss, final_loss, modl_mse, direct_mse, elapsed);
    report(8, "desk-scale training: 200 pairs, 30 epochs, noise-control win", ok, detail);
}

// ---------------------------------------------------------------- 9
void criterion_dfov_robustness() {
    const std::size_t n = 64;
    const double sigma = 0.03;
    const std::vector<double> train_dfovs = {10.0, 15.0, 20.0};
    const auto smooth = KernelMtfProfile::builtin_smooth();
    const auto sharp = KernelMtfProfile::builtin_sharp();
    const auto factory = make_operator_factory(smooth, sharp, 1e-4);
    const std::vector<TrainingPair> pairs = build_pairs(n, train_dfovs, 120, sigma, 30000);

    TrainConfig tcfg;
    tcfg.epochs = 20;
    tcfg.learning_rate = 1e-3;
    tcfg.batch_size = 10;
    tcfg.w_ssim = 0.1;
    UnrollConfig ucfg;

    TrainConfig direct_cfg = tcfg;
    direct_cfg.mode = TrainMode::DirectLearning;

    const TrainResult modl = train(pairs, factory, tcfg, ucfg, 77);
    const TrainResult dl = train(pairs, factory, direct_cfg, ucfg, 77);

    // held-out DFOV 5 cm wire phantoms, five noise seeds; same matrix size
    // as training, so the band probes frequencies the modes could learn
    const std::size_t wire_n = 64;
    const double dfov = 5.0;
    const FrequencyGrid grid(wire_n, dfov);
    const double nyq = grid.nyquist_lp_per_cm();
    const ForwardOperator op = make_forward_operator(smooth, sharp, grid, 1e-4);
    // the scanner would hand us the smooth-kernel wire image; a perfect
    // synthesis turns its MTF into the sharp profile. The wire is a
    // high-contrast object, so its response dominates any border artifacts
    // of the networks.
    const Image clean_wire =
        ForwardOperator(sample_on_grid(smooth, grid)).apply_h(wire_phantom(wire_n, dfov, 5.0));
    const MtfCurve target_curve = curve_from_profile(sharp, dfov, nyq, 512, "target");
    const double sigma_wire = clean_wire.max() / 100.0;

    int modl_wins = 0;
    double sum_modl = 0.0, sum_dl = 0.0;
    for (int s = 0; s < 5; ++s) {
        Image noisy = clean_wire;
        const Image noise =
            shaped_noise(grid, NoiseModel{sigma_wire, smooth, 1.0}, 40000 + s);
        for (std::size_t i = 0; i < noisy.pixels().size(); ++i)
            noisy.pixels()[i] += noise.pixels()[i];

        const Image modl_out = synthesize(noisy, op, modl.params, ucfg);
        const Image dl_out = denoise_forward(dl.params, noisy);
        const double modl_fid =
            mtf_fidelity(estimate_mtf(modl_out, 16, MtfWindow::Hann), target_curve, 0.0, 0.8 * nyq);
        const double dl_fid =
            mtf_fidelity(estimate_mtf(dl_out, 16, MtfWindow::Hann), target_curve, 0.0, 0.8 * nyq);
        sum_modl += modl_fid / 5.0;
        sum_dl += dl_fid / 5.0;
        if (modl_fid <= dl_fid) ++modl_wins;
    }
    const bool ok = modl_wins >= 4;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "model-based fidelity wins %d/5 seeds (need >= 4); mean %.4f vs %.4f", modl_wins,
                  sum_modl, sum_dl);
    report(9, "held-out DFOV 5 cm: model-based beats direct learning", ok, detail);
}

// ---------------------------------------------------------------- 10
void criterion_performance() {
    const std::size_t n = 512;
    const double dfov = 10.0;
    const auto smooth = KernelMtfProfile::builtin_smooth();
    const auto sharp = KernelMtfProfile::builtin_sharp();
    const FrequencyGrid grid(n, dfov);
    const ForwardOperator op = make_forward_operator(smooth, sharp, grid, 1e-4);
    const DenoiserParams params = DenoiserParams::init({16, 16}, 5);
    const Image gt = shepp_logan(n, dfov);
    const Image y = ForwardOperator(sample_on_grid(smooth, grid)).apply_h(gt);
    UnrollConfig cfg;  // K = 5

    synthesize(y, op, params, cfg);  // warm-up
    const auto t0 = Clock::now();
    const Image out = synthesize(y, op, params, cfg);
    const double elapsed = seconds_since(t0);
    char detail[120];
    std::snprintf(detail, sizeof(detail), "512x512, K=5: %.3f s (tol 1 s), output mean %.4f",
                  elapsed, out.mean());
    report(10, "single 512x512 synthesis under one second", elapsed < 1.0, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    auto enabled = [&](int id) { return wanted.empty() || wanted.count(id) > 0; };

    if (enabled(1)) criterion_dense_oracle();
    if (enabled(2)) criterion_direct_synthesis();
    if (enabled(3)) criterion_lambda_schedule();
    if (enabled(4)) criterion_spectral_recursion();
    if (enabled(5)) criterion_gradients();
    if (enabled(6)) criterion_mtf_estimation();
    if (enabled(7)) criterion_noise_texture_law();
    if (enabled(8)) criterion_desk_training();
    if (enabled(9)) criterion_dfov_robustness();
    if (enabled(10)) criterion_performance();

    int failures = 0;
    for (const auto& r : g_results)
        if (!r.passed) ++failures;
    std::printf("%zu criteria run, %d failed\n", g_results.size(), failures);
    return failures;
}
