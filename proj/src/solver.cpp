#include "ksynth/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>

#include "ksynth/errors.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/rng.hpp"

namespace ksynth {

void UnrollConfig::validate() const {
    if (unrolls < 0) throw ValidationError("UnrollConfig: unrolls must be >= 0");
    if (!(lambda0 > 0.0)) throw ValidationError("UnrollConfig: lambda0 must be > 0");
    if (!(decay > 0.0) || decay > 1.0) throw ValidationError("UnrollConfig: decay must be in (0, 1]");
}

void TrainConfig::validate() const {
    if (epochs < 0) throw ValidationError("TrainConfig: epochs must be >= 0");
    if (!(learning_rate >= 0.0)) throw ValidationError("TrainConfig: learning_rate must be >= 0");
    if (batch_size < 1) throw ValidationError("TrainConfig: batch_size must be >= 1");
    if (w_ssim < 0.0) throw ValidationError("TrainConfig: w_ssim must be >= 0");
    if (!(lambda_epoch_decay > 0.0) || lambda_epoch_decay > 1.0)
        throw ValidationError("TrainConfig: lambda_epoch_decay must be in (0, 1]");
}

std::vector<double> lambda_schedule(const UnrollConfig& cfg) {
    cfg.validate();
    std::vector<double> lambdas(static_cast<std::size_t>(cfg.unrolls));
    double lam = cfg.lambda0;
    for (auto& l : lambdas) {
        l = lam;
        lam *= cfg.decay;
    }
    return lambdas;
}

Image synthesize(const Image& y, const ForwardOperator& op, const DenoiserParams& params,
                 const UnrollConfig& cfg, std::vector<double>* lambda_log) {
    cfg.validate();
    if (y.size() != op.grid().size()) throw SizeMismatch("synthesize: image/operator size mismatch");
    if (y.dfov_cm() != op.grid().dfov_cm())
        throw DfovMismatch("synthesize: image/operator dfov mismatch");
    const Spectrum y_spec = fft2(y);  // shared across the initializer and all unrolls
    Image x = cfg.init == InitMode::Tikhonov ? op.tikhonov_init(y_spec, cfg.lambda0) : y;
    if (lambda_log) lambda_log->clear();
    double lam = cfg.lambda0;
    for (int k = 0; k < cfg.unrolls; ++k) {
        const Image z = denoise_forward(params, x);
        x = op.dc_step(y_spec, z, lam);
        if (lambda_log) lambda_log->push_back(lam);
        lam *= cfg.decay;
    }
    return x;
}

std::pair<Image, UnrollTape> synthesize_with_tape(const Image& y, const ForwardOperator& op,
                                                  const DenoiserParams& params,
                                                  const UnrollConfig& cfg) {
    cfg.validate();
    if (y.size() != op.grid().size()) throw SizeMismatch("synthesize: image/operator size mismatch");
    if (y.dfov_cm() != op.grid().dfov_cm())
        throw DfovMismatch("synthesize: image/operator dfov mismatch");
    UnrollTape tape;
    const Spectrum y_spec = fft2(y);
    Image x = cfg.init == InitMode::Tikhonov ? op.tikhonov_init(y_spec, cfg.lambda0) : y;
    tape.iterates.push_back(x);
    double lam = cfg.lambda0;
    for (int k = 0; k < cfg.unrolls; ++k) {
        ActivationRecord rec;
        const Image z = denoise_forward(params, x, &rec);
        x = op.dc_step(y_spec, z, lam);
        tape.records.push_back(std::move(rec));
        tape.lambdas.push_back(lam);
        tape.iterates.push_back(x);
        lam *= cfg.decay;
    }
    return {x, std::move(tape)};
}

DenoiserParams backprop_unrolls(const UnrollTape& tape, const ForwardOperator& op,
                                const DenoiserParams& params, const Image& loss_grad,
                                DcGradientMode dc_mode) {
    const std::size_t k_unrolls = tape.records.size();
    if (tape.lambdas.size() != k_unrolls)
        throw TapeMismatch("backprop_unrolls: malformed tape");
    DenoiserParams grads = DenoiserParams::zeros_like(params);
    Image g_x = loss_grad;
    for (std::size_t k = k_unrolls; k-- > 0;) {
        const Image g_z = dc_mode == DcGradientMode::Exact
                              ? op.dc_step_grad_z(g_x, tape.lambdas[k])
                              : g_x;
        Image g_x_next(g_x.size(), g_x.dfov_cm());
        const DenoiserParams g_p = denoise_backward(params, tape.records[k], g_z, &g_x_next);
        for (std::size_t l = 0; l < grads.layers().size(); ++l) {
            auto& dst = grads.layers()[l];
            const auto& src = g_p.layers()[l];
            for (std::size_t i = 0; i < dst.w.size(); ++i) dst.w[i] += src.w[i];
            for (std::size_t i = 0; i < dst.b.size(); ++i) dst.b[i] += src.b[i];
        }
        g_x = g_x_next;
    }
    return grads;  // gradient into x_0 is discarded: the initializer has no parameters
}

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kWindowSigma = 1.5;

const std::vector<double>& gaussian_window() {
    static const std::vector<double> w = [] {
        std::vector<double> g(kWindow * kWindow);
        const double c = (kWindow - 1) / 2.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < kWindow; ++i) {
            for (std::size_t j = 0; j < kWindow; ++j) {
                const double dy = static_cast<double>(i) - c;
                const double dx = static_cast<double>(j) - c;
                g[i * kWindow + j] = std::exp(-(dx * dx + dy * dy) / (2.0 * kWindowSigma * kWindowSigma));
                sum += g[i * kWindow + j];
            }
        }
        for (auto& v : g) v /= sum;
        return g;
    }();
    return w;
}

struct SsimAccum {
    double mean = 0.0;
    bool with_grad = false;
    std::vector<double> grad;  // d mean-SSIM / d a
};

SsimAccum ssim_impl(const Image& a, const Image& b, double dynamic_range, bool with_grad) {
    if (a.size() != b.size()) throw SizeMismatch("ssim: image sizes differ");
    if (!(dynamic_range > 0.0)) throw ValidationError("ssim: dynamic range must be > 0");
    const std::size_t n = a.size();
    if (n < kWindow)
        throw SizeMismatch("ssim: image side must be >= 11 for the 11x11 window");
    const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
    const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
    const auto& g = gaussian_window();
    const std::size_t valid = n - kWindow + 1;
    const double window_count = static_cast<double>(valid * valid);

    SsimAccum acc;
    acc.with_grad = with_grad;
    if (with_grad) acc.grad.assign(n * n, 0.0);
    const auto* pa = a.pixels().data();
    const auto* pb = b.pixels().data();

    double total = 0.0;
    for (std::size_t wy = 0; wy < valid; ++wy) {
        for (std::size_t wx = 0; wx < valid; ++wx) {
            double mu_a = 0.0, mu_b = 0.0, ea2 = 0.0, eb2 = 0.0, eab = 0.0;
            for (std::size_t i = 0; i < kWindow; ++i) {
                const double* ra = pa + (wy + i) * n + wx;
                const double* rb = pb + (wy + i) * n + wx;
                const double* rg = g.data() + i * kWindow;
                for (std::size_t j = 0; j < kWindow; ++j) {
                    const double va = ra[j], vb = rb[j], vg = rg[j];
                    mu_a += vg * va;
                    mu_b += vg * vb;
                    ea2 += vg * va * va;
                    eb2 += vg * vb * vb;
                    eab += vg * va * vb;
                }
            }
            const double sa2 = ea2 - mu_a * mu_a;
            const double sb2 = eb2 - mu_b * mu_b;
            const double sab = eab - mu_a * mu_b;
            const double a1 = 2.0 * mu_a * mu_b + c1;
            const double b1 = mu_a * mu_a + mu_b * mu_b + c1;
            const double a2 = 2.0 * sab + c2;
            const double b2 = sa2 + sb2 + c2;
            const double s = (a1 * a2) / (b1 * b2);
            total += s;
            if (with_grad) {
                const double ds_da1 = a2 / (b1 * b2);
                const double ds_db1 = -s / b1;
                const double ds_da2 = a1 / (b1 * b2);
                const double ds_db2 = -s / b2;
                const double dmu = ds_da1 * 2.0 * mu_b + ds_db1 * 2.0 * mu_a;
                const double dsa2 = ds_db2;
                const double dsab = ds_da2 * 2.0;
                for (std::size_t i = 0; i < kWindow; ++i) {
                    const double* ra = pa + (wy + i) * n + wx;
                    const double* rb = pb + (wy + i) * n + wx;
                    const double* rg = g.data() + i * kWindow;
                    double* rgrad = acc.grad.data() + (wy + i) * n + wx;
                    for (std::size_t j = 0; j < kWindow; ++j) {
                        const double vg = rg[j];
                        rgrad[j] += vg * (dmu + dsa2 * 2.0 * (ra[j] - mu_a) + dsab * (rb[j] - mu_b)) /
                                    window_count;
                    }
                }
            }
        }
    }
    acc.mean = total / window_count;
    return acc;
}

}  // namespace

double ssim(const Image& a, const Image& b, double dynamic_range) {
    return ssim_impl(a, b, dynamic_range, false).mean;
}

double ssim(const Image& a, const Image& b) {
    double range = b.max() - b.min();
    if (!(range > 0.0)) range = 1.0;
    return ssim(a, b, range);
}

LossResult loss(const Image& pred, const Image& target, double w_ssim) {
    if (pred.size() != target.size()) throw SizeMismatch("loss: image sizes differ");
    if (w_ssim < 0.0) throw ValidationError("loss: w_ssim must be >= 0");
    const std::size_t n = pred.size();
    const double inv_count = 1.0 / static_cast<double>(n * n);

    LossResult result{0.0, 0.0, std::numeric_limits<double>::quiet_NaN(), Image(n, pred.dfov_cm())};
    double mse = 0.0;
    auto& grad = result.grad.pixels();
    for (std::size_t i = 0; i < n * n; ++i) {
        const double d = pred.pixels()[i] - target.pixels()[i];
        mse += d * d * inv_count;
        grad[i] = 2.0 * d * inv_count;
    }
    result.mse = mse;
    result.value = mse;

    const bool want_ssim = w_ssim > 0.0 || n >= kWindow;
    if (want_ssim) {
        double range = target.max() - target.min();
        if (!(range > 0.0)) range = 1.0;
        const SsimAccum s = ssim_impl(pred, target, range, w_ssim > 0.0);
        result.ssim = s.mean;
        if (w_ssim > 0.0) {
            result.value += w_ssim * (1.0 - s.mean);
            for (std::size_t i = 0; i < n * n; ++i) grad[i] -= w_ssim * s.grad[i];
        }
    }
    return result;
}

OperatorFactory make_operator_factory(const KernelMtfProfile& input_kernel,
                                      const KernelMtfProfile& target_kernel, double eps) {
    return [=](std::size_t n, double dfov_cm) {
        return make_forward_operator(input_kernel, target_kernel, FrequencyGrid(n, dfov_cm), eps);
    };
}

namespace {

struct SampleResult {
    DenoiserParams grads;
    double loss = 0.0, mse = 0.0, ssim = 0.0;
};

struct AdamState {
    std::vector<double> m, v;
    long t = 0;
};

void adam_step(std::vector<double>& theta, const std::vector<double>& g, AdamState& state,
               const TrainConfig& cfg) {
    ++state.t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        theta[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
    }
}

}  // namespace

TrainResult train(const std::vector<TrainingPair>& pairs, const OperatorFactory& op_factory,
                  const TrainConfig& tcfg, const UnrollConfig& ucfg, std::uint64_t seed,
                  std::optional<DenoiserParams> initial,
                  const std::function<void(const EpochStats&, const DenoiserParams&)>& on_epoch) {
    tcfg.validate();
    ucfg.validate();
    if (pairs.empty()) throw EmptyDataset("train: dataset is empty");

    DenoiserParams params =
        initial ? std::move(*initial) : DenoiserParams::init(tcfg.hidden_widths, seed);
    params.check_valid();
    const int first_epoch = params.epochs_trained;

    // per-(n, dfov) operator cache, ModelBased only
    std::map<std::pair<std::size_t, double>, ForwardOperator> op_cache;
    auto operator_for = [&](const Image& img) -> const ForwardOperator& {
        const auto key = std::make_pair(img.size(), img.dfov_cm());
        auto it = op_cache.find(key);
        if (it == op_cache.end())
            it = op_cache.emplace(key, op_factory(img.size(), img.dfov_cm())).first;
        return it->second;
    };
    if (tcfg.mode == TrainMode::ModelBased)
        for (const auto& p : pairs) operator_for(p.input);

    std::vector<double> theta = params.to_flat();
    AdamState adam{std::vector<double>(theta.size(), 0.0), std::vector<double>(theta.size(), 0.0), 0};

    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    TrainResult result{params, {}};
    for (int e = 0; e < tcfg.epochs; ++e) {
        UnrollConfig epoch_ucfg = ucfg;
        if (tcfg.lambda_epoch_decay < 1.0)
            epoch_ucfg.lambda0 =
                ucfg.lambda0 * std::pow(tcfg.lambda_epoch_decay, first_epoch + e);
        Rng shuffle_rng(seed, 0x5A5A5A5AULL + static_cast<std::uint64_t>(first_epoch + e));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_u64() % i]);

        double sum_loss = 0.0, sum_mse = 0.0, sum_ssim = 0.0;
        std::size_t ssim_count = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(tcfg.batch_size)) {
            const std::size_t batch_n =
                std::min<std::size_t>(static_cast<std::size_t>(tcfg.batch_size), order.size() - start);
            std::vector<SampleResult> results(batch_n);

            params.from_flat(theta);
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(batch_n); ++bi) {
                const auto& pair = pairs[order[start + static_cast<std::size_t>(bi)]];
                SampleResult& sr = results[static_cast<std::size_t>(bi)];
                if (tcfg.mode == TrainMode::ModelBased) {
                    const ForwardOperator& op = operator_for(pair.input);
                    auto [pred, tape] = synthesize_with_tape(pair.input, op, params, epoch_ucfg);
                    const LossResult lr = loss(pred, pair.target, tcfg.w_ssim);
                    sr.grads = backprop_unrolls(tape, op, params, lr.grad, tcfg.dc_gradient);
                    sr.loss = lr.value;
                    sr.mse = lr.mse;
                    sr.ssim = lr.ssim;
                } else {
                    ActivationRecord rec;
                    const Image pred = denoise_forward(params, pair.input, &rec);
                    const LossResult lr = loss(pred, pair.target, tcfg.w_ssim);
                    sr.grads = denoise_backward(params, rec, lr.grad);
                    sr.loss = lr.value;
                    sr.mse = lr.mse;
                    sr.ssim = lr.ssim;
                }
            }

            // fixed-order reduction keeps training bitwise reproducible
            std::vector<double> grad(theta.size(), 0.0);
            for (const auto& sr : results) {
                const std::vector<double> flat = sr.grads.to_flat();
                for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += flat[i];
                sum_loss += sr.loss;
                sum_mse += sr.mse;
                if (std::isfinite(sr.ssim)) {
                    sum_ssim += sr.ssim;
                    ++ssim_count;
                }
                if (!std::isfinite(sr.loss))
                    throw Divergence("train: non-finite loss at epoch " +
                                     std::to_string(first_epoch + e));
            }
            const double inv_b = 1.0 / static_cast<double>(batch_n);
            for (auto& gv : grad) gv *= inv_b;
            adam_step(theta, grad, adam, tcfg);
        }

        params.from_flat(theta);
        params.epochs_trained = first_epoch + e + 1;
        EpochStats stats{first_epoch + e, sum_loss / static_cast<double>(pairs.size()),
                         sum_mse / static_cast<double>(pairs.size()),
                         ssim_count ? sum_ssim / static_cast<double>(ssim_count)
                                    : std::numeric_limits<double>::quiet_NaN()};
        result.log.push_back(stats);
        if (on_epoch) on_epoch(stats, params);
    }
    params.from_flat(theta);
    params.epochs_trained = first_epoch + tcfg.epochs;
    result.params = std::move(params);
    return result;
}

std::vector<TrainingPair> load_dataset(const DatasetManifest& manifest,
                                       const std::string& manifest_dir) {
    namespace fs = std::filesystem;
    std::vector<TrainingPair> pairs;
    pairs.reserve(manifest.pairs.size());
    for (const auto& p : manifest.pairs) {
        auto resolve = [&](const std::string& path) {
            fs::path fp(path);
            if (fp.is_absolute() || manifest_dir.empty()) return fp.string();
            return (fs::path(manifest_dir) / fp).string();
        };
        pairs.push_back({load_ksim(resolve(p.input_path)), load_ksim(resolve(p.target_path))});
    }
    return pairs;
}

}  // namespace ksynth
