#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ksynth/denoiser.hpp"
#include "ksynth/forward_model.hpp"
#include "ksynth/image.hpp"
#include "ksynth/phantoms.hpp"

namespace ksynth {

enum class InitMode { Tikhonov, InputCopy };

/// K unrolls of z_k = CNN(x_k); x_{k+1} = dc_step(y, z_k, lambda_k) with
/// lambda_{k+1} = decay * lambda_k, initialized from the Tikhonov solution.
struct UnrollConfig {
    int unrolls = 5;
    double lambda0 = 0.5;
    double decay = 0.9;
    InitMode init = InitMode::Tikhonov;

    void validate() const;
};

// [lambda0, lambda0*decay, ...] of length cfg.unrolls, by repeated
// multiplication (matches what the solver applies).
std::vector<double> lambda_schedule(const UnrollConfig& cfg);

enum class TrainMode { ModelBased, DirectLearning };
enum class DcGradientMode { Exact, PassThrough };

struct TrainConfig {
    int epochs = 30;
    double learning_rate = 1e-4;
    int batch_size = 8;
    double w_ssim = 0.1;
    // adaptive-moment update: m = b1*m + (1-b1)*g; v = b2*v + (1-b2)*g^2;
    // theta -= lr * mhat / (sqrt(vhat) + eps) with bias-corrected mhat, vhat
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    TrainMode mode = TrainMode::ModelBased;
    DcGradientMode dc_gradient = DcGradientMode::Exact;
    std::vector<std::size_t> hidden_widths = {16, 16};
    // alternative reading of the lambda decay: keep lambda fixed inside each
    // forward pass and shrink lambda0 by this factor once per epoch instead
    // (1.0 leaves the per-unroll schedule in charge)
    double lambda_epoch_decay = 1.0;

    void validate() const;
};

struct UnrollTape {
    std::vector<double> lambdas;            // lambda_k per unroll
    std::vector<ActivationRecord> records;  // denoiser tape per unroll
    std::vector<Image> iterates;            // x_0 .. x_K
};

Image synthesize(const Image& y, const ForwardOperator& op, const DenoiserParams& params,
                 const UnrollConfig& cfg, std::vector<double>* lambda_log = nullptr);

std::pair<Image, UnrollTape> synthesize_with_tape(const Image& y, const ForwardOperator& op,
                                                  const DenoiserParams& params,
                                                  const UnrollConfig& cfg);

// Reverse sweep through the unrolls; weight sharing sums the per-unroll
// parameter gradients. The gradient is truncated at x_0.
DenoiserParams backprop_unrolls(const UnrollTape& tape, const ForwardOperator& op,
                                const DenoiserParams& params, const Image& loss_grad,
                                DcGradientMode dc_mode = DcGradientMode::Exact);

// Mean local SSIM, 11x11 Gaussian window sigma = 1.5, C1 = (0.01 R)^2,
// C2 = (0.03 R)^2, valid-position windows. Requires size >= 11.
double ssim(const Image& a, const Image& b, double dynamic_range);
// Dynamic range taken from b (1.0 when b is constant).
double ssim(const Image& a, const Image& b);

struct LossResult {
    double value = 0.0;
    double mse = 0.0;
    double ssim = 0.0;  // NaN when not evaluated (w_ssim == 0 and size < 11)
    Image grad;         // exact d value / d pred
};

// value = MSE(pred, target) + w_ssim * (1 - SSIM(pred, target))
LossResult loss(const Image& pred, const Image& target, double w_ssim);

struct EpochStats {
    int epoch = 0;  // absolute epoch index (continues across resumes)
    double mean_loss = 0.0;
    double mean_mse = 0.0;
    double mean_ssim = 0.0;
};

struct TrainResult {
    DenoiserParams params;
    std::vector<EpochStats> log;
};

using OperatorFactory = std::function<ForwardOperator(std::size_t n, double dfov_cm)>;

// Builds per-DFOV operators through ratio_filter of the two kernels.
OperatorFactory make_operator_factory(const KernelMtfProfile& input_kernel,
                                      const KernelMtfProfile& target_kernel, double eps);

// Supervised training over in-memory pairs. ModelBased synthesizes through
// the per-pair operator; DirectLearning applies the denoiser alone. Throws
// EmptyDataset / Divergence. Deterministic given (inputs, seed); per-sample
// gradients may be computed in parallel but are reduced in index order.
TrainResult train(const std::vector<TrainingPair>& pairs, const OperatorFactory& op_factory,
                  const TrainConfig& tcfg, const UnrollConfig& ucfg, std::uint64_t seed,
                  std::optional<DenoiserParams> initial = std::nullopt,
                  const std::function<void(const EpochStats&, const DenoiserParams&)>& on_epoch = {});

// Loads every pair of a manifest into memory (paths relative to the
// manifest's directory unless absolute).
std::vector<TrainingPair> load_dataset(const DatasetManifest& manifest,
                                       const std::string& manifest_dir);

}  // namespace ksynth
