#pragma once

#include "ksynth/image.hpp"
#include "ksynth/mtf.hpp"

namespace ksynth {

/// Diagonalized linear operator H = F^T Lambda F for a real, index-symmetric
/// Lambda, plus the closed-form solves built on it. Because Lambda is real
/// and symmetric, H is self-adjoint on real images; apply_h_adjoint shares
/// the code path of apply_h and exists so call sites read like the math.
class ForwardOperator {
public:
    explicit ForwardOperator(TransferFilter lambda);

    const TransferFilter& transfer() const { return lambda_; }
    const FrequencyGrid& grid() const { return lambda_.grid; }
    double min_lambda() const { return min_lambda_; }

    Image apply_h(const Image& x) const;
    Image apply_h_adjoint(const Image& y) const;

    // x0 = (H^T H + lambda0 I)^-1 H^T y, spectrally Lambda*Y / (Lambda^2 + lambda0).
    Image tikhonov_init(const Image& y, double lambda0) const;
    Image tikhonov_init(const Spectrum& y_spec, double lambda0) const;

    // argmin_x ||y - Hx||^2 + lambda_k ||x - z||^2,
    // spectrally (Lambda*Y + lambda_k*Z) / (Lambda^2 + lambda_k).
    // The Spectrum overloads let the solver reuse F y across unrolls.
    Image dc_step(const Image& y, const Image& z, double lambda_k) const;
    Image dc_step(const Spectrum& y_spec, const Image& z, double lambda_k) const;

    // Adjoint (== Jacobian, the multiplier is real symmetric) of
    // z -> dc_step(y, z, lambda_k) at fixed y: lambda_k*U / (Lambda^2 + lambda_k).
    Image dc_step_grad_z(const Image& upstream, double lambda_k) const;

private:
    void check_compatible(const Image& img) const;
    void check_invertible(double lambda) const;

    TransferFilter lambda_;
    double min_lambda_;
};

// One-shot MTF-ratio synthesis ifft2(ratio .* fft2(y)); no noise control.
Image direct_ratio_synthesis(const Image& y, const TransferFilter& ratio);

// Operator mapping target-kernel images to input-kernel images:
// Lambda ~ M_input / M_target (Wiener-regularized by eps).
ForwardOperator make_forward_operator(const KernelMtfProfile& input_kernel,
                                      const KernelMtfProfile& target_kernel,
                                      const FrequencyGrid& grid, double eps);

}  // namespace ksynth
