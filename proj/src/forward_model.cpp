#include "ksynth/forward_model.hpp"

#include <string>

#include "ksynth/errors.hpp"
#include "ksynth/fft.hpp"

namespace ksynth {

namespace {
// lambda == 0 is allowed only when Lambda is verifiably bounded away from
// zero; refusing beats returning Inf.
constexpr double kMinInvertibleLambda = 1e-8;
}  // namespace

ForwardOperator::ForwardOperator(TransferFilter lambda)
    : lambda_(std::move(lambda)), min_lambda_(lambda_.min_value()) {
    if (min_lambda_ < 0.0)
        throw ValidationError("ForwardOperator: transfer filter must be non-negative");
}

void ForwardOperator::check_compatible(const Image& img) const {
    if (img.size() != grid().size())
        throw SizeMismatch("operator expects " + std::to_string(grid().size()) + "^2 images, got " +
                           std::to_string(img.size()));
    if (img.dfov_cm() != grid().dfov_cm())
        throw DfovMismatch("operator grid dfov " + std::to_string(grid().dfov_cm()) +
                           " cm != image dfov " + std::to_string(img.dfov_cm()) + " cm");
}

void ForwardOperator::check_invertible(double lambda) const {
    if (lambda < 0.0) throw ValidationError("regularization weight must be >= 0");
    if (lambda == 0.0 && !(min_lambda_ > kMinInvertibleLambda))
        throw SingularSystem("lambda = 0 with transfer filter minimum " +
                             std::to_string(min_lambda_) + "; system is singular");
}

Image ForwardOperator::apply_h(const Image& x) const {
    check_compatible(x);
    Spectrum spec = fft2(x);
    const std::size_t nn = x.size() * x.size();
    for (std::size_t i = 0; i < nn; ++i) spec.bins[i] *= lambda_.values[i];
    return ifft2(spec, x.dfov_cm());
}

Image ForwardOperator::apply_h_adjoint(const Image& y) const { return apply_h(y); }

Image ForwardOperator::tikhonov_init(const Image& y, double lambda0) const {
    check_compatible(y);
    return tikhonov_init(fft2(y), lambda0);
}

Image ForwardOperator::tikhonov_init(const Spectrum& y_spec, double lambda0) const {
    if (y_spec.n != grid().size()) throw SizeMismatch("tikhonov_init: spectrum size mismatch");
    check_invertible(lambda0);
    Spectrum spec = y_spec;
    const std::size_t nn = spec.n * spec.n;
    for (std::size_t i = 0; i < nn; ++i) {
        const double lam = lambda_.values[i];
        spec.bins[i] *= lam / (lam * lam + lambda0);
    }
    return ifft2(spec, grid().dfov_cm());
}

Image ForwardOperator::dc_step(const Image& y, const Image& z, double lambda_k) const {
    check_compatible(y);
    return dc_step(fft2(y), z, lambda_k);
}

Image ForwardOperator::dc_step(const Spectrum& y_spec, const Image& z, double lambda_k) const {
    if (y_spec.n != grid().size()) throw SizeMismatch("dc_step: spectrum size mismatch");
    check_compatible(z);
    check_invertible(lambda_k);
    Spectrum zs = fft2(z);
    const std::size_t nn = zs.n * zs.n;
    for (std::size_t i = 0; i < nn; ++i) {
        const double lam = lambda_.values[i];
        zs.bins[i] = (lam * y_spec.bins[i] + lambda_k * zs.bins[i]) / (lam * lam + lambda_k);
    }
    return ifft2(zs, grid().dfov_cm());
}

Image ForwardOperator::dc_step_grad_z(const Image& upstream, double lambda_k) const {
    check_compatible(upstream);
    check_invertible(lambda_k);
    Spectrum spec = fft2(upstream);
    const std::size_t nn = upstream.size() * upstream.size();
    for (std::size_t i = 0; i < nn; ++i) {
        const double lam = lambda_.values[i];
        spec.bins[i] *= lambda_k / (lam * lam + lambda_k);
    }
    return ifft2(spec, upstream.dfov_cm());
}

Image direct_ratio_synthesis(const Image& y, const TransferFilter& ratio) {
    if (y.size() != ratio.grid.size())
        throw SizeMismatch("direct_ratio_synthesis: image/filter size mismatch");
    if (y.dfov_cm() != ratio.grid.dfov_cm())
        throw DfovMismatch("direct_ratio_synthesis: image/filter dfov mismatch");
    Spectrum spec = fft2(y);
    const std::size_t nn = y.size() * y.size();
    for (std::size_t i = 0; i < nn; ++i) spec.bins[i] *= ratio.values[i];
    return ifft2(spec, y.dfov_cm());
}

ForwardOperator make_forward_operator(const KernelMtfProfile& input_kernel,
                                      const KernelMtfProfile& target_kernel,
                                      const FrequencyGrid& grid, double eps) {
    // forward model runs target -> input, so the roles swap
    return ForwardOperator(ratio_filter(target_kernel, input_kernel, grid, eps));
}

}  // namespace ksynth
