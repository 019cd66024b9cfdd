#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ksynth/image.hpp"

namespace ksynth {

struct ConvLayer {
    std::size_t in_ch = 0;
    std::size_t out_ch = 0;
    std::vector<double> w;  // out_ch * in_ch * 3 * 3, [oc][ic][ky][kx]
    std::vector<double> b;  // out_ch
};

/// Residual 3x3 conv stack z = x + net(x); rectifier on hidden layers, linear
/// output, symmetric (edge-mirrored) padding. One parameter set is shared
/// across all unrolls. Channel chain is 1 -> hidden... -> 1.
class DenoiserParams {
public:
    // Fan-in-scaled uniform init, final layer zeroed so the map starts as
    // the identity. hidden_widths defaults to {16, 16}.
    static DenoiserParams init(const std::vector<std::size_t>& hidden_widths, std::uint64_t seed);
    static DenoiserParams zeros(const std::vector<std::size_t>& hidden_widths);
    static DenoiserParams zeros_like(const DenoiserParams& other);

    const std::vector<ConvLayer>& layers() const { return layers_; }
    std::vector<ConvLayer>& layers() { return layers_; }

    std::size_t parameter_count() const;
    std::vector<std::size_t> hidden_widths() const;
    void check_valid() const;  // shape chain + finiteness

    // Flat parameter vector in serialization order (per layer: w then b).
    std::vector<double> to_flat() const;
    void from_flat(const std::vector<double>& flat);

    // KSNN v1: magic "KSNN", u8 version, u32le JSON header length, JSON
    // header, then f32le parameters in flat order.
    void save(const std::string& path) const;
    static DenoiserParams load(const std::string& path);

    int epochs_trained = 0;  // carried in the checkpoint header

private:
    std::vector<ConvLayer> layers_;
};

/// Pre-activations kept from a forward pass for the exact backward sweep.
struct ActivationRecord {
    std::size_t n = 0;
    std::vector<double> input;                 // n*n
    std::vector<std::vector<double>> preact;   // per layer, out_ch*n*n
    std::vector<std::pair<std::size_t, std::size_t>> layer_dims;
};

// z = x + net(x). Records the tape when one is supplied.
Image denoise_forward(const DenoiserParams& params, const Image& x,
                      ActivationRecord* tape = nullptr);

// Exact gradients of <upstream, z> w.r.t. params (returned) and x
// (written to grad_x when non-null). The residual path contributes the
// upstream itself to grad_x.
DenoiserParams denoise_backward(const DenoiserParams& params, const ActivationRecord& tape,
                                const Image& upstream, Image* grad_x = nullptr);

enum class BaselineKind { Identity, Gaussian };

// Identity, or a spectral Gaussian low-pass with std sigma_px pixels.
Image baseline_denoiser(BaselineKind kind, double sigma_px, const Image& x);

}  // namespace ksynth
