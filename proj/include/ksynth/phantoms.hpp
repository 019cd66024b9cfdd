#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ksynth/image.hpp"
#include "ksynth/mtf.hpp"

namespace ksynth {

/// Noise with power spectrum NPS(f) ~ f^ramp_exponent * M(f)^2, the usual
/// image-domain consequence of ramp-filtered reconstruction with kernel M.
struct NoiseModel {
    double sigma = 0.0;  // spatial std of the realized field, image units
    KernelMtfProfile shaping_profile = KernelMtfProfile::builtin_smooth();
    double ramp_exponent = 1.0;
};

struct Ellipse {
    double intensity;   // additive
    double a, b;        // semi-axes in [-1, 1] scene units
    double x0, y0;      // center
    double phi_deg;     // rotation, counter-clockwise
};

// The standard 10-ellipse head phantom table (modified contrast variant).
std::span<const Ellipse> shepp_logan_ellipses();

// Analytic point-in-ellipse rendering at pixel centers; scene spans [-1, 1].
Image render_ellipse_phantom(std::size_t n, double dfov_cm, std::span<const Ellipse> ellipses);

Image shepp_logan(std::size_t n, double dfov_cm);

// Rigidly rotated / intensity-scaled variant, used for dataset diversity.
Image shepp_logan_variant(std::size_t n, double dfov_cm, double rotation_deg,
                          double intensity_scale);

// Single-pixel impulse of the given amplitude at (n/2, n/2).
Image wire_phantom(std::size_t n, double dfov_cm, double amplitude);

// Uniform disk of diameter 0.9*n pixels at value 0 over a configurable
// background floor, plus one shaped-noise realization.
Image water_phantom(std::size_t n, double dfov_cm, const NoiseModel& model, std::uint64_t seed,
                    double background = -1000.0);

// Zero-mean Gaussian field spectrally shaped by sqrt(NPS), rescaled so the
// realized spatial std equals model.sigma exactly. The DC bin is always
// zeroed. Deterministic in (params, seed).
Image shaped_noise(const FrequencyGrid& grid, const NoiseModel& model, std::uint64_t seed);

// RMS spectral gain sqrt(mean over the grid of f^ramp * M(f)^2); the relative
// noise level a kernel passes under this noise model.
double noise_rms_gain(const FrequencyGrid& grid, const KernelMtfProfile& profile,
                      double ramp_exponent);

struct TrainingPair {
    Image input;
    Image target;
};

// input  = F^T M_input F gt  + noise shaped by M_input at model.sigma
// target = F^T M_target F gt + noise shaped by M_target, scaled by the gain
// ratio of the two kernels (one pre-kernel white-noise level for the pair),
// drawn from an independent seed stream.
TrainingPair make_training_pair(const Image& ground_truth, const KernelMtfProfile& input_mtf,
                                const KernelMtfProfile& target_mtf, const NoiseModel& model,
                                std::uint64_t seed);

struct DatasetPair {
    std::string input_path;
    std::string target_path;
    double dfov_cm = 0.0;
    std::uint64_t seed = 0;
};

struct DatasetManifest {
    std::vector<DatasetPair> pairs;

    void save(const std::string& path) const;
    static DatasetManifest load(const std::string& path);
};

}  // namespace ksynth
