#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ksynth/image.hpp"

namespace ksynth {

enum class MtfFamily { SmoothGaussian, SharpBoosted, Tabulated };

/// Radial MTF profile of a reconstruction kernel, M(0) = 1 and M >= 0.
///
/// SmoothGaussian:  M(f) = exp(-(f/f0)^p)
/// SharpBoosted:    M(f) = (1 + beta*(f/f_beta)^2 * exp(1 - (f/f_beta)^2)) * exp(-(f/f0)^p),
///                  the boost factor peaks at exactly (1 + beta) when f = f_beta
/// Tabulated:       linear interpolation over sorted (f, M) samples, clamped
///                  to the last sample beyond the table
class KernelMtfProfile {
public:
    static KernelMtfProfile smooth_gaussian(double f0, double p);
    static KernelMtfProfile sharp_boosted(double f0, double p, double beta, double f_beta);
    static KernelMtfProfile tabulated(std::vector<std::pair<double, double>> samples);

    // Stand-ins for vendor smooth/sharp kernels; the sharp one exceeds the
    // smooth one at mid frequencies. Configuration defaults, not ground truth.
    static KernelMtfProfile builtin_smooth() { return smooth_gaussian(6.0, 2.2); }
    static KernelMtfProfile builtin_sharp() { return sharp_boosted(11.0, 2.5, 0.25, 6.0); }

    MtfFamily family() const { return family_; }
    double f0() const { return f0_; }
    double shape_p() const { return p_; }
    double beta() const { return beta_; }
    double f_beta() const { return f_beta_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

    // M(f); throws ValidationError for f < 0.
    double operator()(double f_lp_per_cm) const;

    std::string to_json() const;
    static KernelMtfProfile from_json_text(const std::string& text);
    static KernelMtfProfile from_json_file(const std::string& path);
    // CSV with header "f_lp_per_cm,mtf"
    static KernelMtfProfile from_csv_file(const std::string& path);
    // Resolves "builtin:smooth", "builtin:sharp", *.json or *.csv paths.
    static KernelMtfProfile resolve(const std::string& spec_str);

private:
    KernelMtfProfile() = default;

    MtfFamily family_ = MtfFamily::SmoothGaussian;
    double f0_ = 0.0, p_ = 0.0, beta_ = 0.0, f_beta_ = 0.0;
    std::vector<std::pair<double, double>> samples_;
};

inline double eval_profile(const KernelMtfProfile& profile, double f) { return profile(f); }

/// Real non-negative spectral multiplier sampled on a DFOV-aware grid,
/// DC-at-origin layout. Index symmetry holds exactly by construction.
struct TransferFilter {
    FrequencyGrid grid;
    std::vector<double> values;  // grid.size()^2, row-major (u, v)

    double at(std::size_t u, std::size_t v) const { return values[u * grid.size() + v]; }
    double min_value() const;
    double max_value() const;
};

// values[u,v] = profile(frequency_at(u,v)).
TransferFilter sample_on_grid(const KernelMtfProfile& profile, const FrequencyGrid& grid);

// Wiener-style regularized ratio M_target * M_input / (M_input^2 + eps);
// eps = 0 requires M_input > 0 (and M_input^2 not underflowing) at every
// sampled frequency, otherwise DivisionBlowup.
TransferFilter ratio_filter(const KernelMtfProfile& input_mtf, const KernelMtfProfile& target_mtf,
                            const FrequencyGrid& grid, double eps);

}  // namespace ksynth
