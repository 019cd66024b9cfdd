#pragma once

#include <string>
#include <vector>

#include "ksynth/image.hpp"
#include "ksynth/mtf.hpp"

namespace ksynth {

/// Radially binned MTF samples; frequencies strictly increasing from 0 and
/// mtf[0] == 1 after normalization.
struct MtfCurve {
    std::vector<double> freq_lp_per_cm;
    std::vector<double> mtf;
    double dfov_cm = 0.0;
    std::string source;  // input | target | direct | proposed | estimated

    void save_csv(const std::string& path) const;
    static MtfCurve load_csv(const std::string& path);
};

enum class MtfWindow { None, Hann };

// Wire-phantom MTF estimation: peak location, (2r+1)^2 ROI crop, border-ring
// median background subtraction, optional 2D Hann window, |DFT|, radial
// binning at the ROI frequency step, DC normalization. Throws NoPeak when
// max|pixel| does not exceed 3x the std of the image border ring, and
// RoiOutOfBounds when the ROI does not fit.
MtfCurve estimate_mtf(const Image& wire_image, std::size_t roi_half_width, MtfWindow window);

// RMSE between the curves after linear interpolation onto a common axis
// restricted to [f_lo, f_hi]; the band must lie inside both supports.
double mtf_fidelity(const MtfCurve& estimated, const MtfCurve& reference, double f_lo, double f_hi);

// Profile sampled on a uniform axis, for reference curves.
MtfCurve curve_from_profile(const KernelMtfProfile& profile, double dfov_cm, double f_max,
                            std::size_t samples, const std::string& source_tag);

struct ImageMetrics {
    double mse = 0.0;
    double psnr = 0.0;  // +inf when mse == 0
    double ssim = 0.0;  // NaN when size < 11
};

ImageMetrics image_metrics(const Image& pred, const Image& target);

}  // namespace ksynth
