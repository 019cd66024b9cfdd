#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ksynth {

/// Square real-valued slice with its display field-of-view. Pixel spacing is
/// always dfov_cm / size and never stored. HU-offset convention: water ~ 0.
class Image {
public:
    Image(std::size_t n, double dfov_cm);                              // zero-filled
    Image(std::size_t n, double dfov_cm, std::vector<double> pixels);  // validates

    std::size_t size() const { return n_; }
    double dfov_cm() const { return dfov_cm_; }
    double pixel_spacing_cm() const { return dfov_cm_ / static_cast<double>(n_); }

    double& at(std::size_t row, std::size_t col) { return pixels_[row * n_ + col]; }
    double at(std::size_t row, std::size_t col) const { return pixels_[row * n_ + col]; }

    std::vector<double>& pixels() { return pixels_; }
    const std::vector<double>& pixels() const { return pixels_; }

    double min() const;
    double max() const;
    double mean() const;
    double l2_norm() const;

    // Throws ValidationError on NaN/Inf pixels; constructors call this.
    void check_finite() const;

private:
    std::size_t n_;
    double dfov_cm_;
    std::vector<double> pixels_;
};

/// Complex N x N spectrum in standard DFT layout, DC at bin (0,0).
struct Spectrum {
    std::size_t n = 0;
    std::vector<std::complex<double>> bins;  // row-major, n*n

    Spectrum() = default;
    explicit Spectrum(std::size_t size) : n(size), bins(size * size) {}

    std::complex<double>& at(std::size_t u, std::size_t v) { return bins[u * n + v]; }
    std::complex<double> at(std::size_t u, std::size_t v) const { return bins[u * n + v]; }
};

/// Maps DFT bin indices to spatial frequencies in lp/cm for a given matrix
/// size and DFOV. Axial Nyquist is n / (2 * dfov_cm).
class FrequencyGrid {
public:
    FrequencyGrid(std::size_t n, double dfov_cm);

    std::size_t size() const { return n_; }
    double dfov_cm() const { return dfov_cm_; }
    double nyquist_lp_per_cm() const { return static_cast<double>(n_) / (2.0 * dfov_cm_); }

    // Signed frequency index in [-n/2, n/2).
    double wrap_index(std::size_t u) const;

    // Radial frequency sqrt(fu^2 + fv^2) in lp/cm; throws on out-of-range index.
    double frequency_at(std::size_t u, std::size_t v) const;

private:
    std::size_t n_;
    double dfov_cm_;
};

// KSIM v1 container: magic "KSIM", u8 version=1, u32le n, f64le dfov_cm,
// n*n f32le pixels row-major.
void save_ksim(const std::string& path, const Image& img);
Image load_ksim(const std::string& path);

}  // namespace ksynth
