#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ksynth/image.hpp"

namespace ksynth {

// Orthonormal 2D Fourier transforms: both directions carry a 1/n factor so
// fft2/ifft2 are unitary and Parseval holds with equal norms.
Spectrum fft2(const Image& img);

// Inverse transform expecting a (numerically) conjugate-symmetric spectrum.
// The imaginary residual is discarded only when max|imag| < 1e-9 * max|real|;
// otherwise NonRealResult is thrown. dfov_cm is attached to the result.
Image ifft2(const Spectrum& spec, double dfov_cm);

namespace detail {

// Unscaled 1D DFT of any length: iterative radix-2 for powers of two,
// Bluestein's chirp-z otherwise.
class Fft1d {
public:
    explicit Fft1d(std::size_t n);

    std::size_t length() const { return n_; }
    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const;  // unscaled (no 1/n)

private:
    void pow2_transform(std::complex<double>* data) const;

    std::size_t n_;
    bool is_pow2_;
    // radix-2 tables (for n_ itself, or the Bluestein length m_)
    std::size_t m_ = 0;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;
    // Bluestein tables
    std::vector<std::complex<double>> chirp_;         // exp(-i pi k^2 / n)
    std::vector<std::complex<double>> kernel_fft_;    // FFT of conj chirp, length m_
};

}  // namespace detail
}  // namespace ksynth
