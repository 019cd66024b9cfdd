#include "ksynth/fft.hpp"

#include <cmath>
#include <cstdlib>

#include "ksynth/errors.hpp"

namespace ksynth {
namespace detail {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

void make_pow2_tables(std::size_t m, std::vector<std::size_t>& bitrev,
                      std::vector<std::complex<double>>& twiddle) {
    bitrev.assign(m, 0);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < m) ++bits;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bitrev[i] = r;
    }
    twiddle.assign(m / 2 + 1, {1.0, 0.0});
    for (std::size_t k = 0; k < twiddle.size(); ++k) {
        const double a = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m);
        twiddle[k] = {std::cos(a), std::sin(a)};
    }
}

}  // namespace

Fft1d::Fft1d(std::size_t n) : n_(n), is_pow2_(is_power_of_two(n)) {
    if (n_ == 0) throw ValidationError("Fft1d: length must be positive");
    if (is_pow2_) {
        m_ = n_;
        make_pow2_tables(m_, bitrev_, twiddle_);
        return;
    }
    // Bluestein: phase of the chirp uses k^2 mod 2n, which is exact in u64.
    m_ = next_power_of_two(2 * n_ - 1);
    make_pow2_tables(m_, bitrev_, twiddle_);
    chirp_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const std::uint64_t q = (static_cast<std::uint64_t>(k) * k) % (2 * n_);
        const double a = -M_PI * static_cast<double>(q) / static_cast<double>(n_);
        chirp_[k] = {std::cos(a), std::sin(a)};
    }
    kernel_fft_.assign(m_, {0.0, 0.0});
    kernel_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t t = 1; t < n_; ++t) {
        kernel_fft_[t] = std::conj(chirp_[t]);
        kernel_fft_[m_ - t] = std::conj(chirp_[t]);
    }
    pow2_transform(kernel_fft_.data());
}

void Fft1d::pow2_transform(std::complex<double>* data) const {
    // in-place radix-2 DIT, negative-exponent kernel
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = bitrev_[i];
        if (j > i) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= m_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = m_ / len;
        for (std::size_t start = 0; start < m_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> w = twiddle_[k * step];
                const std::complex<double> t = w * data[start + k + half];
                const std::complex<double> u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }
}

void Fft1d::forward(std::complex<double>* data) const {
    if (is_pow2_) {
        pow2_transform(data);
        return;
    }
    std::vector<std::complex<double>> a(m_, {0.0, 0.0});
    for (std::size_t k = 0; k < n_; ++k) a[k] = data[k] * chirp_[k];
    pow2_transform(a.data());
    for (std::size_t i = 0; i < m_; ++i) a[i] *= kernel_fft_[i];
    // unscaled inverse of length m_ via conjugation
    for (auto& v : a) v = std::conj(v);
    pow2_transform(a.data());
    const double inv_m = 1.0 / static_cast<double>(m_);
    for (std::size_t j = 0; j < n_; ++j)
        data[j] = chirp_[j] * std::conj(a[j]) * inv_m;
}

void Fft1d::inverse(std::complex<double>* data) const {
    for (std::size_t i = 0; i < n_; ++i) data[i] = std::conj(data[i]);
    forward(data);
    for (std::size_t i = 0; i < n_; ++i) data[i] = std::conj(data[i]);
}

}  // namespace detail

namespace {

void transform_2d(std::vector<std::complex<double>>& buf, std::size_t n,
                  const detail::Fft1d& plan, bool inverse) {
    const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < sn; ++r) {
        auto* row = buf.data() + static_cast<std::size_t>(r) * n;
        inverse ? plan.inverse(row) : plan.forward(row);
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < sn; ++c) {
        std::vector<std::complex<double>> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = buf[r * n + static_cast<std::size_t>(c)];
        inverse ? plan.inverse(col.data()) : plan.forward(col.data());
        for (std::size_t r = 0; r < n; ++r) buf[r * n + static_cast<std::size_t>(c)] = col[r];
    }
}

}  // namespace

Spectrum fft2(const Image& img) {
    const std::size_t n = img.size();
    const detail::Fft1d plan(n);
    Spectrum spec(n);
    for (std::size_t i = 0; i < n * n; ++i) spec.bins[i] = img.pixels()[i];
    transform_2d(spec.bins, n, plan, false);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : spec.bins) v *= scale;
    return spec;
}

Image ifft2(const Spectrum& spec, double dfov_cm) {
    const std::size_t n = spec.n;
    if (n == 0 || spec.bins.size() != n * n)
        throw SizeMismatch("ifft2: malformed spectrum");
    const detail::Fft1d plan(n);
    std::vector<std::complex<double>> buf = spec.bins;
    transform_2d(buf, n, plan, true);
    const double scale = 1.0 / static_cast<double>(n);
    double max_re = 0.0, max_im = 0.0;
    std::vector<double> pixels(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        const double re = buf[i].real() * scale;
        const double im = buf[i].imag() * scale;
        pixels[i] = re;
        max_re = std::max(max_re, std::abs(re));
        max_im = std::max(max_im, std::abs(im));
    }
    if (max_im > 0.0 && !(max_im < 1e-9 * max_re))
        throw NonRealResult("ifft2: spectrum is not conjugate-symmetric (max|imag| = " +
                            std::to_string(max_im) + ", max|real| = " + std::to_string(max_re) + ")");
    return Image(n, dfov_cm, std::move(pixels));
}

}  // namespace ksynth
