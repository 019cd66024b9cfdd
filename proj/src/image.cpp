#include "ksynth/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "ksynth/errors.hpp"

namespace ksynth {

static_assert(std::endian::native == std::endian::little,
              "KSIM/KSNN serialization assumes a little-endian host");

Image::Image(std::size_t n, double dfov_cm) : n_(n), dfov_cm_(dfov_cm), pixels_(n * n, 0.0) {
    if (n_ == 0) throw ValidationError("Image: size must be positive");
    if (!(dfov_cm_ > 0.0)) throw ValidationError("Image: dfov_cm must be positive");
}

Image::Image(std::size_t n, double dfov_cm, std::vector<double> pixels)
    : n_(n), dfov_cm_(dfov_cm), pixels_(std::move(pixels)) {
    if (n_ == 0) throw ValidationError("Image: size must be positive");
    if (!(dfov_cm_ > 0.0)) throw ValidationError("Image: dfov_cm must be positive");
    if (pixels_.size() != n_ * n_)
        throw SizeMismatch("Image: pixel buffer does not match size " + std::to_string(n_));
    check_finite();
}

void Image::check_finite() const {
    for (double v : pixels_)
        if (!std::isfinite(v)) throw ValidationError("Image: non-finite pixel value");
}

double Image::min() const { return *std::min_element(pixels_.begin(), pixels_.end()); }
double Image::max() const { return *std::max_element(pixels_.begin(), pixels_.end()); }

double Image::mean() const {
    return std::accumulate(pixels_.begin(), pixels_.end(), 0.0) / static_cast<double>(pixels_.size());
}

double Image::l2_norm() const {
    double s = 0.0;
    for (double v : pixels_) s += v * v;
    return std::sqrt(s);
}

FrequencyGrid::FrequencyGrid(std::size_t n, double dfov_cm) : n_(n), dfov_cm_(dfov_cm) {
    if (n_ == 0) throw ValidationError("FrequencyGrid: size must be positive");
    if (!(dfov_cm_ > 0.0)) throw ValidationError("FrequencyGrid: dfov_cm must be positive");
}

double FrequencyGrid::wrap_index(std::size_t u) const {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    auto i = static_cast<std::ptrdiff_t>(u);
    if (i >= (n + 1) / 2) i -= n;
    return static_cast<double>(i);
}

double FrequencyGrid::frequency_at(std::size_t u, std::size_t v) const {
    if (u >= n_ || v >= n_)
        throw ValidationError("FrequencyGrid: index out of range");
    // fu = wrap(u) / (n * spacing) = wrap(u) / dfov
    const double fu = wrap_index(u) / dfov_cm_;
    const double fv = wrap_index(v) / dfov_cm_;
    return std::hypot(fu, fv);
}

namespace {

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void save_ksim(const std::string& path, const Image& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write("KSIM", 4);
    write_raw<std::uint8_t>(os, 1);
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(img.size()));
    write_raw<double>(os, img.dfov_cm());
    std::vector<float> buf(img.pixels().size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(img.pixels()[i]);
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!os) throw IoError("write failed: " + path);
}

Image load_ksim(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "KSIM", 4) != 0)
        throw IoError("not a KSIM file: " + path);
    const auto version = read_raw<std::uint8_t>(is);
    if (version != 1) throw IoError("unsupported KSIM version in " + path);
    const auto n = read_raw<std::uint32_t>(is);
    const auto dfov = read_raw<double>(is);
    if (!is || n == 0) throw IoError("corrupt KSIM header: " + path);
    std::vector<float> buf(static_cast<std::size_t>(n) * n);
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!is) throw IoError("truncated KSIM payload: " + path);
    std::vector<double> pixels(buf.begin(), buf.end());
    try {
        return Image(n, dfov, std::move(pixels));
    } catch (const ValidationError& e) {
        throw IoError("invalid KSIM payload in " + path + ": " + e.what());
    }
}

}  // namespace ksynth
