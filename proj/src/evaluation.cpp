#include "ksynth/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "ksynth/errors.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/solver.hpp"

namespace ksynth {

void MtfCurve::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write MTF curve: " + path);
    os << "freq_lp_per_cm,mtf\n";
    os.precision(12);
    for (std::size_t i = 0; i < freq_lp_per_cm.size(); ++i)
        os << freq_lp_per_cm[i] << "," << mtf[i] << "\n";
}

MtfCurve MtfCurve::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open MTF curve: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("freq_lp_per_cm,mtf", 0) != 0)
        throw IoError("missing freq_lp_per_cm,mtf header in " + path);
    MtfCurve curve;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("malformed CSV row in " + path);
        try {
            curve.freq_lp_per_cm.push_back(std::stod(line.substr(0, comma)));
            curve.mtf.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError("non-numeric CSV row in " + path);
        }
    }
    return curve;
}

namespace {

double border_ring_std(const Image& img) {
    const std::size_t n = img.size();
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    auto take = [&](double v) {
        sum += v;
        sum2 += v * v;
        ++count;
    };
    for (std::size_t j = 0; j < n; ++j) {
        take(img.at(0, j));
        if (n > 1) take(img.at(n - 1, j));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        take(img.at(i, 0));
        if (n > 1) take(img.at(i, n - 1));
    }
    const double mean = sum / static_cast<double>(count);
    const double var = std::max(0.0, sum2 / static_cast<double>(count) - mean * mean);
    return std::sqrt(var);
}

double ring_median(std::vector<double> ring) {
    std::sort(ring.begin(), ring.end());
    const std::size_t m = ring.size();
    return m % 2 ? ring[m / 2] : 0.5 * (ring[m / 2 - 1] + ring[m / 2]);
}

}  // namespace

MtfCurve estimate_mtf(const Image& wire_image, std::size_t roi_half_width, MtfWindow window) {
    const std::size_t n = wire_image.size();
    if (roi_half_width < 2) throw ValidationError("estimate_mtf: roi_half_width must be >= 2");

    // (1) dominant response
    std::size_t peak_row = 0, peak_col = 0;
    double peak_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = std::abs(wire_image.at(i, j));
            if (v > peak_abs) {
                peak_abs = v;
                peak_row = i;
                peak_col = j;
            }
        }
    }
    const double noise_floor = 3.0 * border_ring_std(wire_image);
    if (!(peak_abs > noise_floor))
        throw NoPeak("estimate_mtf: max |pixel| " + std::to_string(peak_abs) +
                     " does not exceed noise floor " + std::to_string(noise_floor));

    // (2) ROI crop
    const std::size_t r = roi_half_width;
    const std::size_t m = 2 * r + 1;
    if (peak_row < r || peak_col < r || peak_row + r >= n || peak_col + r >= n)
        throw RoiOutOfBounds("estimate_mtf: ROI of half-width " + std::to_string(r) +
                             " around peak (" + std::to_string(peak_row) + ", " +
                             std::to_string(peak_col) + ") leaves the image");
    std::vector<double> roi(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            roi[i * m + j] = wire_image.at(peak_row - r + i, peak_col - r + j);

    // (3) background from the ROI border ring
    std::vector<double> ring;
    ring.reserve(4 * m);
    for (std::size_t j = 0; j < m; ++j) {
        ring.push_back(roi[j]);
        ring.push_back(roi[(m - 1) * m + j]);
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
        ring.push_back(roi[i * m]);
        ring.push_back(roi[i * m + m - 1]);
    }
    const double background = ring_median(std::move(ring));
    for (auto& v : roi) v -= background;

    // (4) window
    if (window == MtfWindow::Hann) {
        std::vector<double> w(m);
        for (std::size_t i = 0; i < m; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                         static_cast<double>(m - 1)));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) roi[i * m + j] *= w[i] * w[j];
    }

    // (5) spectrum magnitude of the ROI; the ROI spans m * delta cm
    const double spacing = wire_image.pixel_spacing_cm();
    const Image roi_img(m, static_cast<double>(m) * spacing, std::move(roi));
    const Spectrum spec = fft2(roi_img);

    // (6) radial bins, width = one ROI frequency step; (7) DC normalization
    const FrequencyGrid roi_grid(m, roi_img.dfov_cm());
    const double freq_step = 1.0 / (static_cast<double>(m) * spacing);
    const std::size_t bins = m / 2 + 1;  // up to the axial Nyquist
    std::vector<double> acc(bins, 0.0), facc(bins, 0.0);
    std::vector<std::size_t> hits(bins, 0);
    for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t v = 0; v < m; ++v) {
            const double f = roi_grid.frequency_at(u, v);
            const auto k = static_cast<std::size_t>(std::llround(f / freq_step));
            if (k >= bins) continue;
            acc[k] += std::abs(spec.bins[u * m + v]);
            facc[k] += f;
            ++hits[k];
        }
    }
    std::vector<double> radial(bins, 0.0);
    for (std::size_t k = 0; k < bins; ++k)
        if (hits[k]) radial[k] = acc[k] / static_cast<double>(hits[k]);
    // linear infill for any empty bin
    for (std::size_t k = 0; k < bins; ++k) {
        if (hits[k]) continue;
        std::size_t lo = k, hi = k;
        while (lo > 0 && !hits[lo]) --lo;
        while (hi + 1 < bins && !hits[hi]) ++hi;
        if (hits[lo] && hits[hi]) {
            const double t = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
            radial[k] = radial[lo] + t * (radial[hi] - radial[lo]);
        } else if (hits[lo]) {
            radial[k] = radial[lo];
        } else if (hits[hi]) {
            radial[k] = radial[hi];
        }
    }
    if (!(radial[0] > 0.0))
        throw NoPeak("estimate_mtf: ROI has no DC content after background subtraction");

    MtfCurve curve;
    curve.dfov_cm = wire_image.dfov_cm();
    curve.source = "estimated";
    curve.freq_lp_per_cm.resize(bins);
    curve.mtf.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        // report the bin at the mean frequency of its samples: kills the
        // nearest-bin discretization bias of ring averaging
        curve.freq_lp_per_cm[k] = hits[k] ? facc[k] / static_cast<double>(hits[k])
                                          : static_cast<double>(k) * freq_step;
        curve.mtf[k] = radial[k] / radial[0];
    }
    return curve;
}

namespace {

double interp_curve(const MtfCurve& c, double f) {
    const auto& xs = c.freq_lp_per_cm;
    const auto& ys = c.mtf;
    auto it = std::lower_bound(xs.begin(), xs.end(), f);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (f - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace

double mtf_fidelity(const MtfCurve& estimated, const MtfCurve& reference, double f_lo, double f_hi) {
    if (estimated.freq_lp_per_cm.empty() || reference.freq_lp_per_cm.empty())
        throw ValidationError("mtf_fidelity: empty curve");
    if (!(f_lo >= 0.0) || !(f_hi > f_lo)) throw BandOutOfRange("mtf_fidelity: bad band");
    auto support_ok = [&](const MtfCurve& c) {
        return f_lo >= c.freq_lp_per_cm.front() && f_hi <= c.freq_lp_per_cm.back();
    };
    if (!support_ok(estimated) || !support_ok(reference))
        throw BandOutOfRange("mtf_fidelity: band [" + std::to_string(f_lo) + ", " +
                             std::to_string(f_hi) + "] outside curve support");
    constexpr std::size_t kSamples = 256;
    double acc = 0.0;
    for (std::size_t i = 0; i < kSamples; ++i) {
        const double f = f_lo + (f_hi - f_lo) * static_cast<double>(i) /
                                    static_cast<double>(kSamples - 1);
        const double d = interp_curve(estimated, f) - interp_curve(reference, f);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(kSamples));
}

MtfCurve curve_from_profile(const KernelMtfProfile& profile, double dfov_cm, double f_max,
                            std::size_t samples, const std::string& source_tag) {
    if (samples < 2) throw ValidationError("curve_from_profile: need at least 2 samples");
    MtfCurve curve;
    curve.dfov_cm = dfov_cm;
    curve.source = source_tag;
    curve.freq_lp_per_cm.resize(samples);
    curve.mtf.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double f = f_max * static_cast<double>(i) / static_cast<double>(samples - 1);
        curve.freq_lp_per_cm[i] = f;
        curve.mtf[i] = profile(f);
    }
    return curve;
}

ImageMetrics image_metrics(const Image& pred, const Image& target) {
    if (pred.size() != target.size()) throw SizeMismatch("image_metrics: sizes differ");
    const std::size_t count = pred.size() * pred.size();
    double mse = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double d = pred.pixels()[i] - target.pixels()[i];
        mse += d * d;
    }
    mse /= static_cast<double>(count);

    ImageMetrics metrics;
    metrics.mse = mse;
    double range = target.max() - target.min();
    if (!(range > 0.0)) range = 1.0;
    metrics.psnr = mse == 0.0 ? std::numeric_limits<double>::infinity()
                              : 10.0 * std::log10(range * range / mse);
    metrics.ssim = pred.size() >= 11 ? ssim(pred, target, range)
                                     : std::numeric_limits<double>::quiet_NaN();
    return metrics;
}

}  // namespace ksynth
