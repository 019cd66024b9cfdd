#include "ksynth/phantoms.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "ksynth/errors.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/rng.hpp"

namespace ksynth {

using nlohmann::json;

namespace {

constexpr Ellipse kSheppLogan[10] = {
    //  A       a       b       x0      y0     phi
    {1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
};

}  // namespace

std::span<const Ellipse> shepp_logan_ellipses() { return kSheppLogan; }

Image render_ellipse_phantom(std::size_t n, double dfov_cm, std::span<const Ellipse> ellipses) {
    if (n < 16) throw ValidationError("render_ellipse_phantom: n must be >= 16");
    Image img(n, dfov_cm);
    struct Prepared {
        double cos_phi, sin_phi, inv_a2, inv_b2, x0, y0, intensity;
    };
    std::vector<Prepared> prep;
    prep.reserve(ellipses.size());
    for (const auto& e : ellipses) {
        const double rad = e.phi_deg * M_PI / 180.0;
        prep.push_back({std::cos(rad), std::sin(rad), 1.0 / (e.a * e.a), 1.0 / (e.b * e.b), e.x0,
                        e.y0, e.intensity});
    }
    const double step = 2.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = 1.0 - (static_cast<double>(i) + 0.5) * step;  // row 0 at +y
        for (std::size_t j = 0; j < n; ++j) {
            const double x = (static_cast<double>(j) + 0.5) * step - 1.0;
            double sum = 0.0;
            for (const auto& e : prep) {
                const double dx = x - e.x0;
                const double dy = y - e.y0;
                const double xr = dx * e.cos_phi + dy * e.sin_phi;
                const double yr = -dx * e.sin_phi + dy * e.cos_phi;
                if (xr * xr * e.inv_a2 + yr * yr * e.inv_b2 <= 1.0) sum += e.intensity;
            }
            // intensity sums like 1 - 0.8 - 0.2 cancel only approximately
            img.at(i, j) = std::abs(sum) < 1e-12 ? 0.0 : sum;
        }
    }
    return img;
}

Image shepp_logan(std::size_t n, double dfov_cm) {
    return render_ellipse_phantom(n, dfov_cm, shepp_logan_ellipses());
}

Image shepp_logan_variant(std::size_t n, double dfov_cm, double rotation_deg,
                          double intensity_scale) {
    // rotate the table, not the raster: rendering stays analytic
    std::vector<Ellipse> table(kSheppLogan, kSheppLogan + 10);
    const double rad = rotation_deg * M_PI / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    for (auto& e : table) {
        const double x = e.x0 * c - e.y0 * s;
        const double y = e.x0 * s + e.y0 * c;
        e.x0 = x;
        e.y0 = y;
        e.phi_deg += rotation_deg;
        e.intensity *= intensity_scale;
    }
    return render_ellipse_phantom(n, dfov_cm, table);
}

Image wire_phantom(std::size_t n, double dfov_cm, double amplitude) {
    if (n < 32) throw ValidationError("wire_phantom: n must be >= 32");
    Image img(n, dfov_cm);
    img.at(n / 2, n / 2) = amplitude;
    return img;
}

Image shaped_noise(const FrequencyGrid& grid, const NoiseModel& model, std::uint64_t seed) {
    if (model.sigma < 0.0) throw ValidationError("shaped_noise: sigma must be >= 0");
    const std::size_t n = grid.size();
    Image out(n, grid.dfov_cm());
    if (model.sigma == 0.0) return out;

    Rng rng(seed);
    Spectrum spec(n);
    {
        // white field in row-major order, one stream
        Image white(n, grid.dfov_cm());
        for (auto& p : white.pixels()) p = rng.gaussian();
        spec = fft2(white);
    }
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const double f = grid.frequency_at(u, v);
            const double gain = std::pow(f, 0.5 * model.ramp_exponent) * model.shaping_profile(f);
            spec.bins[u * n + v] *= gain;
        }
    }
    spec.bins[0] = 0.0;  // no DC noise
    Image field = ifft2(spec, grid.dfov_cm());
    double power = 0.0;
    for (double v : field.pixels()) power += v * v;
    const double std_dev = std::sqrt(power / static_cast<double>(n * n));
    if (std_dev == 0.0) return out;
    const double scale = model.sigma / std_dev;
    for (std::size_t i = 0; i < n * n; ++i) out.pixels()[i] = field.pixels()[i] * scale;
    return out;
}

double noise_rms_gain(const FrequencyGrid& grid, const KernelMtfProfile& profile,
                      double ramp_exponent) {
    const std::size_t n = grid.size();
    double acc = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const double f = grid.frequency_at(u, v);
            const double m = profile(f);
            acc += std::pow(f, ramp_exponent) * m * m;
        }
    }
    return std::sqrt(acc / static_cast<double>(n * n));
}

Image water_phantom(std::size_t n, double dfov_cm, const NoiseModel& model, std::uint64_t seed,
                    double background) {
    if (n < 32) throw ValidationError("water_phantom: n must be >= 32");
    Image img(n, dfov_cm);
    const double radius = 0.45 * static_cast<double>(n);
    const double cx = 0.5 * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double dy = (static_cast<double>(i) + 0.5) - cx;
            const double dx = (static_cast<double>(j) + 0.5) - cx;
            img.at(i, j) = (dx * dx + dy * dy <= radius * radius) ? 0.0 : background;
        }
    }
    if (model.sigma > 0.0) {
        const Image noise = shaped_noise(FrequencyGrid(n, dfov_cm), model, seed);
        for (std::size_t i = 0; i < n * n; ++i) img.pixels()[i] += noise.pixels()[i];
    }
    return img;
}

TrainingPair make_training_pair(const Image& ground_truth, const KernelMtfProfile& input_mtf,
                                const KernelMtfProfile& target_mtf, const NoiseModel& model,
                                std::uint64_t seed) {
    const std::size_t n = ground_truth.size();
    const FrequencyGrid grid(n, ground_truth.dfov_cm());
    const Spectrum gt = fft2(ground_truth);

    auto filter_with = [&](const KernelMtfProfile& prof) {
        Spectrum spec = gt;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                spec.bins[u * n + v] *= prof(grid.frequency_at(u, v));
        return ifft2(spec, ground_truth.dfov_cm());
    };

    Image input = filter_with(input_mtf);
    Image target = filter_with(target_mtf);

    if (model.sigma > 0.0) {
        // One pre-kernel white-noise level for the pair: the sharper kernel
        // passes more of it, so the target field gets the gain ratio.
        const double gi = noise_rms_gain(grid, input_mtf, model.ramp_exponent);
        const double gt_gain = noise_rms_gain(grid, target_mtf, model.ramp_exponent);
        const double ratio = gi > 0.0 ? gt_gain / gi : 1.0;

        NoiseModel input_model{model.sigma, input_mtf, model.ramp_exponent};
        NoiseModel target_model{model.sigma * ratio, target_mtf, model.ramp_exponent};
        const Image ni = shaped_noise(grid, input_model, Rng::splitmix64_mix(seed * 2 + 0));
        const Image nt = shaped_noise(grid, target_model, Rng::splitmix64_mix(seed * 2 + 1));
        for (std::size_t i = 0; i < n * n; ++i) {
            input.pixels()[i] += ni.pixels()[i];
            target.pixels()[i] += nt.pixels()[i];
        }
    }
    return {std::move(input), std::move(target)};
}

void DatasetManifest::save(const std::string& path) const {
    json j;
    j["pairs"] = json::array();
    for (const auto& p : pairs)
        j["pairs"].push_back({{"input_path", p.input_path},
                              {"target_path", p.target_path},
                              {"dfov_cm", p.dfov_cm},
                              {"seed", p.seed}});
    std::ofstream os(path);
    if (!os) throw IoError("cannot write manifest: " + path);
    os << j.dump(2) << "\n";
}

DatasetManifest DatasetManifest::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open manifest: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw IoError(std::string("manifest parse error: ") + e.what());
    }
    DatasetManifest m;
    try {
        for (const auto& row : j.at("pairs"))
            m.pairs.push_back({row.at("input_path").get<std::string>(),
                               row.at("target_path").get<std::string>(),
                               row.at("dfov_cm").get<double>(), row.at("seed").get<std::uint64_t>()});
    } catch (const json::exception& e) {
        throw IoError(std::string("manifest structure error: ") + e.what());
    }
    return m;
}

}  // namespace ksynth
