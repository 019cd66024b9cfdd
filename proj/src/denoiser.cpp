#include "ksynth/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "ksynth/errors.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/rng.hpp"

namespace ksynth {

using nlohmann::json;

namespace {

std::vector<ConvLayer> make_layers(const std::vector<std::size_t>& hidden_widths) {
    std::vector<std::size_t> chain;
    chain.push_back(1);
    for (std::size_t w : hidden_widths) {
        if (w == 0) throw ValidationError("DenoiserParams: zero channel width");
        chain.push_back(w);
    }
    chain.push_back(1);
    std::vector<ConvLayer> layers(chain.size() - 1);
    for (std::size_t l = 0; l + 1 < chain.size(); ++l) {
        layers[l].in_ch = chain[l];
        layers[l].out_ch = chain[l + 1];
        layers[l].w.assign(chain[l] * chain[l + 1] * 9, 0.0);
        layers[l].b.assign(chain[l + 1], 0.0);
    }
    return layers;
}

// symmetric 1-px pad (edge mirror); width-1 case coincides with edge clamp
void pad_plane(const double* src, std::size_t n, double* dst) {
    const std::size_t np = n + 2;
    for (std::size_t py = 0; py < np; ++py) {
        const std::size_t sy = py == 0 ? 0 : (py >= n + 1 ? n - 1 : py - 1);
        const double* srow = src + sy * n;
        double* drow = dst + py * np;
        drow[0] = srow[0];
        std::memcpy(drow + 1, srow, n * sizeof(double));
        drow[np - 1] = srow[n - 1];
    }
}

// adjoint of pad_plane: fold the ring back onto the edge pixels
void fold_plane(const double* pad, std::size_t n, double* dst) {
    const std::size_t np = n + 2;
    for (std::size_t i = 0; i < n * n; ++i) dst[i] = 0.0;
    for (std::size_t py = 0; py < np; ++py) {
        const std::size_t sy = py == 0 ? 0 : (py >= n + 1 ? n - 1 : py - 1);
        const double* prow = pad + py * np;
        double* drow = dst + sy * n;
        drow[0] += prow[0];
        for (std::size_t x = 0; x < n; ++x) drow[x] += prow[x + 1];
        drow[n - 1] += prow[np - 1];
    }
}

}  // namespace

DenoiserParams DenoiserParams::zeros(const std::vector<std::size_t>& hidden_widths) {
    DenoiserParams p;
    p.layers_ = make_layers(hidden_widths);
    return p;
}

DenoiserParams DenoiserParams::zeros_like(const DenoiserParams& other) {
    DenoiserParams p;
    p.layers_ = other.layers_;
    for (auto& l : p.layers_) {
        std::fill(l.w.begin(), l.w.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
    return p;
}

DenoiserParams DenoiserParams::init(const std::vector<std::size_t>& hidden_widths,
                                    std::uint64_t seed) {
    DenoiserParams p = zeros(hidden_widths);
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < p.layers_.size(); ++l) {  // final layer stays zero
        auto& layer = p.layers_[l];
        const double limit = std::sqrt(1.0 / (static_cast<double>(layer.in_ch) * 9.0));
        for (auto& w : layer.w) w = rng.uniform(-limit, limit);
    }
    return p;
}

std::size_t DenoiserParams::parameter_count() const {
    std::size_t count = 0;
    for (const auto& l : layers_) count += l.w.size() + l.b.size();
    return count;
}

std::vector<std::size_t> DenoiserParams::hidden_widths() const {
    std::vector<std::size_t> widths;
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) widths.push_back(layers_[l].out_ch);
    return widths;
}

void DenoiserParams::check_valid() const {
    if (layers_.empty()) throw ShapeMismatch("DenoiserParams: no layers");
    if (layers_.front().in_ch != 1 || layers_.back().out_ch != 1)
        throw ShapeMismatch("DenoiserParams: channel chain must run 1 -> ... -> 1");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        if (l > 0 && layer.in_ch != layers_[l - 1].out_ch)
            throw ShapeMismatch("DenoiserParams: layer " + std::to_string(l) + " breaks the chain");
        if (layer.w.size() != layer.in_ch * layer.out_ch * 9 || layer.b.size() != layer.out_ch)
            throw ShapeMismatch("DenoiserParams: layer " + std::to_string(l) + " has wrong buffers");
        for (double v : layer.w)
            if (!std::isfinite(v)) throw ValidationError("DenoiserParams: non-finite weight");
        for (double v : layer.b)
            if (!std::isfinite(v)) throw ValidationError("DenoiserParams: non-finite bias");
    }
}

std::vector<double> DenoiserParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& l : layers_) {
        flat.insert(flat.end(), l.w.begin(), l.w.end());
        flat.insert(flat.end(), l.b.begin(), l.b.end());
    }
    return flat;
}

void DenoiserParams::from_flat(const std::vector<double>& flat) {
    if (flat.size() != parameter_count())
        throw ShapeMismatch("DenoiserParams::from_flat: size mismatch");
    std::size_t pos = 0;
    for (auto& l : layers_) {
        std::copy_n(flat.begin() + pos, l.w.size(), l.w.begin());
        pos += l.w.size();
        std::copy_n(flat.begin() + pos, l.b.size(), l.b.begin());
        pos += l.b.size();
    }
}

void DenoiserParams::save(const std::string& path) const {
    check_valid();
    json header;
    header["layers"] = json::array();
    for (const auto& l : layers_) header["layers"].push_back({{"in", l.in_ch}, {"out", l.out_ch}});
    header["kernel"] = 3;
    header["activation"] = "relu";
    header["residual"] = true;
    header["epochs_trained"] = epochs_trained;
    const std::string text = header.dump();

    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os.write("KSNN", 4);
    const std::uint8_t version = 1;
    os.write(reinterpret_cast<const char*>(&version), 1);
    const auto len = static_cast<std::uint32_t>(text.size());
    os.write(reinterpret_cast<const char*>(&len), 4);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    const std::vector<double> flat = to_flat();
    std::vector<float> buf(flat.begin(), flat.end());
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!os) throw IoError("write failed: " + path);
}

DenoiserParams DenoiserParams::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "KSNN", 4) != 0) throw IoError("not a KSNN checkpoint: " + path);
    std::uint8_t version = 0;
    is.read(reinterpret_cast<char*>(&version), 1);
    if (version != 1) throw IoError("unsupported KSNN version in " + path);
    std::uint32_t len = 0;
    is.read(reinterpret_cast<char*>(&len), 4);
    std::string text(len, '\0');
    is.read(text.data(), len);
    if (!is) throw IoError("truncated KSNN header: " + path);

    json header;
    try {
        header = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("KSNN header parse error: ") + e.what());
    }
    std::vector<std::size_t> hidden;
    try {
        const auto& layers = header.at("layers");
        for (std::size_t l = 0; l + 1 < layers.size(); ++l)
            hidden.push_back(layers[l].at("out").get<std::size_t>());
        DenoiserParams p = zeros(hidden);
        p.epochs_trained = header.value("epochs_trained", 0);
        std::vector<float> buf(p.parameter_count());
        is.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!is) throw IoError("truncated KSNN payload: " + path);
        p.from_flat(std::vector<double>(buf.begin(), buf.end()));
        p.check_valid();
        return p;
    } catch (const json::exception& e) {
        throw IoError(std::string("KSNN header structure error: ") + e.what());
    }
}

namespace {

// Scratch buffers are reused across calls (per thread): the large planes
// would otherwise be re-faulted from the OS on every forward/backward.
struct ConvWorkspace {
    std::vector<double> act, next, pad, in_act, in_pad, gin_pad, gin, gout;
};

ConvWorkspace& workspace() {
    thread_local ConvWorkspace ws;
    return ws;
}

// out[oc] = b[oc] + sum_ic w[oc][ic] (*) padded(in[ic]); planes are n*n.
// One pass per output row with the 3x3 stencil in registers; rows are
// independent, so the parallel loop stays bitwise deterministic.
void conv_layer_forward(const ConvLayer& layer, const std::vector<double>& in_planes,
                        std::size_t n, std::vector<double>& out_planes,
                        std::vector<double>& pad_scratch) {
    const std::size_t np = n + 2;
    pad_scratch.resize(layer.in_ch * np * np);
    for (std::size_t ic = 0; ic < layer.in_ch; ++ic)
        pad_plane(in_planes.data() + ic * n * n, n, pad_scratch.data() + ic * np * np);
    out_planes.resize(layer.out_ch * n * n);  // the bias fill covers every element
    const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t y = 0; y < rows; ++y) {
        for (std::size_t oc = 0; oc < layer.out_ch; ++oc) {
            double* __restrict__ orow = out_planes.data() + oc * n * n + static_cast<std::size_t>(y) * n;
            const double bias = layer.b[oc];
            for (std::size_t x = 0; x < n; ++x) orow[x] = bias;
            for (std::size_t ic = 0; ic < layer.in_ch; ++ic) {
                const double* kw = layer.w.data() + (oc * layer.in_ch + ic) * 9;
                const double w00 = kw[0], w01 = kw[1], w02 = kw[2];
                const double w10 = kw[3], w11 = kw[4], w12 = kw[5];
                const double w20 = kw[6], w21 = kw[7], w22 = kw[8];
                const double* __restrict__ p0 =
                    pad_scratch.data() + ic * np * np + static_cast<std::size_t>(y) * np;
                const double* __restrict__ p1 = p0 + np;
                const double* __restrict__ p2 = p1 + np;
                for (std::size_t x = 0; x < n; ++x) {
                    orow[x] += w00 * p0[x] + w01 * p0[x + 1] + w02 * p0[x + 2] +
                               w10 * p1[x] + w11 * p1[x + 1] + w12 * p1[x + 2] +
                               w20 * p2[x] + w21 * p2[x + 1] + w22 * p2[x + 2];
                }
            }
        }
    }
}

}  // namespace

Image denoise_forward(const DenoiserParams& params, const Image& x, ActivationRecord* tape) {
    params.check_valid();
    const std::size_t n = x.size();
    if (n < 8) throw ShapeMismatch("denoise_forward: image side must be >= 8");

    if (tape) {
        tape->n = n;
        tape->input = x.pixels();
        tape->preact.clear();
        tape->layer_dims.clear();
    }

    ConvWorkspace& ws = workspace();
    ws.act.assign(x.pixels().begin(), x.pixels().end());  // 1 channel
    const std::size_t num_layers = params.layers().size();
    for (std::size_t l = 0; l < num_layers; ++l) {
        const auto& layer = params.layers()[l];
        conv_layer_forward(layer, ws.act, n, ws.next, ws.pad);
        if (tape) {
            tape->preact.push_back(ws.next);
            tape->layer_dims.emplace_back(layer.in_ch, layer.out_ch);
        }
        if (l + 1 < num_layers) {
            for (auto& v : ws.next) v = v > 0.0 ? v : 0.0;  // rectifier, derivative(0) = 0
        }
        ws.act.swap(ws.next);
    }

    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n * n; ++i) out[i] = x.pixels()[i] + ws.act[i];
    return Image(n, x.dfov_cm(), std::move(out));
}

DenoiserParams denoise_backward(const DenoiserParams& params, const ActivationRecord& tape,
                                const Image& upstream, Image* grad_x) {
    params.check_valid();
    const std::size_t n = tape.n;
    if (upstream.size() != n) throw ShapeMismatch("denoise_backward: upstream size mismatch");
    const std::size_t num_layers = params.layers().size();
    if (tape.preact.size() != num_layers || tape.layer_dims.size() != num_layers)
        throw TapeMismatch("denoise_backward: tape does not match a forward pass");
    for (std::size_t l = 0; l < num_layers; ++l) {
        const auto& layer = params.layers()[l];
        if (tape.layer_dims[l] != std::make_pair(layer.in_ch, layer.out_ch) ||
            tape.preact[l].size() != layer.out_ch * n * n)
            throw TapeMismatch("denoise_backward: tape layer " + std::to_string(l) +
                               " does not match params");
    }

    DenoiserParams grads = DenoiserParams::zeros_like(params);
    const std::size_t np = n + 2;

    ConvWorkspace& ws = workspace();
    auto& gout = ws.gout;
    auto& in_act = ws.in_act;
    auto& in_pad = ws.in_pad;
    auto& gin_pad = ws.gin_pad;
    auto& gin = ws.gin;
    gout.assign(upstream.pixels().begin(), upstream.pixels().end());  // grad w.r.t. layer output
    for (std::size_t l = num_layers; l-- > 0;) {
        const auto& layer = params.layers()[l];
        auto& glayer = grads.layers()[l];

        if (l == 0) {
            in_act.assign(tape.input.begin(), tape.input.end());
        } else {
            in_act.assign(tape.preact[l - 1].begin(), tape.preact[l - 1].end());
            for (auto& v : in_act) v = v > 0.0 ? v : 0.0;
        }
        in_pad.resize(layer.in_ch * np * np);
        for (std::size_t ic = 0; ic < layer.in_ch; ++ic)
            pad_plane(in_act.data() + ic * n * n, n, in_pad.data() + ic * np * np);

        const auto out_ch = static_cast<std::ptrdiff_t>(layer.out_ch);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t oc = 0; oc < out_ch; ++oc) {
            const double* g = gout.data() + static_cast<std::size_t>(oc) * n * n;
            double bsum = 0.0;
            for (std::size_t i = 0; i < n * n; ++i) bsum += g[i];
            glayer.b[static_cast<std::size_t>(oc)] = bsum;
            for (std::size_t ic = 0; ic < layer.in_ch; ++ic) {
                double* gw = glayer.w.data() + (static_cast<std::size_t>(oc) * layer.in_ch + ic) * 9;
                const double* pad = in_pad.data() + ic * np * np;
                double a00 = 0, a01 = 0, a02 = 0, a10 = 0, a11 = 0, a12 = 0, a20 = 0, a21 = 0,
                       a22 = 0;
                for (std::size_t y = 0; y < n; ++y) {
                    const double* __restrict__ p0 = pad + y * np;
                    const double* __restrict__ p1 = p0 + np;
                    const double* __restrict__ p2 = p1 + np;
                    const double* __restrict__ grow = g + y * n;
                    for (std::size_t x = 0; x < n; ++x) {
                        const double gv = grow[x];
                        a00 += gv * p0[x];
                        a01 += gv * p0[x + 1];
                        a02 += gv * p0[x + 2];
                        a10 += gv * p1[x];
                        a11 += gv * p1[x + 1];
                        a12 += gv * p1[x + 2];
                        a20 += gv * p2[x];
                        a21 += gv * p2[x + 1];
                        a22 += gv * p2[x + 2];
                    }
                }
                gw[0] = a00;
                gw[1] = a01;
                gw[2] = a02;
                gw[3] = a10;
                gw[4] = a11;
                gw[5] = a12;
                gw[6] = a20;
                gw[7] = a21;
                gw[8] = a22;
            }
        }

        // gradient w.r.t. the padded input: gin_pad[py][px] = sum over valid
        // (ky, kx) of w[ky][kx] * gout[py-ky][px-kx]; gathered per row so the
        // parallel loop stays deterministic
        gin_pad.assign(layer.in_ch * np * np, 0.0);
        const auto in_ch = static_cast<std::ptrdiff_t>(layer.in_ch);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ic = 0; ic < in_ch; ++ic) {
            double* gp = gin_pad.data() + static_cast<std::size_t>(ic) * np * np;
            for (std::size_t oc = 0; oc < layer.out_ch; ++oc) {
                const double* kw = layer.w.data() + (oc * layer.in_ch + static_cast<std::size_t>(ic)) * 9;
                const double* g = gout.data() + oc * n * n;
                for (std::size_t py = 0; py < np; ++py) {
                    double* dst = gp + py * np;
                    for (std::size_t ky = 0; ky < 3; ++ky) {
                        if (py < ky || py - ky >= n) continue;
                        const double* __restrict__ grow = g + (py - ky) * n;
                        const double* w3 = kw + ky * 3;
                        for (std::size_t kx = 0; kx < 3; ++kx) {
                            const double wv = w3[kx];
                            if (wv == 0.0) continue;
                            double* __restrict__ drow = dst + kx;
                            for (std::size_t x = 0; x < n; ++x) drow[x] += wv * grow[x];
                        }
                    }
                }
            }
        }
        gin.resize(layer.in_ch * n * n);
        for (std::size_t ic = 0; ic < layer.in_ch; ++ic)
            fold_plane(gin_pad.data() + ic * np * np, n, gin.data() + ic * n * n);

        if (l > 0) {
            const auto& pre = tape.preact[l - 1];
            for (std::size_t i = 0; i < gin.size(); ++i) gin[i] = pre[i] > 0.0 ? gin[i] : 0.0;
            gout.swap(gin);
        } else if (grad_x) {
            std::vector<double> gx(n * n);
            for (std::size_t i = 0; i < n * n; ++i) gx[i] = upstream.pixels()[i] + gin[i];
            *grad_x = Image(n, upstream.dfov_cm(), std::move(gx));
        }
    }
    return grads;
}

Image baseline_denoiser(BaselineKind kind, double sigma_px, const Image& x) {
    if (kind == BaselineKind::Identity) return x;
    if (!(sigma_px > 0.0)) throw ValidationError("baseline_denoiser: sigma_px must be > 0");
    const std::size_t n = x.size();
    Spectrum spec = fft2(x);
    const FrequencyGrid grid(n, static_cast<double>(n));  // unit pixel spacing
    const double c = 2.0 * M_PI * M_PI * sigma_px * sigma_px;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const double f = grid.frequency_at(u, v);  // cycles per pixel
            spec.bins[u * n + v] *= std::exp(-c * f * f);
        }
    }
    return ifft2(spec, x.dfov_cm());
}

}  // namespace ksynth
