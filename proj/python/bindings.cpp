#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ksynth/denoiser.hpp"
#include "ksynth/errors.hpp"
#include "ksynth/evaluation.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/forward_model.hpp"
#include "ksynth/image.hpp"
#include "ksynth/mtf.hpp"
#include "ksynth/phantoms.hpp"
#include "ksynth/solver.hpp"
#include "ksynth/threads.hpp"

namespace py = pybind11;
using namespace ksynth;

namespace {

Image image_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
                       double dfov_cm) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
        throw SizeMismatch("expected a square 2D array");
    const auto n = static_cast<std::size_t>(arr.shape(0));
    std::vector<double> pixels(arr.data(), arr.data() + n * n);
    return Image(n, dfov_cm, std::move(pixels));
}

py::array_t<double> image_to_numpy(const Image& img) {
    const auto n = static_cast<py::ssize_t>(img.size());
    py::array_t<double> arr({n, n});
    std::copy(img.pixels().begin(), img.pixels().end(), arr.mutable_data());
    return arr;
}

py::array_t<double> filter_to_numpy(const TransferFilter& filter) {
    const auto n = static_cast<py::ssize_t>(filter.grid.size());
    py::array_t<double> arr({n, n});
    std::copy(filter.values.begin(), filter.values.end(), arr.mutable_data());
    return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Image-domain CT reconstruction-kernel synthesis";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_IOError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<Image>(m, "Image")
        .def(py::init(&image_from_numpy), py::arg("pixels"), py::arg("dfov_cm"))
        .def_property_readonly("size", &Image::size)
        .def_property_readonly("dfov_cm", &Image::dfov_cm)
        .def_property_readonly("pixel_spacing_cm", &Image::pixel_spacing_cm)
        .def("to_numpy", &image_to_numpy)
        .def("__repr__", [](const Image& img) {
            return "<ksynth.Image " + std::to_string(img.size()) + "x" + std::to_string(img.size()) +
                   " dfov=" + std::to_string(img.dfov_cm()) + " cm>";
        });

    m.def("load_ksim", &load_ksim, py::arg("path"));
    m.def("save_ksim", &save_ksim, py::arg("path"), py::arg("image"));

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def(py::init<std::size_t, double>(), py::arg("n"), py::arg("dfov_cm"))
        .def_property_readonly("size", &FrequencyGrid::size)
        .def_property_readonly("dfov_cm", &FrequencyGrid::dfov_cm)
        .def_property_readonly("nyquist_lp_per_cm", &FrequencyGrid::nyquist_lp_per_cm)
        .def("frequency_at", &FrequencyGrid::frequency_at, py::arg("u"), py::arg("v"));

    py::class_<KernelMtfProfile>(m, "KernelMtfProfile")
        .def_static("smooth_gaussian", &KernelMtfProfile::smooth_gaussian, py::arg("f0"),
                    py::arg("p"))
        .def_static("sharp_boosted", &KernelMtfProfile::sharp_boosted, py::arg("f0"), py::arg("p"),
                    py::arg("beta"), py::arg("f_beta"))
        .def_static("tabulated", &KernelMtfProfile::tabulated, py::arg("samples"))
        .def_static("builtin_smooth", &KernelMtfProfile::builtin_smooth)
        .def_static("builtin_sharp", &KernelMtfProfile::builtin_sharp)
        .def_static("resolve", &KernelMtfProfile::resolve, py::arg("spec"))
        .def("__call__", &KernelMtfProfile::operator(), py::arg("f_lp_per_cm"))
        .def("to_json", &KernelMtfProfile::to_json);

    m.def(
        "sample_on_grid",
        [](const KernelMtfProfile& p, std::size_t n, double dfov) {
            return filter_to_numpy(sample_on_grid(p, FrequencyGrid(n, dfov)));
        },
        py::arg("profile"), py::arg("n"), py::arg("dfov_cm"));
    m.def(
        "ratio_filter",
        [](const KernelMtfProfile& in, const KernelMtfProfile& tgt, std::size_t n, double dfov,
           double eps) { return filter_to_numpy(ratio_filter(in, tgt, FrequencyGrid(n, dfov), eps)); },
        py::arg("input_mtf"), py::arg("target_mtf"), py::arg("n"), py::arg("dfov_cm"),
        py::arg("eps"));

    py::class_<ForwardOperator>(m, "ForwardOperator")
        .def("apply_h", &ForwardOperator::apply_h, py::arg("x"))
        .def("apply_h_adjoint", &ForwardOperator::apply_h_adjoint, py::arg("y"))
        .def("tikhonov_init",
             py::overload_cast<const Image&, double>(&ForwardOperator::tikhonov_init, py::const_),
             py::arg("y"), py::arg("lambda0"))
        .def("dc_step",
             py::overload_cast<const Image&, const Image&, double>(&ForwardOperator::dc_step,
                                                                   py::const_),
             py::arg("y"), py::arg("z"), py::arg("lambda_k"))
        .def_property_readonly("min_lambda", &ForwardOperator::min_lambda);

    m.def(
        "make_forward_operator",
        [](const KernelMtfProfile& in, const KernelMtfProfile& tgt, std::size_t n, double dfov,
           double eps) { return make_forward_operator(in, tgt, FrequencyGrid(n, dfov), eps); },
        py::arg("input_kernel"), py::arg("target_kernel"), py::arg("n"), py::arg("dfov_cm"),
        py::arg("eps") = 1e-4);

    m.def(
        "direct_ratio_synthesis",
        [](const Image& y, const KernelMtfProfile& in, const KernelMtfProfile& tgt, double eps) {
            return direct_ratio_synthesis(
                y, ratio_filter(in, tgt, FrequencyGrid(y.size(), y.dfov_cm()), eps));
        },
        py::arg("y"), py::arg("input_mtf"), py::arg("target_mtf"), py::arg("eps") = 1e-4);

    m.def("shepp_logan", &shepp_logan, py::arg("n"), py::arg("dfov_cm"));
    m.def("wire_phantom", &wire_phantom, py::arg("n"), py::arg("dfov_cm"),
          py::arg("amplitude") = 1.0);
    m.def(
        "water_phantom",
        [](std::size_t n, double dfov, double sigma, const KernelMtfProfile& prof, double ramp,
           std::uint64_t seed, double background) {
            return water_phantom(n, dfov, NoiseModel{sigma, prof, ramp}, seed, background);
        },
        py::arg("n"), py::arg("dfov_cm"), py::arg("sigma") = 0.0,
        py::arg("shaping_profile") = KernelMtfProfile::builtin_smooth(),
        py::arg("ramp_exponent") = 1.0, py::arg("seed") = 0, py::arg("background") = -1000.0);
    m.def(
        "shaped_noise",
        [](std::size_t n, double dfov, double sigma, const KernelMtfProfile& prof, double ramp,
           std::uint64_t seed) {
            return shaped_noise(FrequencyGrid(n, dfov), NoiseModel{sigma, prof, ramp}, seed);
        },
        py::arg("n"), py::arg("dfov_cm"), py::arg("sigma"),
        py::arg("shaping_profile") = KernelMtfProfile::builtin_smooth(),
        py::arg("ramp_exponent") = 1.0, py::arg("seed") = 0);
    m.def(
        "make_training_pair",
        [](const Image& gt, const KernelMtfProfile& in, const KernelMtfProfile& tgt, double sigma,
           double ramp, std::uint64_t seed) {
            auto pair = make_training_pair(gt, in, tgt, NoiseModel{sigma, in, ramp}, seed);
            return py::make_tuple(pair.input, pair.target);
        },
        py::arg("ground_truth"), py::arg("input_mtf"), py::arg("target_mtf"), py::arg("sigma"),
        py::arg("ramp_exponent") = 1.0, py::arg("seed") = 0);

    py::class_<DenoiserParams>(m, "DenoiserParams")
        .def_static("init", &DenoiserParams::init, py::arg("hidden_widths"), py::arg("seed"))
        .def_static("zeros", &DenoiserParams::zeros, py::arg("hidden_widths"))
        .def_static("load", &DenoiserParams::load, py::arg("path"))
        .def("save", &DenoiserParams::save, py::arg("path"))
        .def_property_readonly("parameter_count", &DenoiserParams::parameter_count)
        .def_readwrite("epochs_trained", &DenoiserParams::epochs_trained);

    m.def(
        "denoise_forward",
        [](const DenoiserParams& p, const Image& x) { return denoise_forward(p, x, nullptr); },
        py::arg("params"), py::arg("x"));

    m.def(
        "synthesize",
        [](const Image& y, const ForwardOperator& op, const DenoiserParams& params, int unrolls,
           double lambda0, double decay, const std::string& init) {
            UnrollConfig cfg;
            cfg.unrolls = unrolls;
            cfg.lambda0 = lambda0;
            cfg.decay = decay;
            cfg.init = init == "input-copy" ? InitMode::InputCopy : InitMode::Tikhonov;
            return synthesize(y, op, params, cfg);
        },
        py::arg("y"), py::arg("op"), py::arg("params"), py::arg("unrolls") = 5,
        py::arg("lambda0") = 0.5, py::arg("decay") = 0.9, py::arg("init") = "tikhonov");

    py::class_<MtfCurve>(m, "MtfCurve")
        .def_readonly("freq_lp_per_cm", &MtfCurve::freq_lp_per_cm)
        .def_readonly("mtf", &MtfCurve::mtf)
        .def_readonly("dfov_cm", &MtfCurve::dfov_cm)
        .def_readonly("source", &MtfCurve::source)
        .def("save_csv", &MtfCurve::save_csv, py::arg("path"))
        .def_static("load_csv", &MtfCurve::load_csv, py::arg("path"));

    m.def(
        "estimate_mtf",
        [](const Image& wire, std::size_t roi_half_width, const std::string& window) {
            return estimate_mtf(wire, roi_half_width,
                                window == "hann" ? MtfWindow::Hann : MtfWindow::None);
        },
        py::arg("wire_image"), py::arg("roi_half_width") = 32, py::arg("window") = "none");
    m.def("mtf_fidelity", &mtf_fidelity, py::arg("estimated"), py::arg("reference"),
          py::arg("f_lo"), py::arg("f_hi"));
    m.def("curve_from_profile", &curve_from_profile, py::arg("profile"), py::arg("dfov_cm"),
          py::arg("f_max"), py::arg("samples") = 128, py::arg("source_tag") = "reference");

    m.def("ssim", py::overload_cast<const Image&, const Image&>(&ssim), py::arg("a"), py::arg("b"));
    m.def(
        "image_metrics",
        [](const Image& pred, const Image& target) {
            const ImageMetrics im = image_metrics(pred, target);
            py::dict d;
            d["mse"] = im.mse;
            d["psnr"] = im.psnr;
            d["ssim"] = im.ssim;
            return d;
        },
        py::arg("pred"), py::arg("target"));

    m.def("fft2_magnitude",
          [](const Image& img) {
              const Spectrum s = fft2(img);
              const auto n = static_cast<py::ssize_t>(s.n);
              py::array_t<double> arr({n, n});
              auto* out = arr.mutable_data();
              for (std::size_t i = 0; i < s.bins.size(); ++i) out[i] = std::abs(s.bins[i]);
              return arr;
          },
          py::arg("image"));

    m.def("set_max_threads", &set_max_threads, py::arg("n"));
}
