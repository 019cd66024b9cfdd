// ksynth command-line front end: phantom/dataset generation, training,
// synthesis, MTF estimation and metric export. Every run is reproducible
// from its flags + seed; the effective configuration is echoed to a JSON
// sidecar next to the outputs.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksynth/errors.hpp"
#include "ksynth/evaluation.hpp"
#include "ksynth/fft.hpp"
#include "ksynth/forward_model.hpp"
#include "ksynth/image.hpp"
#include "ksynth/mtf.hpp"
#include "ksynth/phantoms.hpp"
#include "ksynth/png_io.hpp"
#include "ksynth/rng.hpp"
#include "ksynth/solver.hpp"
#include "ksynth/threads.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ksynth;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string config_path;
    json config;  // loaded from --config, overlays unset flags
};

// flags override the config file; the file overrides built-in defaults
template <typename T>
void overlay(const GlobalOpts& g, const CLI::Option* opt, const std::string& key, T& value) {
    if (opt->count() == 0 && g.config.contains(key)) value = g.config.at(key).get<T>();
}

void write_sidecar(const std::string& out_path, const json& effective) {
    std::ofstream os(out_path);
    if (!os) throw IoError("cannot write config sidecar: " + out_path);
    os << effective.dump(2) << "\n";
}

json base_config(const std::string& command, const GlobalOpts& g) {
    return json{{"command", command}, {"seed", g.seed}, {"threads", g.threads}};
}

struct GenPhantomCmd {
    std::string kind;
    std::size_t n = 256;
    double dfov = 10.0;
    std::string out;
    double amplitude = 1.0;
    double sigma = 0.0;
    double ramp = 1.0;
    std::string noise_profile = "builtin:smooth";
    double background = -1000.0;
    bool png = false;

    int run(const GlobalOpts& g) const {
        Image img = [&] {
            if (kind == "shepp-logan") return shepp_logan(n, dfov);
            if (kind == "wire") return wire_phantom(n, dfov, amplitude);
            if (kind == "water") {
                NoiseModel model{sigma, KernelMtfProfile::resolve(noise_profile), ramp};
                return water_phantom(n, dfov, model, g.seed, background);
            }
            throw ValidationError("gen-phantom: unknown kind " + kind);
        }();
        save_ksim(out, img);
        if (png) save_png16(out + ".png", img);
        json cfg = base_config("gen-phantom", g);
        cfg.update(json{{"kind", kind},
                        {"n", n},
                        {"dfov", dfov},
                        {"out", out},
                        {"amplitude", amplitude},
                        {"sigma", sigma},
                        {"ramp", ramp},
                        {"noise-profile", noise_profile},
                        {"background", background}});
        write_sidecar(out + ".config.json", cfg);
        std::cout << "wrote " << out << " (" << n << "x" << n << ", dfov " << dfov << " cm)\n";
        return 0;
    }
};

struct SimulateDatasetCmd {
    std::size_t count = 8;
    std::size_t n = 64;
    std::vector<double> dfov_list = {5.0, 10.0, 15.0, 20.0};
    std::string input_profile = "builtin:smooth";
    std::string target_profile = "builtin:sharp";
    double sigma = 0.02;
    double ramp = 1.0;
    bool rotate = true;
    std::string out_dir;

    int run(const GlobalOpts& g) const {
        if (dfov_list.empty()) throw ValidationError("simulate-dataset: empty dfov list");
        const KernelMtfProfile in_prof = KernelMtfProfile::resolve(input_profile);
        const KernelMtfProfile tgt_prof = KernelMtfProfile::resolve(target_profile);
        fs::create_directories(out_dir);

        DatasetManifest manifest;
        manifest.pairs.resize(count);
        const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < total; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double dfov = dfov_list[idx % dfov_list.size()];
            const std::uint64_t pair_seed = Rng::splitmix64_mix(g.seed + 0x1000 + idx);
            Rng gt_rng(pair_seed, 7);
            const double rot = rotate ? gt_rng.uniform(0.0, 360.0) : 0.0;
            const Image gt = shepp_logan_variant(n, dfov, rot, 1.0);
            const NoiseModel model{sigma, in_prof, ramp};
            const TrainingPair pair = make_training_pair(gt, in_prof, tgt_prof, model, pair_seed);

            char name[64];
            std::snprintf(name, sizeof(name), "pair_%05zu", idx);
            const std::string in_path = std::string(name) + "_input.ksim";
            const std::string tgt_path = std::string(name) + "_target.ksim";
            save_ksim((fs::path(out_dir) / in_path).string(), pair.input);
            save_ksim((fs::path(out_dir) / tgt_path).string(), pair.target);
            manifest.pairs[idx] = {in_path, tgt_path, dfov, pair_seed};
        }
        const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
        manifest.save(manifest_path);

        json cfg = base_config("simulate-dataset", g);
        cfg.update(json{{"count", count},
                        {"n", n},
                        {"dfov-list", dfov_list},
                        {"input-profile", input_profile},
                        {"target-profile", target_profile},
                        {"sigma", sigma},
                        {"ramp", ramp},
                        {"rotate", rotate},
                        {"out-dir", out_dir}});
        write_sidecar((fs::path(out_dir) / "config.json").string(), cfg);
        std::cout << "wrote " << count << " pairs to " << out_dir << " (manifest "
                  << manifest_path << ")\n";
        return 0;
    }
};

struct TrainCmd {
    std::string manifest_path;
    std::string mode = "modl";
    int epochs = 30;
    double lr = 1e-4;
    int batch = 8;
    double w_ssim = 0.1;
    int unrolls = 5;
    double lambda0 = 0.5;
    double decay = 0.9;
    double eps = 1e-4;
    std::string input_profile = "builtin:smooth";
    std::string target_profile = "builtin:sharp";
    std::vector<std::size_t> hidden = {16, 16};
    std::string out;
    std::string log_path;
    std::string resume;
    int checkpoint_every = 0;
    bool stop_dc_grad = false;
    double lambda_epoch_decay = 1.0;

    int run(const GlobalOpts& g) const {
        const DatasetManifest manifest = DatasetManifest::load(manifest_path);
        if (manifest.pairs.empty()) throw EmptyDataset("train: manifest has no pairs");
        const std::string manifest_dir = fs::path(manifest_path).parent_path().string();
        const std::vector<TrainingPair> pairs = load_dataset(manifest, manifest_dir);

        TrainConfig tcfg;
        tcfg.epochs = epochs;
        tcfg.learning_rate = lr;
        tcfg.batch_size = batch;
        tcfg.w_ssim = w_ssim;
        tcfg.mode = mode == "direct" ? TrainMode::DirectLearning : TrainMode::ModelBased;
        tcfg.dc_gradient = stop_dc_grad ? DcGradientMode::PassThrough : DcGradientMode::Exact;
        tcfg.hidden_widths = hidden;
        tcfg.lambda_epoch_decay = lambda_epoch_decay;
        UnrollConfig ucfg;
        ucfg.unrolls = unrolls;
        ucfg.lambda0 = lambda0;
        ucfg.decay = decay;

        std::optional<DenoiserParams> initial;
        if (!resume.empty()) initial = DenoiserParams::load(resume);

        const std::string log_file = log_path.empty() ? out + ".log.csv" : log_path;
        std::ofstream log(log_file);
        if (!log) throw IoError("cannot write training log: " + log_file);
        log << "epoch,mean_loss,mean_mse,mean_ssim\n";
        log.precision(10);

        const auto factory = make_operator_factory(KernelMtfProfile::resolve(input_profile),
                                                   KernelMtfProfile::resolve(target_profile), eps);
        const TrainResult result = train(
            pairs, factory, tcfg, ucfg, g.seed, std::move(initial),
            [&](const EpochStats& s, const DenoiserParams& p) {
                log << s.epoch << "," << s.mean_loss << "," << s.mean_mse << "," << s.mean_ssim
                    << "\n";
                log.flush();
                if (checkpoint_every > 0 && (s.epoch + 1) % checkpoint_every == 0)
                    p.save(out + ".epoch" + std::to_string(s.epoch) + ".ksnn");
                std::cout << "epoch " << s.epoch << "  loss " << s.mean_loss << "  mse " << s.mean_mse
                          << "\n";
            });
        result.params.save(out);

        json cfg = base_config("train", g);
        cfg.update(json{{"manifest", manifest_path},
                        {"mode", mode},
                        {"epochs", epochs},
                        {"lr", lr},
                        {"batch", batch},
                        {"w-ssim", w_ssim},
                        {"unrolls", unrolls},
                        {"lambda0", lambda0},
                        {"decay", decay},
                        {"eps", eps},
                        {"input-profile", input_profile},
                        {"target-profile", target_profile},
                        {"hidden", hidden},
                        {"out", out},
                        {"log", log_file},
                        {"resume", resume},
                        {"checkpoint-every", checkpoint_every},
                        {"stop-dc-grad", stop_dc_grad},
                        {"lambda-epoch-decay", lambda_epoch_decay}});
        write_sidecar(out + ".config.json", cfg);
        std::cout << "wrote checkpoint " << out << " after "
                  << (result.log.empty() ? 0 : result.log.back().epoch + 1) << " epochs\n";
        return 0;
    }
};

struct SynthesizeCmd {
    std::string input;
    std::string method = "modl";
    std::string checkpoint;
    std::string input_profile = "builtin:smooth";
    std::string target_profile = "builtin:sharp";
    double eps = 1e-4;
    double lambda0 = 0.5;
    double decay = 0.9;
    int unrolls = 5;
    std::string out;
    std::string reference;
    bool png = false;

    int run(const GlobalOpts& g) const {
        const Image y = load_ksim(input);
        const FrequencyGrid grid(y.size(), y.dfov_cm());
        const KernelMtfProfile in_prof = KernelMtfProfile::resolve(input_profile);
        const KernelMtfProfile tgt_prof = KernelMtfProfile::resolve(target_profile);

        Image result = [&] {
            if (method == "direct")
                return direct_ratio_synthesis(y, ratio_filter(in_prof, tgt_prof, grid, eps));
            const ForwardOperator op = make_forward_operator(in_prof, tgt_prof, grid, eps);
            if (method == "tikhonov") return op.tikhonov_init(y, lambda0);
            if (method == "modl") {
                if (checkpoint.empty())
                    throw ValidationError("synthesize: --checkpoint required for method modl");
                UnrollConfig ucfg;
                ucfg.unrolls = unrolls;
                ucfg.lambda0 = lambda0;
                ucfg.decay = decay;
                return synthesize(y, op, DenoiserParams::load(checkpoint), ucfg);
            }
            if (method == "direct-learning") {
                if (checkpoint.empty())
                    throw ValidationError(
                        "synthesize: --checkpoint required for method direct-learning");
                return denoise_forward(DenoiserParams::load(checkpoint), y);
            }
            throw ValidationError("synthesize: unknown method " + method);
        }();

        save_ksim(out, result);
        if (png) save_png16(out + ".png", result);
        json cfg = base_config("synthesize", g);
        cfg.update(json{{"input", input},
                        {"method", method},
                        {"checkpoint", checkpoint},
                        {"input-profile", input_profile},
                        {"target-profile", target_profile},
                        {"eps", eps},
                        {"lambda0", lambda0},
                        {"decay", decay},
                        {"unrolls", unrolls},
                        {"out", out}});
        write_sidecar(out + ".config.json", cfg);

        if (!reference.empty()) {
            const ImageMetrics m = image_metrics(result, load_ksim(reference));
            json out_metrics{{"mse", m.mse}, {"psnr", m.psnr}, {"ssim", m.ssim}};
            std::cout << out_metrics.dump() << "\n";
        } else {
            std::cout << "wrote " << out << "\n";
        }
        return 0;
    }
};

struct EstimateMtfCmd {
    std::string input;
    std::size_t roi_half_width = 32;
    std::string window = "none";
    std::string out;

    int run(const GlobalOpts& g) const {
        const Image wire = load_ksim(input);
        const MtfWindow win = window == "hann" ? MtfWindow::Hann : MtfWindow::None;
        const MtfCurve curve = estimate_mtf(wire, roi_half_width, win);
        curve.save_csv(out);
        json cfg = base_config("estimate-mtf", g);
        cfg.update(json{{"input", input},
                        {"roi-half-width", roi_half_width},
                        {"window", window},
                        {"out", out}});
        write_sidecar(out + ".config.json", cfg);
        std::cout << "wrote " << out << " (" << curve.freq_lp_per_cm.size() << " bins, dfov "
                  << curve.dfov_cm << " cm)\n";
        return 0;
    }
};

struct EvalCmd {
    std::string pred;
    std::string reference;
    std::string out;

    int run(const GlobalOpts&) const {
        const ImageMetrics m = image_metrics(load_ksim(pred), load_ksim(reference));
        json j{{"mse", m.mse}, {"psnr", m.psnr}, {"ssim", m.ssim}};
        if (!out.empty()) {
            std::ofstream os(out);
            if (!os) throw IoError("cannot write metrics: " + out);
            os << j.dump(2) << "\n";
        }
        std::cout << j.dump() << "\n";
        return 0;
    }
};

int dispatch(int argc, char** argv) {
    CLI::App app{"DFOV-agnostic CT kernel synthesis toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global random seed");
    app.add_option("--threads", g.threads, "worker pool bound (0 = hardware)");
    app.add_option("--config", g.config_path, "JSON config; flags override file values");
    app.fallthrough();  // global flags may follow the subcommand

    GenPhantomCmd gen;
    auto* gen_cmd = app.add_subcommand("gen-phantom", "generate a phantom KSIM file");
    gen_cmd->add_option("kind", gen.kind, "shepp-logan | wire | water")->required();
    auto* gen_n = gen_cmd->add_option("--n", gen.n, "matrix size");
    auto* gen_dfov = gen_cmd->add_option("--dfov", gen.dfov, "display field-of-view, cm");
    gen_cmd->add_option("--out", gen.out, "output KSIM path")->required();
    auto* gen_amp = gen_cmd->add_option("--amplitude", gen.amplitude, "wire impulse amplitude");
    auto* gen_sigma = gen_cmd->add_option("--sigma", gen.sigma, "noise std (water)");
    auto* gen_ramp = gen_cmd->add_option("--ramp", gen.ramp, "NPS ramp exponent (water)");
    auto* gen_prof = gen_cmd->add_option("--noise-profile", gen.noise_profile, "shaping kernel");
    auto* gen_bg = gen_cmd->add_option("--background", gen.background, "background floor (water)");
    gen_cmd->add_flag("--png", gen.png, "also write a 16-bit PNG preview");

    SimulateDatasetCmd sim;
    auto* sim_cmd = app.add_subcommand("simulate-dataset", "generate a training-pair dataset");
    auto* sim_count = sim_cmd->add_option("--count", sim.count, "number of pairs");
    auto* sim_n = sim_cmd->add_option("--n", sim.n, "matrix size");
    auto* sim_dfov = sim_cmd->add_option("--dfov-list", sim.dfov_list, "DFOVs cycled round-robin");
    auto* sim_in = sim_cmd->add_option("--input-profile", sim.input_profile, "input kernel MTF");
    auto* sim_tgt = sim_cmd->add_option("--target-profile", sim.target_profile, "target kernel MTF");
    auto* sim_sigma = sim_cmd->add_option("--sigma", sim.sigma, "input-kernel noise std");
    auto* sim_ramp = sim_cmd->add_option("--ramp", sim.ramp, "NPS ramp exponent");
    sim_cmd->add_flag("--rotate,!--no-rotate", sim.rotate, "randomly rotate the scene per pair");
    sim_cmd->add_option("--out-dir", sim.out_dir, "output directory")->required();

    TrainCmd tr;
    auto* tr_cmd = app.add_subcommand("train", "train the projection network");
    tr_cmd->add_option("--manifest", tr.manifest_path, "dataset manifest JSON")->required();
    auto* tr_mode = tr_cmd->add_option("--mode", tr.mode, "modl | direct")
                        ->check(CLI::IsMember({"modl", "direct"}));
    auto* tr_epochs = tr_cmd->add_option("--epochs", tr.epochs, "training epochs");
    auto* tr_lr = tr_cmd->add_option("--lr", tr.lr, "learning rate");
    auto* tr_batch = tr_cmd->add_option("--batch", tr.batch, "batch size");
    auto* tr_wssim = tr_cmd->add_option("--w-ssim", tr.w_ssim, "SSIM loss weight");
    auto* tr_unrolls = tr_cmd->add_option("--unrolls", tr.unrolls, "unroll count K");
    auto* tr_lambda0 = tr_cmd->add_option("--lambda0", tr.lambda0, "initial lambda");
    auto* tr_decay = tr_cmd->add_option("--decay", tr.decay, "per-unroll lambda decay");
    auto* tr_eps = tr_cmd->add_option("--eps", tr.eps, "ratio regularization eps");
    auto* tr_in = tr_cmd->add_option("--input-profile", tr.input_profile, "input kernel MTF");
    auto* tr_tgt = tr_cmd->add_option("--target-profile", tr.target_profile, "target kernel MTF");
    auto* tr_hidden = tr_cmd->add_option("--hidden", tr.hidden, "hidden channel widths");
    tr_cmd->add_option("--out", tr.out, "output checkpoint path")->required();
    auto* tr_log = tr_cmd->add_option("--log", tr.log_path, "training log CSV path");
    tr_cmd->add_option("--resume", tr.resume, "checkpoint to resume from");
    tr_cmd->add_option("--checkpoint-every", tr.checkpoint_every, "periodic checkpoint stride");
    tr_cmd->add_flag("--stop-dc-grad", tr.stop_dc_grad, "pass gradients around the DC step");
    auto* tr_led = tr_cmd->add_option("--lambda-epoch-decay", tr.lambda_epoch_decay,
                                      "decay lambda0 per epoch instead of per unroll");

    SynthesizeCmd syn;
    auto* syn_cmd = app.add_subcommand("synthesize", "convert a smooth-kernel image");
    syn_cmd->add_option("--input", syn.input, "input KSIM image")->required();
    auto* syn_method = syn_cmd->add_option("--method", syn.method,
                                           "direct | tikhonov | modl | direct-learning")
                           ->check(CLI::IsMember({"direct", "tikhonov", "modl", "direct-learning"}));
    syn_cmd->add_option("--checkpoint", syn.checkpoint, "KSNN checkpoint (modl/direct-learning)");
    auto* syn_in = syn_cmd->add_option("--input-profile", syn.input_profile, "input kernel MTF");
    auto* syn_tgt = syn_cmd->add_option("--target-profile", syn.target_profile, "target kernel MTF");
    auto* syn_eps = syn_cmd->add_option("--eps", syn.eps, "ratio regularization eps");
    auto* syn_lambda0 = syn_cmd->add_option("--lambda0", syn.lambda0, "initial lambda");
    auto* syn_decay = syn_cmd->add_option("--decay", syn.decay, "per-unroll lambda decay");
    auto* syn_unrolls = syn_cmd->add_option("--unrolls", syn.unrolls, "unroll count K");
    syn_cmd->add_option("--out", syn.out, "output KSIM path")->required();
    syn_cmd->add_option("--reference", syn.reference, "reference KSIM; prints metrics");
    syn_cmd->add_flag("--png", syn.png, "also write a 16-bit PNG preview");

    EstimateMtfCmd est;
    auto* est_cmd = app.add_subcommand("estimate-mtf", "wire-phantom MTF estimation");
    est_cmd->add_option("--input", est.input, "wire phantom KSIM")->required();
    auto* est_roi = est_cmd->add_option("--roi-half-width", est.roi_half_width, "ROI half width, px");
    auto* est_win = est_cmd->add_option("--window", est.window, "none | hann")
                        ->check(CLI::IsMember({"none", "hann"}));
    est_cmd->add_option("--out", est.out, "output CSV path")->required();

    EvalCmd ev;
    auto* ev_cmd = app.add_subcommand("eval", "image metrics between two KSIM files");
    ev_cmd->add_option("--pred", ev.pred, "prediction KSIM")->required();
    ev_cmd->add_option("--reference", ev.reference, "reference KSIM")->required();
    ev_cmd->add_option("--out", ev.out, "optional metrics JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (!g.config_path.empty()) {
        std::ifstream is(g.config_path);
        if (!is) throw IoError("cannot open config: " + g.config_path);
        try {
            is >> g.config;
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("config parse error: ") + e.what());
        }
    }
    if (g.config.contains("seed") && app.count("--seed") == 0)
        g.seed = g.config.at("seed").get<std::uint64_t>();
    if (g.config.contains("threads") && app.count("--threads") == 0)
        g.threads = g.config.at("threads").get<int>();
    set_max_threads(g.threads);

    if (gen_cmd->parsed()) {
        overlay(g, gen_n, "n", gen.n);
        overlay(g, gen_dfov, "dfov", gen.dfov);
        overlay(g, gen_amp, "amplitude", gen.amplitude);
        overlay(g, gen_sigma, "sigma", gen.sigma);
        overlay(g, gen_ramp, "ramp", gen.ramp);
        overlay(g, gen_prof, "noise-profile", gen.noise_profile);
        overlay(g, gen_bg, "background", gen.background);
        return gen.run(g);
    }
    if (sim_cmd->parsed()) {
        overlay(g, sim_count, "count", sim.count);
        overlay(g, sim_n, "n", sim.n);
        overlay(g, sim_dfov, "dfov-list", sim.dfov_list);
        overlay(g, sim_in, "input-profile", sim.input_profile);
        overlay(g, sim_tgt, "target-profile", sim.target_profile);
        overlay(g, sim_sigma, "sigma", sim.sigma);
        overlay(g, sim_ramp, "ramp", sim.ramp);
        return sim.run(g);
    }
    if (tr_cmd->parsed()) {
        overlay(g, tr_mode, "mode", tr.mode);
        overlay(g, tr_epochs, "epochs", tr.epochs);
        overlay(g, tr_lr, "lr", tr.lr);
        overlay(g, tr_batch, "batch", tr.batch);
        overlay(g, tr_wssim, "w-ssim", tr.w_ssim);
        overlay(g, tr_unrolls, "unrolls", tr.unrolls);
        overlay(g, tr_lambda0, "lambda0", tr.lambda0);
        overlay(g, tr_decay, "decay", tr.decay);
        overlay(g, tr_eps, "eps", tr.eps);
        overlay(g, tr_in, "input-profile", tr.input_profile);
        overlay(g, tr_tgt, "target-profile", tr.target_profile);
        overlay(g, tr_hidden, "hidden", tr.hidden);
        overlay(g, tr_log, "log", tr.log_path);
        overlay(g, tr_led, "lambda-epoch-decay", tr.lambda_epoch_decay);
        return tr.run(g);
    }
    if (syn_cmd->parsed()) {
        overlay(g, syn_method, "method", syn.method);
        overlay(g, syn_in, "input-profile", syn.input_profile);
        overlay(g, syn_tgt, "target-profile", syn.target_profile);
        overlay(g, syn_eps, "eps", syn.eps);
        overlay(g, syn_lambda0, "lambda0", syn.lambda0);
        overlay(g, syn_decay, "decay", syn.decay);
        overlay(g, syn_unrolls, "unrolls", syn.unrolls);
        return syn.run(g);
    }
    if (est_cmd->parsed()) {
        overlay(g, est_roi, "roi-half-width", est.roi_half_width);
        overlay(g, est_win, "window", est.window);
        return est.run(g);
    }
    if (ev_cmd->parsed()) return ev.run(g);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
