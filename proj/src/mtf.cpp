#include "ksynth/mtf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ksynth/errors.hpp"

namespace ksynth {

using nlohmann::json;

KernelMtfProfile KernelMtfProfile::smooth_gaussian(double f0, double p) {
    if (!(f0 > 0.0) || !(p > 0.0))
        throw ValidationError("smooth_gaussian: f0 and p must be positive");
    KernelMtfProfile prof;
    prof.family_ = MtfFamily::SmoothGaussian;
    prof.f0_ = f0;
    prof.p_ = p;
    return prof;
}

KernelMtfProfile KernelMtfProfile::sharp_boosted(double f0, double p, double beta, double f_beta) {
    if (!(f0 > 0.0) || !(p > 0.0) || !(f_beta > 0.0))
        throw ValidationError("sharp_boosted: f0, p, f_beta must be positive");
    if (beta < 0.0) throw ValidationError("sharp_boosted: beta must be >= 0");
    KernelMtfProfile prof;
    prof.family_ = MtfFamily::SharpBoosted;
    prof.f0_ = f0;
    prof.p_ = p;
    prof.beta_ = beta;
    prof.f_beta_ = f_beta;
    return prof;
}

KernelMtfProfile KernelMtfProfile::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw ValidationError("tabulated: empty sample list");
    if (samples.front().first != 0.0 || samples.front().second != 1.0)
        throw ValidationError("tabulated: first sample must be (0, 1) so that M(0) = 1");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].second < 0.0) throw ValidationError("tabulated: MTF values must be >= 0");
        if (i > 0 && !(samples[i].first > samples[i - 1].first))
            throw ValidationError("tabulated: frequencies must be strictly increasing");
    }
    KernelMtfProfile prof;
    prof.family_ = MtfFamily::Tabulated;
    prof.samples_ = std::move(samples);
    return prof;
}

double KernelMtfProfile::operator()(double f) const {
    if (f < 0.0) throw ValidationError("eval_profile: negative frequency");
    switch (family_) {
        case MtfFamily::SmoothGaussian:
            return std::exp(-std::pow(f / f0_, p_));
        case MtfFamily::SharpBoosted: {
            const double t2 = (f / f_beta_) * (f / f_beta_);
            const double boost = 1.0 + beta_ * t2 * std::exp(1.0 - t2);
            return boost * std::exp(-std::pow(f / f0_, p_));
        }
        case MtfFamily::Tabulated: {
            if (f >= samples_.back().first) return samples_.back().second;
            auto it = std::upper_bound(samples_.begin(), samples_.end(), f,
                                       [](double x, const auto& s) { return x < s.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double t = (f - lo.first) / (hi.first - lo.first);
            return lo.second + t * (hi.second - lo.second);
        }
    }
    return 0.0;
}

std::string KernelMtfProfile::to_json() const {
    json j;
    switch (family_) {
        case MtfFamily::SmoothGaussian:
            j = {{"family", "smooth_gaussian"}, {"params", {{"f0", f0_}, {"p", p_}}}};
            break;
        case MtfFamily::SharpBoosted:
            j = {{"family", "sharp_boosted"},
                 {"params", {{"f0", f0_}, {"p", p_}, {"beta", beta_}, {"f_beta", f_beta_}}}};
            break;
        case MtfFamily::Tabulated: {
            json rows = json::array();
            for (const auto& [f, m] : samples_) rows.push_back({f, m});
            j = {{"family", "tabulated"}, {"params", {{"samples", rows}}}};
            break;
        }
    }
    return j.dump(2);
}

KernelMtfProfile KernelMtfProfile::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("profile JSON parse error: ") + e.what());
    }
    try {
        const std::string family = j.at("family").get<std::string>();
        const json& p = j.at("params");
        if (family == "smooth_gaussian")
            return smooth_gaussian(p.at("f0").get<double>(), p.at("p").get<double>());
        if (family == "sharp_boosted")
            return sharp_boosted(p.at("f0").get<double>(), p.at("p").get<double>(),
                                 p.at("beta").get<double>(), p.at("f_beta").get<double>());
        if (family == "tabulated") {
            std::vector<std::pair<double, double>> samples;
            for (const auto& row : p.at("samples"))
                samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
            return tabulated(std::move(samples));
        }
        throw ValidationError("unknown MTF family: " + family);
    } catch (const json::exception& e) {
        throw IoError(std::string("profile JSON structure error: ") + e.what());
    }
}

KernelMtfProfile KernelMtfProfile::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open profile: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str());
}

KernelMtfProfile KernelMtfProfile::from_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open profile: " + path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty profile CSV: " + path);
    std::vector<std::pair<double, double>> samples;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("malformed CSV row in " + path);
        try {
            samples.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError("non-numeric CSV row in " + path);
        }
    }
    return tabulated(std::move(samples));
}

KernelMtfProfile KernelMtfProfile::resolve(const std::string& spec_str) {
    if (spec_str == "builtin:smooth") return builtin_smooth();
    if (spec_str == "builtin:sharp") return builtin_sharp();
    if (spec_str.size() > 4 && spec_str.substr(spec_str.size() - 4) == ".csv")
        return from_csv_file(spec_str);
    return from_json_file(spec_str);
}

double TransferFilter::min_value() const { return *std::min_element(values.begin(), values.end()); }
double TransferFilter::max_value() const { return *std::max_element(values.begin(), values.end()); }

TransferFilter sample_on_grid(const KernelMtfProfile& profile, const FrequencyGrid& grid) {
    const std::size_t n = grid.size();
    TransferFilter filter{grid, std::vector<double>(n * n)};
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            filter.values[u * n + v] = profile(grid.frequency_at(u, v));
    return filter;
}

TransferFilter ratio_filter(const KernelMtfProfile& input_mtf, const KernelMtfProfile& target_mtf,
                            const FrequencyGrid& grid, double eps) {
    if (eps < 0.0) throw ValidationError("ratio_filter: eps must be >= 0");
    const std::size_t n = grid.size();
    TransferFilter filter{grid, std::vector<double>(n * n)};
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const double f = grid.frequency_at(u, v);
            const double mi = input_mtf(f);
            const double mt = target_mtf(f);
            const double denom = mi * mi + eps;
            if (denom == 0.0 || (eps == 0.0 && mi == 0.0))
                throw DivisionBlowup("ratio_filter: input MTF vanishes at f = " + std::to_string(f) +
                                     " lp/cm with eps = 0");
            filter.values[u * n + v] = mt * mi / denom;
        }
    }
    return filter;
}

}  // namespace ksynth
