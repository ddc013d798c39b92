/*
   Copyright 2026 The wwr-cva Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wwr.hpp"

namespace wwr::cli {

enum class Layout { long_form, wide };

struct RunConfig {
    ExposureSpec exposure = ExposureSpec::forward(0.022, 5.0);
    CreditCurve curve = CreditCurve::flat(0.01);
    ModelSpec model = gc::GcParams{};
    hw::CorrMode corr_mode = hw::CorrMode::paper;
    int grid_points = 100;
    math::QuadratureRule rule = default_cva_rule();
    mc::SimConfig mc;
    std::string out_dir = "out";
    int precision = 12;
    Layout layout = Layout::long_form;
    std::vector<double> sweep_rho;
    std::vector<double> sweep_sigma;
    bool sweep_rho_given = false;
    bool sweep_sigma_given = false;
    std::size_t path_count = 5;
    int path_steps = 500;
    double fault_phi_bump = 0.0;
};

/// key=value lines with dotted keys. '#' starts a comment.
struct RawConfig {
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline RawConfig parse_raw(std::istream& in, std::string_view source = "config") {
    RawConfig raw;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) {
            s = s.substr(0, hash);
        }
        s = detail::trim(s);
        if (s.empty()) {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(wwr::detail::concat(source, ":", n, ": expected key=value, got '", s, "'"));
        }
        const std::string key(detail::trim(s.substr(0, eq)));
        const std::string value(detail::trim(s.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError(wwr::detail::concat(source, ":", n, ": empty key"));
        }
        if (const auto it = raw.entries.find(key); it != raw.entries.end()) {
            throw ConfigError(wwr::detail::concat(source, ":", n, ": key '", key, "' already set on line ",
                                                  it->second.line));
        }
        raw.entries.emplace(key, RawConfig::Entry{value, n});
    }
    return raw;
}

namespace detail {

class Reader {
public:
    Reader(const RawConfig& raw, std::string_view source) : raw_(raw), source_(source) {}

    bool has(const std::string& key) const { return raw_.entries.count(key) != 0; }

    std::optional<std::string> str(const std::string& key) {
        const auto it = raw_.entries.find(key);
        if (it == raw_.entries.end()) {
            return std::nullopt;
        }
        used_.push_back(key);
        return it->second.value;
    }

    double num(const std::string& key, double fallback) {
        const auto v = str(key);
        return v ? to_double(key, *v) : fallback;
    }

    long long integer(const std::string& key, long long fallback) {
        const auto v = str(key);
        if (!v) {
            return fallback;
        }
        long long out = 0;
        const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
        if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
            fail(key, wwr::detail::concat("expected an integer, got '", *v, "'"));
        }
        return out;
    }

    bool boolean(const std::string& key, bool fallback) {
        const auto v = str(key);
        if (!v) {
            return fallback;
        }
        if (*v == "true" || *v == "1" || *v == "yes") {
            return true;
        }
        if (*v == "false" || *v == "0" || *v == "no") {
            return false;
        }
        fail(key, wwr::detail::concat("expected true/false, got '", *v, "'"));
    }

    std::vector<double> list(const std::string& key) {
        std::vector<double> out;
        const auto v = str(key);
        if (!v || trim(*v).empty()) {
            return out;
        }
        for (auto part : csv::split(*v)) {
            out.push_back(to_double(key, std::string(trim(part))));
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        const auto it = raw_.entries.find(key);
        if (it == raw_.entries.end()) {
            throw ConfigError(wwr::detail::concat(source_, ": key '", key, "': ", msg));
        }
        throw ConfigError(wwr::detail::concat(source_, ":", it->second.line, ": key '", key, "': ", msg));
    }

    void reject_unused() const {
        for (const auto& [key, e] : raw_.entries) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                throw ConfigError(wwr::detail::concat(source_, ":", e.line, ": unknown key '", key, "'"));
            }
        }
    }

private:
    double to_double(const std::string& key, const std::string& v) const {
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
            fail(key, wwr::detail::concat("expected a number, got '", v, "'"));
        }
        return out;
    }

    const RawConfig& raw_;
    std::string source_;
    std::vector<std::string> used_;
};

/// Runs f and turns a library DomainError into a diagnostic on key.
template <typename F>
auto checked(Reader& r, const std::string& key, F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        r.fail(key, e.what());
    }
}

inline const std::vector<std::string>& model_names() {
    static const std::vector<std::string> names{"gc", "hw", "cm", "ssrd", "gaussian"};
    return names;
}

}  // namespace detail

/// Model block with defaults of the given kind; used by --model overrides too.
inline ModelSpec default_model(std::string_view name) {
    if (name == "gc") {
        return gc::GcParams{};
    }
    if (name == "hw") {
        return hw::HwParams{};
    }
    if (name == "cm") {
        return cm::CmParams{};
    }
    if (name == "ssrd") {
        return ssrd::SsrdParams{};
    }
    if (name == "gaussian") {
        return gm::GaussianMartingaleParams{};
    }
    throw ConfigError(wwr::detail::concat("unknown model '", name, "' (gc, hw, cm, ssrd, gaussian)"));
}

inline hw::CorrMode parse_corr_mode(std::string_view s) {
    if (s == "paper") {
        return hw::CorrMode::paper;
    }
    if (s == "exact") {
        return hw::CorrMode::exact;
    }
    throw ConfigError(wwr::detail::concat("correlation mode must be paper or exact, got '", s, "'"));
}

inline cm::SignConvention parse_sign_convention(std::string_view s) {
    if (s == "paper") {
        return cm::SignConvention::paper;
    }
    if (s == "raw") {
        return cm::SignConvention::raw;
    }
    throw ConfigError(wwr::detail::concat("sign convention must be paper or raw, got '", s, "'"));
}

inline RunConfig build_config(const RawConfig& raw, std::string_view source = "config") {
    detail::Reader r(raw, source);
    RunConfig c;

    const std::string kind = r.str("exposure.kind").value_or("forward");
    if (kind != "forward" && kind != "irs") {
        r.fail("exposure.kind", "expected forward or irs, got '" + kind + "'");
    }
    ExposureSpec e;
    e.kind = kind == "irs" ? ExposureKind::irs : ExposureKind::forward;
    e.gamma = r.num("exposure.gamma", kind == "irs" ? 0.005 : 0.0);
    e.vartheta = r.num("exposure.vartheta", 0.022);
    e.maturity = r.num("exposure.maturity", 5.0);
    if (e.kind == ExposureKind::forward && e.gamma != 0.0) {
        r.fail("exposure.gamma", "a forward exposure has no drift term");
    }
    detail::checked(r, "exposure.vartheta", [&] {
        e.validate();
        return 0;
    });
    c.exposure = e;

    const auto hazards = r.list("credit.hazard");
    const auto knots = r.list("credit.knots");
    if (!hazards.empty() || !knots.empty()) {
        c.curve = detail::checked(r, "credit.hazard", [&] {
            return hazards.size() == 1 && knots.empty() ? CreditCurve::flat(hazards[0])
                                                        : CreditCurve::piecewise(knots, hazards);
        });
    }

    // exactly one model block
    std::string model = r.str("model").value_or("");
    std::vector<std::string> blocks;
    std::vector<std::string> first_keys;
    for (const auto& name : detail::model_names()) {
        const std::string prefix = "model." + name + ".";
        for (const auto& [key, entry] : raw.entries) {
            if (key.rfind(prefix, 0) == 0) {
                blocks.push_back(name);
                first_keys.push_back(key);
                break;
            }
        }
    }
    if (blocks.size() > 1) {
        r.fail(first_keys[1],
               "exactly one model block is allowed, found model." + blocks[0] + ".* and model." + blocks[1] + ".*");
    }
    if (model.empty()) {
        if (blocks.empty()) {
            r.fail("model", "no model given (model=gc|hw|cm|ssrd|gaussian)");
        }
        model = blocks[0];
    }
    if (!blocks.empty() && blocks[0] != model) {
        r.fail("model", "model=" + model + " but the parameter block is model." + blocks[0] + ".*");
    }
    try {
        c.model = default_model(model);
    } catch (const ConfigError& err) {
        r.fail("model", err.what());
    }
    const std::string p = "model." + model + ".";
    std::visit(
        [&](auto& m) {
            using T = std::decay_t<decltype(m)>;
            m.rho = r.num(p + "rho", m.rho);
            if constexpr (std::is_same_v<T, hw::HwParams>) {
                m.kappa = r.num(p + "kappa", m.kappa);
                m.theta = r.num(p + "theta", m.theta);
                m.sigma = r.num(p + "sigma", m.sigma);
                m.r0 = r.num(p + "r0", m.r0);
                if (auto v = r.str(p + "corr_mode")) {
                    try {
                        c.corr_mode = parse_corr_mode(*v);
                    } catch (const ConfigError& err) {
                        r.fail(p + "corr_mode", err.what());
                    }
                }
            } else if constexpr (std::is_same_v<T, cm::CmParams>) {
                m.sigma = r.num(p + "sigma", m.sigma);
                if (auto v = r.str(p + "sign_convention")) {
                    try {
                        m.convention = parse_sign_convention(*v);
                    } catch (const ConfigError& err) {
                        r.fail(p + "sign_convention", err.what());
                    }
                }
            } else if constexpr (std::is_same_v<T, ssrd::SsrdParams>) {
                m.r0 = r.num(p + "r0", m.r0);
                m.kappa = r.num(p + "kappa", m.kappa);
                m.theta = r.num(p + "theta", m.theta);
                m.sigma = r.num(p + "sigma", m.sigma);
            } else if constexpr (std::is_same_v<T, gm::GaussianMartingaleParams>) {
                m.sigma = r.num(p + "sigma", m.sigma);
            }
            detail::checked(r, p + "rho", [&] {
                m.validate();
                return 0;
            });
        },
        c.model);

    c.grid_points = static_cast<int>(r.integer("grid.points", c.grid_points));
    if (c.grid_points < 1) {
        r.fail("grid.points", "must be >= 1");
    }

    const std::string rule = r.str("quadrature.rule").value_or("gauss_legendre");
    if (rule == "gauss_legendre") {
        const auto nodes = r.integer("quadrature.nodes", 128);
        c.rule = detail::checked(r, "quadrature.nodes",
                                 [&] { return math::QuadratureRule::gauss_legendre(static_cast<int>(nodes)); });
    } else if (rule == "adaptive_simpson") {
        const double tol = r.num("quadrature.tolerance", 1e-10);
        c.rule = detail::checked(r, "quadrature.tolerance",
                                 [&] { return math::QuadratureRule::adaptive_simpson(tol); });
    } else {
        r.fail("quadrature.rule", "expected gauss_legendre or adaptive_simpson, got '" + rule + "'");
    }

    const auto paths = r.integer("mc.paths", static_cast<long long>(c.mc.n_paths));
    if (paths < 1) {
        r.fail("mc.paths", "must be >= 1");
    }
    c.mc.n_paths = static_cast<std::size_t>(paths);
    c.mc.dt = r.num("mc.dt", c.mc.dt);
    const auto seed = r.integer("mc.seed", static_cast<long long>(c.mc.seed));
    c.mc.seed = static_cast<std::uint64_t>(seed);
    c.mc.antithetic = r.boolean("mc.antithetic", c.mc.antithetic);
    const auto threads = r.integer("mc.threads", 0);
    if (threads < 0) {
        r.fail("mc.threads", "must be >= 0");
    }
    c.mc.threads = static_cast<unsigned>(threads);
    detail::checked(r, "mc.dt", [&] {
        c.mc.validate();
        return 0;
    });
    if (c.mc.dt > c.exposure.maturity) {
        r.fail("mc.dt", "time step exceeds the exposure maturity");
    }

    c.out_dir = r.str("output.dir").value_or(c.out_dir);
    c.precision = static_cast<int>(r.integer("output.precision", c.precision));
    if (c.precision < 1 || c.precision > 17) {
        r.fail("output.precision", "must lie in [1, 17]");
    }
    const std::string layout = r.str("output.layout").value_or("long");
    if (layout == "wide") {
        c.layout = Layout::wide;
    } else if (layout != "long") {
        r.fail("output.layout", "expected long or wide, got '" + layout + "'");
    }

    c.sweep_rho_given = r.has("sweep.rho");
    c.sweep_rho = r.list("sweep.rho");
    for (double x : c.sweep_rho) {
        if (!(std::fabs(x) <= 1.0)) {
            r.fail("sweep.rho", wwr::detail::concat("rho must lie in [-1, 1], got ", x));
        }
    }
    c.sweep_sigma_given = r.has("sweep.sigma");
    c.sweep_sigma = r.list("sweep.sigma");
    for (double x : c.sweep_sigma) {
        if (!(x > 0.0)) {
            r.fail("sweep.sigma", wwr::detail::concat("sigma must be > 0, got ", x));
        }
    }

    const auto count = r.integer("paths.count", static_cast<long long>(c.path_count));
    if (count < 1) {
        r.fail("paths.count", "must be >= 1");
    }
    c.path_count = static_cast<std::size_t>(count);
    c.path_steps = static_cast<int>(r.integer("paths.steps", c.path_steps));
    if (c.path_steps < 1) {
        r.fail("paths.steps", "must be >= 1");
    }
    c.fault_phi_bump = r.num("validate.fault.phi_bump", 0.0);

    r.reject_unused();
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return build_config(parse_raw(in, path), path);
}

inline RunConfig parse_config(std::string_view text, std::string_view source = "config") {
    std::istringstream in{std::string(text)};
    return build_config(parse_raw(in, source), source);
}

}  // namespace wwr::cli
