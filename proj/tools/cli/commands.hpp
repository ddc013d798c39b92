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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "wwr.hpp"

namespace wwr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitValidation = 3;

/// Bad command/config combination; reported with exit code 1.
class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

namespace detail {

inline std::ofstream open_output(const RunConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.out_dir);
    const auto path = std::filesystem::path(c.out_dir) / name;
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot write '" + path.string() + "'");
    }
    return os;
}

inline std::string label(double x) { return csv::format(x, 6); }

inline ModelSpec with_rho(ModelSpec m, double rho) {
    set_model_rho(m, rho);
    return m;
}

inline ModelSpec with_sigma(ModelSpec m, double sigma) {
    std::visit(
        [sigma](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, gc::GcParams>) {
                throw UsageError("the gc model has no sigma to sweep");
            } else {
                p.sigma = sigma;
            }
        },
        m);
    return m;
}

inline void require_pricing_model(const ModelSpec& m) {
    if (std::holds_alternative<gm::GaussianMartingaleParams>(m)) {
        throw UsageError("the gaussian martingale has zeta = 1 and is only simulated; use the paths command");
    }
}

inline DynamicModel dynamic_model(const ModelSpec& m) {
    return std::visit(
        [](const auto& p) -> DynamicModel {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, gc::GcParams>) {
                throw UsageError("the gc model is static and has no paths");
            } else {
                return p;
            }
        },
        m);
}

}  // namespace detail

/// WWR EPE profile of one model: closed form for gc/hw/cm, Monte Carlo for ssrd.
inline EpeProfile model_profile(const RunConfig& c, const ModelSpec& m, const std::vector<double>& grid) {
    detail::require_pricing_model(m);
    return std::visit(
        [&](const auto& p) -> EpeProfile {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, gc::GcParams>) {
                return gc::gc_profile(p, c.exposure, c.curve, grid);
            } else if constexpr (std::is_same_v<T, hw::HwParams>) {
                return hw::hw_profile(p, c.exposure, c.curve, grid, c.corr_mode);
            } else if constexpr (std::is_same_v<T, cm::CmParams>) {
                return cm::cm_profile(p, c.exposure, c.curve, grid);
            } else {
                return mc::estimate_wwr_epe_mc(DynamicModel{p}, c.exposure, c.curve, c.mc, grid);
            }
        },
        m);
}

inline CvaResult model_cva(const RunConfig& c, const ModelSpec& m) {
    detail::require_pricing_model(m);
    return std::visit(
        [&](const auto& p) -> CvaResult {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, gc::GcParams>) {
                return gc::gc_cva(p, c.exposure, c.curve, c.rule);
            } else if constexpr (std::is_same_v<T, hw::HwParams>) {
                return hw::hw_cva(p, c.exposure, c.curve, c.rule, c.corr_mode);
            } else if constexpr (std::is_same_v<T, cm::CmParams>) {
                return cm::cm_cva(p, c.exposure, c.curve, c.rule);
            } else if constexpr (std::is_same_v<T, ssrd::SsrdParams>) {
                return mc::ssrd_cva(p, c.exposure, c.curve, c.mc).cva;
            } else {
                throw UsageError("no CVA for the gaussian martingale");
            }
        },
        m);
}

inline int cmd_epe(const RunConfig& c, std::ostream& log) {
    if (c.sweep_rho_given && c.sweep_rho.empty()) {
        throw UsageError("sweep.rho is empty");
    }
    const std::vector<double> rhos = c.sweep_rho_given ? c.sweep_rho : std::vector<double>{model_rho(c.model)};
    const auto grid = uniform_grid(c.exposure.maturity, c.grid_points);
    const std::string name(model_name(c.model));
    std::vector<EpeProfile> profiles;
    for (double rho : rhos) {
        profiles.push_back(model_profile(c, detail::with_rho(c.model, rho), grid));
    }
    const bool mc = !profiles.front().std_errors.empty();
    if (c.layout == Layout::wide) {
        const std::string file = "epe_" + name + ".csv";
        auto os = detail::open_output(c, file);
        std::vector<std::string> head{"t"};
        for (double rho : rhos) {
            head.push_back("rho=" + detail::label(rho));
        }
        if (mc) {
            for (double rho : rhos) {
                head.push_back("stderr_rho=" + detail::label(rho));
            }
        }
        csv::write_row(os, head);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> row{csv::format(grid[i], c.precision)};
            for (const auto& p : profiles) {
                row.push_back(csv::format(p.values[i], c.precision));
            }
            if (mc) {
                for (const auto& p : profiles) {
                    row.push_back(csv::format(p.std_errors[i], c.precision));
                }
            }
            csv::write_row(os, row);
        }
        log << "wrote " << (std::filesystem::path(c.out_dir) / file).string() << '\n';
        return kExitOk;
    }
    for (std::size_t k = 0; k < rhos.size(); ++k) {
        const std::string file = "epe_" + name + "_rho_" + detail::label(rhos[k]) + ".csv";
        auto os = detail::open_output(c, file);
        csv::write_row(os, mc ? std::vector<std::string>{"t", "f_t", "stderr"} : std::vector<std::string>{"t", "f_t"});
        const auto& p = profiles[k];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> row{csv::format(grid[i], c.precision), csv::format(p.values[i], c.precision)};
            if (mc) {
                row.push_back(csv::format(p.std_errors[i], c.precision));
            }
            csv::write_row(os, row);
        }
        log << "wrote " << (std::filesystem::path(c.out_dir) / file).string() << '\n';
    }
    return kExitOk;
}

inline int cmd_cva(const RunConfig& c, std::ostream& log) {
    const auto r = model_cva(c, c.model);
    const auto perp = independent_cva(c.exposure, c.curve, c.rule);
    const std::string name(model_name(c.model));
    {
        auto os = detail::open_output(c, "cva_" + name + ".csv");
        std::vector<std::string> head{"rho", "cva", "cva_independent"};
        std::vector<std::string> row{csv::format(r.rho, c.precision), csv::format(r.cva, c.precision),
                                     csv::format(perp.cva, c.precision)};
        if (r.std_error) {
            head.push_back("stderr");
            row.push_back(csv::format(*r.std_error, c.precision));
        }
        csv::write_row(os, head);
        csv::write_row(os, row);
    }
    {
        auto os = detail::open_output(c, "cva_" + name + "_samples.csv");
        csv::write_row(os, {"t", "f_t", "weight"});
        for (const auto& s : r.samples) {
            csv::write_row(os, {csv::format(s.t, c.precision), csv::format(s.f, c.precision),
                                csv::format(s.weight, c.precision)});
        }
    }
    log << name << " rho=" << detail::label(r.rho) << " cva=" << csv::format(r.cva, c.precision)
        << " independent=" << csv::format(perp.cva, c.precision);
    if (r.std_error) {
        log << " stderr=" << csv::format(*r.std_error, c.precision);
    }
    log << '\n';
    return kExitOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& log) {
    if (c.sweep_rho_given && c.sweep_sigma_given) {
        throw UsageError("give either sweep.rho or sweep.sigma, not both");
    }
    if (!c.sweep_rho_given && !c.sweep_sigma_given) {
        throw UsageError("sweep needs sweep.rho or sweep.sigma");
    }
    const bool by_sigma = c.sweep_sigma_given;
    const auto& values = by_sigma ? c.sweep_sigma : c.sweep_rho;
    if (values.empty()) {
        throw UsageError(by_sigma ? "sweep.sigma is empty" : "sweep.rho is empty");
    }
    const std::string name(model_name(c.model));
    const std::string key = by_sigma ? "sigma" : "rho";
    std::vector<CvaResult> results;
    for (double v : values) {
        const auto m = by_sigma ? detail::with_sigma(c.model, v) : detail::with_rho(c.model, v);
        results.push_back(model_cva(c, m));
    }
    const bool mc = results.front().std_error.has_value();
    const std::string file = "sweep_" + name + "_" + key + ".csv";
    auto os = detail::open_output(c, file);
    csv::write_row(os, mc ? std::vector<std::string>{key, "cva", "stderr"} : std::vector<std::string>{key, "cva"});
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<std::string> row{csv::format(values[i], c.precision), csv::format(results[i].cva, c.precision)};
        if (mc) {
            row.push_back(csv::format(*results[i].std_error, c.precision));
        }
        csv::write_row(os, row);
    }
    log << "wrote " << (std::filesystem::path(c.out_dir) / file).string() << '\n';
    return kExitOk;
}

inline int cmd_paths(const RunConfig& c, std::ostream& log) {
    const auto model = detail::dynamic_model(c.model);
    const auto grid = uniform_grid(c.exposure.maturity, c.path_steps);
    mc::SimConfig cfg = c.mc;
    cfg.n_paths = c.path_count;
    if (cfg.antithetic && cfg.n_paths % 2 != 0) {
        throw UsageError("paths.count must be even with mc.antithetic=true");
    }
    const mc::JointSimulator sim(model, c.exposure, c.curve, grid, cfg.dt);
    const auto bundle = mc::simulate_survival_paths(sim, cfg, cfg.n_paths);
    const std::string name(model_name(model));
    {
        auto os = detail::open_output(c, "paths_" + name + ".csv");
        mc::write_paths_csv(bundle, os, c.precision);
    }
    const auto& s = bundle.stats;
    {
        auto os = detail::open_output(c, "paths_" + name + "_summary.csv");
        csv::write_row(os, {"points", "s_below_zero", "s_above_one", "negative_lambda", "negative_zeta", "min_S",
                            "max_S"});
        csv::write_row(os, {std::to_string(s.points), std::to_string(s.s_below_zero), std::to_string(s.s_above_one),
                            std::to_string(s.negative_lambda), std::to_string(s.negative_zeta),
                            csv::format(s.min_S, c.precision), csv::format(s.max_S, c.precision)});
    }
    log << name << ": " << bundle.paths.size() << " paths, " << s.points << " points, S<0: " << s.s_below_zero
        << ", S>1: " << s.s_above_one << ", lambda<0: " << s.negative_lambda << ", zeta<0: " << s.negative_zeta
        << ", S in [" << csv::format(s.min_S, 8) << ", " << csv::format(s.max_S, 8) << "]\n";
    return kExitOk;
}

struct Check {
    std::string name;
    bool passed;
    double observed;
    double expected;
    double tolerance;
    std::string note;
};

namespace detail {

template <typename T>
T model_or_default(const RunConfig& c) {
    if (const auto* p = std::get_if<T>(&c.model)) {
        return *p;
    }
    return T{};
}

inline Check within(std::string name, double observed, double expected, double tol, std::string note) {
    const bool ok = std::isfinite(observed) && std::fabs(observed - expected) <= tol;
    return {std::move(name), ok, observed, expected, tol, std::move(note)};
}

inline double max_abs_z(const std::vector<double>& est, const std::vector<double>& se,
                        const std::vector<double>& target) {
    double worst = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double diff = est[i] - target[i];
        const double z = se[i] > 0.0 ? std::fabs(diff) / se[i] : (diff == 0.0 ? 0.0 : HUGE_VAL);
        worst = std::max(worst, z);
    }
    return worst;
}

}  // namespace detail

/// Closed form vs Monte Carlo and calibration checks at the config's exposure
/// and curve. Models other than the configured one use default parameters.
inline std::vector<Check> run_validation(const RunConfig& c) {
    std::vector<Check> out;
    auto hwp = detail::model_or_default<hw::HwParams>(c);
    hwp.phi_bump += c.fault_phi_bump;
    const auto cmp = detail::model_or_default<cm::CmParams>(c);
    const auto ssp = detail::model_or_default<ssrd::SsrdParams>(c);
    const auto gmp = detail::model_or_default<gm::GaussianMartingaleParams>(c);
    const auto& e = c.exposure;
    const auto& curve = c.curve;

    const double perp = independent_cva(e, curve, c.rule).cva;
    auto rel = [perp](double x) { return perp != 0.0 ? x / perp - 1.0 : x; };
    {
        auto h0 = hwp;
        h0.rho = 0.0;
        auto c0 = cmp;
        c0.rho = 0.0;
        out.push_back(detail::within("rho0.gc", rel(gc::gc_cva({0.0}, e, curve, c.rule).cva), 0.0, 1e-8,
                                     "relative gap of CVA(rho=0) to the independent CVA"));
        out.push_back(detail::within("rho0.hw", rel(hw::hw_cva(h0, e, curve, c.rule, c.corr_mode).cva), 0.0, 1e-8,
                                     "relative gap of CVA(rho=0) to the independent CVA"));
        out.push_back(detail::within("rho0.cm", rel(cm::cm_cva(c0, e, curve, c.rule).cva), 0.0, 1e-8,
                                     "relative gap of CVA(rho=0) to the independent CVA"));
    }

    const auto grid100 = uniform_grid(e.maturity, 100);
    {
        double worst_hw = 0.0;
        double worst_cm = 0.0;
        for (double t : grid100) {
            const auto m = hw::hw_marginals(hwp, curve, t);
            const double g = curve.survival(t);
            worst_hw = std::max(worst_hw, std::fabs(std::exp(-m.omega + 0.5 * m.Omega * m.Omega) / g - 1.0));
            const auto k = cm::cm_marginal(cmp, curve, t);
            worst_cm = std::max(worst_cm, std::fabs(math::norm_cdf(k.A / std::sqrt(1.0 + k.B * k.B)) / g - 1.0));
        }
        out.push_back(detail::within("calibration.hw_analytic", worst_hw, 0.0, 1e-12,
                                     "max relative gap of exp(-omega + Omega^2/2) to G(t) on 100 points"));
        out.push_back(detail::within("calibration.cm_analytic", worst_cm, 0.0, 1e-12,
                                     "max relative gap of Phi(A / sqrt(1 + B^2)) to G(t) on 100 points"));
    }

    const auto grid10 = uniform_grid(e.maturity, 10);
    std::vector<double> g10;
    for (double t : grid10) {
        g10.push_back(curve.survival(t));
    }
    const std::vector<double> ones(grid10.size(), 1.0);
    constexpr double z_tol = 4.0;
    const std::vector<std::pair<std::string, DynamicModel>> dyn{
        {"hw", hwp}, {"cm", cmp}, {"ssrd", ssp}, {"gaussian", gmp}};
    for (const auto& [name, model] : dyn) {
        const mc::JointSimulator sim(model, e, curve, grid10, c.mc.dt);
        const auto b = mc::simulate_survival_paths(sim, c.mc);
        std::vector<double> sm, sse, zm, zse;
        for (std::size_t i = 0; i < grid10.size(); ++i) {
            sm.push_back(b.stats.S[i].mean);
            sse.push_back(b.stats.S[i].std_error());
            zm.push_back(b.stats.zeta[i].mean);
            zse.push_back(b.stats.zeta[i].std_error());
        }
        out.push_back(detail::within("calibration." + name + "_mc_survival", detail::max_abs_z(sm, sse, g10), 0.0,
                                     z_tol, "max |z| of MC E[S_t] against G(t) on 10 points"));
        out.push_back(detail::within("calibration." + name + "_mc_zeta", detail::max_abs_z(zm, zse, ones), 0.0,
                                     z_tol, "max |z| of MC E[zeta_t] against 1 on 10 points"));
    }

    const double rho = 0.5;
    const auto grid5 = uniform_grid(e.maturity, 5);
    {
        auto p = hwp;
        p.rho = rho;
        const auto closed = hw::hw_profile(p, e, curve, grid5, hw::CorrMode::exact);
        const auto est = mc::estimate_wwr_epe_mc(p, e, curve, c.mc, grid5);
        out.push_back(detail::within("oracle.hw", detail::max_abs_z(est.values, est.std_errors, closed.values), 0.0,
                                     z_tol, "max |z| of MC E[zeta V+] against the closed form, rho=0.5"));
    }
    {
        auto p = cmp;
        p.rho = rho;
        const auto closed = cm::cm_profile(p, e, curve, grid5);
        const auto est = mc::estimate_wwr_epe_mc(p, e, curve, c.mc, grid5);
        out.push_back(detail::within("oracle.cm", detail::max_abs_z(est.values, est.std_errors, closed.values), 0.0,
                                     z_tol, "max |z| of MC E[zeta V+] against the closed form, rho=0.5"));
    }
    {
        const gc::GcParams p{rho};
        const auto closed = gc::gc_profile(p, e, curve, grid5);
        const auto est = mc::gc_resample_epe_mc(p, e, curve, c.mc, grid5);
        out.push_back(detail::within("oracle.gc", detail::max_abs_z(est.values, est.std_errors, closed.values), 0.0,
                                     z_tol, "max |z| of the resampling estimate against the closed form, rho=0.5"));
    }
    return out;
}

inline nlohmann::json validation_report(const std::vector<Check>& checks) {
    nlohmann::json j;
    bool all = true;
    j["checks"] = nlohmann::json::array();
    for (const auto& ch : checks) {
        all = all && ch.passed;
        j["checks"].push_back({{"name", ch.name},
                               {"passed", ch.passed},
                               {"observed", ch.observed},
                               {"expected", ch.expected},
                               {"tolerance", ch.tolerance},
                               {"note", ch.note}});
    }
    j["passed"] = all;
    return j;
}

inline int cmd_validate(const RunConfig& c, std::ostream& log) {
    const auto checks = run_validation(c);
    const auto report = validation_report(checks);
    {
        auto os = detail::open_output(c, "validate.json");
        os << report.dump(2) << '\n';
    }
    for (const auto& ch : checks) {
        log << (ch.passed ? "PASS " : "FAIL ") << ch.name << "  observed=" << csv::format(ch.observed, 6)
            << " expected=" << csv::format(ch.expected, 6) << " tol=" << csv::format(ch.tolerance, 3) << '\n';
    }
    return report["passed"].get<bool>() ? kExitOk : kExitValidation;
}

}  // namespace wwr::cli
