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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> model;
    std::optional<double> rho;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> corr_mode;
    std::optional<std::string> cm_sign;
    std::optional<std::string> values;
    bool wide = false;
};

wwr::cli::RunConfig resolve(const Overrides& o) {
    using namespace wwr::cli;
    RunConfig c = load_config(o.config);
    if (o.model && *o.model != wwr::model_name(c.model)) {
        c.model = default_model(*o.model);
    }
    if (o.rho) {
        if (!(std::fabs(*o.rho) <= 1.0)) {
            throw wwr::ConfigError("--rho must lie in [-1, 1]");
        }
        wwr::set_model_rho(c.model, *o.rho);
    }
    if (o.seed) {
        c.mc.seed = *o.seed;
    }
    if (o.out) {
        c.out_dir = *o.out;
    }
    if (o.corr_mode) {
        c.corr_mode = parse_corr_mode(*o.corr_mode);
    }
    if (o.cm_sign) {
        auto* p = std::get_if<wwr::cm::CmParams>(&c.model);
        if (!p) {
            throw wwr::ConfigError("--cm-sign-convention needs model cm");
        }
        p->convention = parse_sign_convention(*o.cm_sign);
    }
    if (o.values) {
        std::vector<double> v;
        for (auto part : wwr::csv::split(*o.values)) {
            if (part.empty()) {
                continue;
            }
            try {
                v.push_back(wwr::csv::parse_double(part));
            } catch (const wwr::Error&) {
                throw wwr::ConfigError("--values: cannot parse '" + std::string(part) + "'");
            }
        }
        if (c.sweep_sigma_given) {
            c.sweep_sigma = v;
        } else {
            c.sweep_rho = v;
            c.sweep_rho_given = true;
        }
    }
    if (o.wide) {
        c.layout = Layout::wide;
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace wwr::cli;
    CLI::App app{"Wrong-way risk CVA: EPE profiles, CVA sweeps, path exports and validation"};
    app.require_subcommand(1);
    Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "key=value run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--model", o.model, "override the model: gc, hw, cm, ssrd, gaussian");
        sub->add_option("--rho", o.rho, "override the model correlation");
        sub->add_option("--seed", o.seed, "Monte Carlo seed");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--corr-mode", o.corr_mode, "hw correlation formulas: paper or exact");
        sub->add_option("--cm-sign-convention", o.cm_sign, "cm correlation sign: paper or raw");
    };
    auto* epe = app.add_subcommand("epe", "WWR EPE profile per rho");
    add_common(epe);
    epe->add_flag("--wide", o.wide, "one file with a column per rho");
    epe->add_option("--values", o.values, "comma separated rho list, replaces sweep.rho");
    auto* cva = app.add_subcommand("cva", "CVA at the configured rho");
    add_common(cva);
    auto* sweep = app.add_subcommand("sweep", "CVA over sweep.rho or sweep.sigma");
    add_common(sweep);
    sweep->add_option("--values", o.values, "comma separated list, replaces the configured sweep");
    auto* paths = app.add_subcommand("paths", "export sample paths of S, zeta (and lambda, V)");
    add_common(paths);
    auto* validate = app.add_subcommand("validate", "closed form vs Monte Carlo and calibration checks");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const RunConfig c = resolve(o);
        if (epe->parsed()) {
            return cmd_epe(c, std::cout);
        }
        if (cva->parsed()) {
            return cmd_cva(c, std::cout);
        }
        if (sweep->parsed()) {
            return cmd_sweep(c, std::cout);
        }
        if (paths->parsed()) {
            return cmd_paths(c, std::cout);
        }
        return cmd_validate(c, std::cout);
    } catch (const wwr::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const wwr::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
