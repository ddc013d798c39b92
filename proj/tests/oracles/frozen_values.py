#!/usr/bin/env python3
#
#   Copyright 2026 The wwr-cva Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
"""Independent reference values, written to frozen_values.hpp.

Nothing here reuses the closed forms of the library. Covariances come from
numerical kernel integrals, conditional expectations from 1D quadrature over
the exposure (HW) or the latent factor (CM), and appendix integrals from 2D
quadrature.
"""

import argparse
import pathlib

import mpmath as mp

mp.mp.dps = 30

HEADER = """/*
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
*/"""


def npdf(x):
    return mp.npdf(x)


def ncdf(x):
    return mp.ncdf(x)


def ninv(p):
    return mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1)


def pos_mean(a, b):
    b = abs(b)
    if b == 0:
        return max(a, 0)
    z = a / b
    return b * npdf(z) + a * ncdf(z)


# --- exposures ---------------------------------------------------------------

class Exposure:
    def __init__(self, kind, gamma, vartheta, T):
        self.kind, self.gamma, self.vartheta, self.T = kind, mp.mpf(gamma), mp.mpf(vartheta), mp.mpf(T)

    def mean(self, t):
        return 0 if self.kind == "forward" else self.gamma * t * (self.T - t)

    def kernel(self, t):
        """Integrand k(s) with V_t - E V_t = int_0^t k(s) dB_s."""
        if self.kind == "forward":
            return lambda s: self.vartheta
        return lambda s: self.vartheta * (self.T - t) / (self.T - s)


def cov(k1, k2, t):
    return mp.quad(lambda s: k1(s) * k2(s), [0, t])


# --- Hull-White ----------------------------------------------------------------

def hw_f(kappa, sigma, rho, h, exp, t):
    """E[lambda S V^+] / (h G) by conditioning on V and integrating over v > 0."""
    kl = lambda s: sigma * mp.exp(-kappa * (t - s))
    kL = lambda s: sigma * (1 - mp.exp(-kappa * (t - s))) / kappa
    kv = exp.kernel(t)
    var_l, var_L, c_lL = cov(kl, kl, t), cov(kL, kL, t), cov(kl, kL, t)
    var_v = cov(kv, kv, t)
    c_lv, c_Lv = rho * cov(kl, kv, t), rho * cov(kL, kv, t)
    G = mp.exp(-h * t)
    # shift so that E[exp(-int lambda)] = G and its derivative gives lambda's mean
    int_phi = h * t + var_L / 2
    m_l = h + c_lL
    a = exp.mean(t)
    sv = mp.sqrt(var_v)

    def integrand(v):
        z = (v - a) / var_v
        ml = m_l + c_lv * z
        mL = c_Lv * z
        vL = var_L - c_Lv ** 2 / var_v
        clL = c_lL - c_lv * c_Lv / var_v
        cond = mp.exp(-mL + vL / 2) * (ml - clL)
        return v * cond * npdf((v - a) / sv) / sv

    num = mp.exp(-int_phi) * mp.quad(integrand, [0, a + 12 * sv + 1])
    return num / (h * G)


def hw_corr_exact(kappa, sigma, rho, exp, t):
    kl = lambda s: sigma * mp.exp(-kappa * (t - s))
    kL = lambda s: sigma * (1 - mp.exp(-kappa * (t - s))) / kappa
    kv = exp.kernel(t)
    sl, sL, sv = (mp.sqrt(cov(k, k, t)) for k in (kl, kL, kv))
    return (cov(kl, kL, t) / (sl * sL), rho * cov(kl, kv, t) / (sl * sv), rho * cov(kL, kv, t) / (sL * sv))


def hw_phi(kappa, sigma, h, t):
    xi1 = (1 - mp.exp(-kappa * t)) / kappa
    return h + sigma ** 2 * xi1 ** 2 / 2


# --- conic martingale ----------------------------------------------------------

def cm_f(sigma, rho_user, h, exp, t):
    """E[zeta V^+] with zeta = e^{mu t} phi(X_t) / phi(q), integrating over X."""
    mu = sigma ** 2 / 2
    rb = -rho_user
    G = mp.exp(-h * t)
    q = ninv(G)
    kx = lambda s: sigma * mp.exp(mu * (t - s))
    kv = exp.kernel(t)
    var_x, var_v = cov(kx, kx, t), cov(kv, kv, t)
    c_xv = rb * cov(kx, kv, t)
    A = q * mp.exp(mu * t)
    sx = mp.sqrt(var_x)
    a = exp.mean(t)

    def integrand(x):
        zeta = mp.exp(mu * t) * npdf(x) / npdf(q)
        m = a + c_xv / var_x * (x - A)
        s = mp.sqrt(var_v - c_xv ** 2 / var_x)
        return zeta * pos_mean(m, s) * npdf((x - A) / sx) / sx

    return mp.quad(integrand, [A - 14 * sx, A - 4 * sx, A, A + 4 * sx, A + 14 * sx])


def cm_corr(sigma, rho_user, exp, t):
    mu = sigma ** 2 / 2
    kx = lambda s: sigma * mp.exp(mu * (t - s))
    kv = exp.kernel(t)
    return -rho_user * cov(kx, kv, t) / mp.sqrt(cov(kx, kx, t) * cov(kv, kv, t))


def cva(f, h, T):
    return mp.quad(lambda t: f(t) * h * mp.exp(-h * t), [0, T / 4, T / 2, 3 * T / 4, T])


# --- appendix integrals ----------------------------------------------------------

def appendix(mu, sg, dl, a, b, c, d):
    """I_A .. I_F by 2D quadrature."""
    w = lambda x, y: npdf(a + b * x) * npdf(c + d * y)
    xr = [(-a / b) - 10 / abs(b), -a / b, (-a / b) + 10 / abs(b)]
    yr = [(-c / d) - 10 / abs(d), -c / d, (-c / d) + 10 / abs(d)]
    q = lambda g: mp.quad(lambda x, y: g(x, y) * w(x, y), sorted(xr), sorted(yr))
    lin = lambda x, y: mu * x + sg * y + dl
    IA = q(lambda x, y: npdf(lin(x, y)))
    IB = q(lambda x, y: ncdf(lin(x, y)))
    IC = q(lambda x, y: x * ncdf(lin(x, y)))
    ID = q(lambda x, y: x * npdf(lin(x, y)))
    wE = lambda x, y: npdf(a + x) * npdf(c + y)
    qE = lambda g: mp.quad(lambda x, y: g(x, y) * wE(x, y), [-a - 10, -a, -a + 10], [-c - 10, -c, -c + 10])
    IE = qE(lambda x, y: x * x * ncdf(lin(x, y)))
    IF = qE(lambda x, y: x * y * ncdf(lin(x, y)))
    return IA, IB, IC, ID, IE, IF


def triple_E(L):
    """E[(A + B X) k exp(-(al X + be Y + ga Z)) (a + at X + bt Y + gt Z)^+] by tilting."""
    A, B, k, al, be, ga, a, at, bt, gt = (mp.mpf(x) for x in L)
    tilt = mp.exp((al ** 2 + be ** 2 + ga ** 2) / 2)
    m = a - at * al - bt * be - gt * ga
    s = mp.sqrt(at ** 2 + bt ** 2 + gt ** 2)
    ew = pos_mean(m, s)
    exw = at * ncdf(m / s)
    return k * tilt * ((A - B * al) * ew + B * exw)


# --- emit --------------------------------------------------------------------------

def emit(out_path):
    fwd = Exposure("forward", 0, "0.022", 5)
    irs = Exposure("irs", "0.005", "0.022", 5)
    irs4 = Exposure("irs", "0.004", "0.022", 5)
    vals = {}
    vals["norm_inv_cdf_0_97531"] = ninv("0.97531")
    vals["expint_ratio_neg"] = mp.quad(lambda s: mp.exp(mp.mpf("0.005") * s) / s, [-5, "-2.5"])
    vals["expint_ratio_pos"] = mp.quad(lambda s: mp.exp(mp.mpf("0.405") * s) / s, ["2.5", 5])
    vals["irs_epe_t2_5"] = pos_mean(irs.mean(mp.mpf("2.5")), mp.sqrt(cov(irs.kernel(2.5), irs.kernel(2.5), 2.5)))

    k, s4, s315 = mp.mpf("0.005"), mp.mpf("0.04"), mp.mpf("0.0315")
    vals["hw_phi_t5_h1"] = hw_phi(k, s4, mp.mpf("0.01"), 5)
    ll, vl, vL = hw_corr_exact(k, s315, mp.mpf("0.8"), irs, mp.mpf("2.5"))
    vals["hw_corr_irs_lL"], vals["hw_corr_irs_Vl"], vals["hw_corr_irs_VL"] = ll, vl, vL
    ll, vl, vL = hw_corr_exact(k, s4, mp.mpf("0.8"), fwd, mp.mpf("2.5"))
    vals["hw_corr_fwd_Vl"], vals["hw_corr_fwd_VL"] = vl, vL
    vals["hw_f_fwd_h5_r04_t2_5"] = hw_f(k, s4, mp.mpf("0.4"), mp.mpf("0.05"), fwd, mp.mpf("2.5"))
    vals["hw_f_irs_h5_r04_t2_5"] = hw_f(k, s315, mp.mpf("0.4"), mp.mpf("0.05"), irs, mp.mpf("2.5"))
    vals["hw_f_fwd_h1_rm08_t4"] = hw_f(k, s4, mp.mpf("-0.8"), mp.mpf("0.01"), fwd, mp.mpf(4))
    vals["hw_f_irs_h30_r08_t1"] = hw_f(k, s315, mp.mpf("0.8"), mp.mpf("0.3"), irs, mp.mpf(1))

    s9 = mp.mpf("0.9")
    vals["cm_rho_irs_t2_5"] = cm_corr(s9, mp.mpf("0.8"), irs, mp.mpf("2.5"))
    vals["cm_rho_fwd_t2_5"] = cm_corr(s9, mp.mpf("0.8"), fwd, mp.mpf("2.5"))
    vals["cm_f_fwd_h1_r08_t2_5"] = cm_f(s9, mp.mpf("0.8"), mp.mpf("0.01"), fwd, mp.mpf("2.5"))
    vals["cm_f_irs_h5_r08_t2_5"] = cm_f(s9, mp.mpf("0.8"), mp.mpf("0.05"), irs, mp.mpf("2.5"))
    vals["cm_f_fwd_h30_rm06_t4"] = cm_f(s9, mp.mpf("-0.6"), mp.mpf("0.3"), fwd, mp.mpf(4))
    h5 = mp.mpf("0.05")
    mp.mp.dps = 15
    vals["cm_cva_irs5_h5_r08"] = cva(lambda t: cm_f(s9, mp.mpf("0.8"), h5, irs, t), h5, 5)
    vals["cm_cva_irs4_h5_r08"] = cva(lambda t: cm_f(s9, mp.mpf("0.8"), h5, irs4, t), h5, 5)
    vals["hw_cva_fwd_h5_r04"] = cva(lambda t: hw_f(k, s4, mp.mpf("0.4"), h5, fwd, t), h5, 5)
    mp.mp.dps = 30

    sets = [
        (0.3, -0.7, 0.2, 0.4, 1.3, -0.5, 0.8),
        (-1.1, 0.45, -0.3, -0.2, 0.7, 0.9, -1.2),
        (0.05, 0.02, 0.01, 0.1, 1.0, -0.3, 1.0),
    ]
    appendix_vals = [appendix(*(mp.mpf(x) for x in s)) for s in sets]
    laws = [
        (0.06, 0.02, 0.8, 0.1, 0.05, 0.0, 0.01, 0.02, 0.01, 0.015),
        (0.03, 0.01, 0.95, -0.2, 0.1, 0.05, -0.01, 0.03, -0.02, -0.01),
    ]
    law_vals = [triple_E(L) for L in laws]

    lines = [HEADER, "", "// Generated by tests/oracles/frozen_values.py. Do not edit.", "",
             "#pragma once", "", "#include <array>", "", "namespace oracle {", ""]
    for key, v in vals.items():
        lines.append(f"inline constexpr double {key} = {mp.nstr(v, 17, min_fixed=-3, max_fixed=3)};")
    lines.append("")
    lines.append("struct AppendixCase {")
    lines.append("    std::array<double, 7> v;  // mu, sigma, delta, a, b, c, d")
    lines.append("    std::array<double, 6> I;  // I_A .. I_F")
    lines.append("};")
    lines.append("")
    lines.append(f"inline constexpr std::array<AppendixCase, {len(sets)}> appendix_cases{{{{")
    for s, I in zip(sets, appendix_vals):
        lines.append("    {{" + ", ".join(repr(x) for x in s) + "}, {" +
                     ", ".join(mp.nstr(x, 17) for x in I) + "}},")
    lines.append("}};")
    lines.append("")
    lines.append("struct TripleCase {")
    lines.append("    std::array<double, 10> law;  // A, B, k, alpha, beta, gamma, a, alpha_t, beta_t, gamma_t")
    lines.append("    double value;")
    lines.append("};")
    lines.append("")
    lines.append(f"inline constexpr std::array<TripleCase, {len(laws)}> triple_cases{{{{")
    for L, v in zip(laws, law_vals):
        lines.append("    {{" + ", ".join(repr(x) for x in L) + "}, " + mp.nstr(v, 17) + "},")
    lines.append("}};")
    lines.append("")
    lines.append("}  // namespace oracle")
    out_path.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path(__file__).with_name("frozen_values.hpp"))
    emit(ap.parse_args().out)
