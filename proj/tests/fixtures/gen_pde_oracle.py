#!/usr/bin/env python3
"""Regenerate qbm_pde_oracle.json.

Integrates the Wigner transport equation

  dW/dt = -(1/M) d/dx (p W) + M Omega_ren^2 d/dp (x W) + 2 Gamma d/dp (p W)
          - hbar Dpp d^2W/dp^2 - hbar (Dxp + Dpx) d^2W/dxdp - hbar Dxx d^2W/dx^2

directly on an (x, p) grid with central differences and RK4, then records the
first and second moments of W at checkpoint times. This is the ground truth
the C++ Gaussian moment propagator is tested against; in particular it pins
the signs with which each diffusion coefficient enters the moment dynamics.

Parameter notes: the squeezed-bath Dxx is transiently positive, i.e. an
anti-diffusion in x. On a grid that amplifies wavenumber-k roundoff like
exp(hbar*Dxx*k^2*t), so the parameters below are chosen mild enough that the
total amplification stays ~e^8 while each diffusion term still moves the
moments by well over the 1% comparison tolerance (amplitudes printed at the
end). Checkpoints land exactly on integration steps.
"""

import json

import numpy as np

PARAMS = dict(
    mass=1.0, omega=0.5, gamma0=0.01, temperature=1.0, r=0.1, a=0.2, hbar=1.0, kb=1.0
)
T0, T1 = 0.1, 5.0
N_CHECK = 11  # checkpoints including both ends
INIT = dict(mean_x=1.0, mean_p=0.5, cov_xx=2.0, cov_xp=0.3, cov_pp=2.0)

LX, LP = 17.0, 9.0
NX, NP = 201, 201


def coeffs(t, q):
    p4 = 4 * q["gamma0"]
    zeta = np.sqrt(q["omega"] ** 2 - p4**2 / 4)
    k1 = np.cosh(2 * q["r"])
    k2bar = np.sinh(2 * q["r"])
    kt = 2 * q["kb"] * q["temperature"] * q["gamma0"]
    env = k2bar * np.exp(-p4 * (t - q["a"]))
    sins = np.sin(zeta * t) * np.sin(zeta * (t - 2 * q["a"]))
    omega_ren_sq = p4**2 / 4 + zeta**2
    gamma = p4 / 2
    dxx = kt / (q["hbar"] * q["mass"] * zeta**2) * env * sins
    dxp = (
        kt
        / (q["hbar"] * zeta**2)
        * (zeta / np.tan(zeta * t) - p4 / 2)
        * env
        * sins
    )
    bracket = (
        np.cos(zeta * t) ** 2
        + (p4**2 / (4 * zeta**2)) * np.sin(zeta * t) ** 2
        - (p4 / (2 * zeta)) * np.sin(2 * zeta * t)
    )
    dpp = -(q["mass"] * kt / q["hbar"]) * (
        k1 - env * (bracket - 1) * np.sin(zeta * (t - 2 * q["a"])) / np.sin(zeta * t)
    )
    return omega_ren_sq, gamma, dxx, dxp, dpp


def rhs(w, t, q, x, p, hx, hp):
    m, hbar = q["mass"], q["hbar"]
    omega_ren_sq, gamma, dxx, dxp, dpp = coeffs(t, q)

    def ddx(f):
        g = np.zeros_like(f)
        g[1:-1, :] = (f[2:, :] - f[:-2, :]) / (2 * hx)
        return g

    def ddp(f):
        g = np.zeros_like(f)
        g[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2 * hp)
        return g

    def d2dx(f):
        g = np.zeros_like(f)
        g[1:-1, :] = (f[2:, :] - 2 * f[1:-1, :] + f[:-2, :]) / hx**2
        return g

    def d2dp(f):
        g = np.zeros_like(f)
        g[:, 1:-1] = (f[:, 2:] - 2 * f[:, 1:-1] + f[:, :-2]) / hp**2
        return g

    out = (
        -ddx(p[None, :] * w) / m
        + m * omega_ren_sq * ddp(x[:, None] * w)
        + 2 * gamma * ddp(p[None, :] * w)
        - hbar * dpp * d2dp(w)
        - hbar * 2 * dxp * ddx(ddp(w))
        - hbar * dxx * d2dx(w)
    )
    return out


def moments(w, x, p, hx, hp):
    mass = w.sum() * hx * hp
    mx = (w.sum(axis=1) * x).sum() * hx * hp / mass
    mp_ = (w.sum(axis=0) * p).sum() * hx * hp / mass
    xx = ((w * (x[:, None] - mx) ** 2).sum()) * hx * hp / mass
    pp = ((w * (p[None, :] - mp_) ** 2).sum()) * hx * hp / mass
    xp = ((w * (x[:, None] - mx) * (p[None, :] - mp_)).sum()) * hx * hp / mass
    return mx, mp_, xx, xp, pp


def moment_ode_rhs(t, y, q):
    m, hbar = q["mass"], q["hbar"]
    omega_ren_sq, gamma, dxx, dxp, dpp = coeffs(t, q)
    mx, mp_, sxx, sxp, spp = y
    return np.array(
        [
            mp_ / m,
            -m * omega_ren_sq * mx - 2 * gamma * mp_,
            2 * sxp / m - 2 * hbar * dxx,
            spp / m - m * omega_ren_sq * sxx - 2 * gamma * sxp - 2 * hbar * dxp,
            -2 * m * omega_ren_sq * sxp - 4 * gamma * spp - 2 * hbar * dpp,
        ]
    )


def main():
    q = PARAMS
    x = np.linspace(-LX, LX, NX)
    p = np.linspace(-LP, LP, NP)
    hx, hp = x[1] - x[0], p[1] - p[0]

    cov = np.array(
        [[INIT["cov_xx"], INIT["cov_xp"]], [INIT["cov_xp"], INIT["cov_pp"]]]
    )
    cinv = np.linalg.inv(cov)
    dx = x[:, None] - INIT["mean_x"]
    dp = p[None, :] - INIT["mean_p"]
    w = np.exp(
        -0.5 * (cinv[0, 0] * dx**2 + 2 * cinv[0, 1] * dx * dp + cinv[1, 1] * dp**2)
    )
    w /= w.sum() * hx * hp

    n_interval = N_CHECK - 1
    steps_per = 123
    dt = (T1 - T0) / (n_interval * steps_per)
    checkpoints = []
    t = T0
    checkpoints.append((t, moments(w, x, p, hx, hp)))
    for k in range(n_interval):
        for _ in range(steps_per):
            k1 = rhs(w, t, q, x, p, hx, hp)
            k2 = rhs(w + 0.5 * dt * k1, t + 0.5 * dt, q, x, p, hx, hp)
            k3 = rhs(w + 0.5 * dt * k2, t + 0.5 * dt, q, x, p, hx, hp)
            k4 = rhs(w + dt * k3, t + dt, q, x, p, hx, hp)
            w = w + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += dt
        t = T0 + (k + 1) * (T1 - T0) / n_interval  # kill accumulated fp drift
        checkpoints.append((t, moments(w, x, p, hx, hp)))

    # consistency run: the same moments from the ODE system the PDE implies
    y = np.array(
        [INIT["mean_x"], INIT["mean_p"], INIT["cov_xx"], INIT["cov_xp"], INIT["cov_pp"]]
    )
    ode = {checkpoints[0][0]: y.copy()}
    todes = np.linspace(T0, T1, n_interval * 2000 + 1)
    hode = todes[1] - todes[0]
    for i, ti in enumerate(todes[:-1]):
        k1 = moment_ode_rhs(ti, y, q)
        k2 = moment_ode_rhs(ti + hode / 2, y + hode / 2 * k1, q)
        k3 = moment_ode_rhs(ti + hode / 2, y + hode / 2 * k2, q)
        k4 = moment_ode_rhs(ti + hode, y + hode * k3, q)
        y = y + hode / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if (i + 1) % 2000 == 0:
            ode[T0 + (T1 - T0) * ((i + 1) // 2000) / n_interval] = y.copy()

    rows = []
    worst = 0.0
    for tc, (mx, mp_, sxx, sxp, spp) in checkpoints:
        rows.append(
            {
                "t": tc,
                "mean_x": mx,
                "mean_p": mp_,
                "cov_xx": sxx,
                "cov_xp": sxp,
                "cov_pp": spp,
            }
        )
        ref = ode[min(ode, key=lambda s: abs(s - tc))]
        scale = np.array([1.0, 1.0, sxx, sxx, spp])  # means vs O(1), covs relative
        dev = np.abs((np.array([mx, mp_, sxx, sxp, spp]) - ref) / scale).max()
        worst = max(worst, dev)
        print(f"t={tc:5.2f} pde=({mx:+.6f},{mp_:+.6f},{sxx:.6f},{sxp:+.6f},{spp:.6f})"
              f" ode-dev={dev:.2e}")
    print("worst pde-vs-ode deviation:", worst)

    # how much each diffusion term moves the moments (documents test leverage)
    for drop in ["dxx", "dxp", "dpp"]:
        y = np.array([INIT[k] for k in ("mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp")])
        mask = {"dxx": np.array([1, 1, 0, 1, 1]), "dxp": np.array([1, 1, 1, 0, 1]),
                "dpp": np.array([1, 1, 1, 1, 0])}[drop]
        # crude euler with the term zeroed via masking its contribution
        yy = y.copy()
        tt = np.linspace(T0, T1, 20001)
        h = tt[1] - tt[0]
        for ti in tt[:-1]:
            full = moment_ode_rhs(ti, yy, q)
            omega_ren_sq, gamma, dxx, dxp, dpp = coeffs(ti, q)
            dterm = np.array([0, 0, -2 * dxx, -2 * dxp, -2 * dpp]) * q["hbar"]
            yy = yy + h * (full - dterm * (1 - mask))
        base = np.array([rows[-1][k] for k in ("mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp")])
        print(f"zeroing {drop}: final-moment shift {np.abs(yy - base).max():.4f}")

    out = {
        "comment": "Wigner-equation finite-difference moments; regenerate with gen_pde_oracle.py",
        "params": PARAMS,
        "initial": INIT,
        "t0": T0,
        "t1": T1,
        "rtol": 0.01,
        "checkpoints": rows,
    }
    with open("qbm_pde_oracle.json", "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
