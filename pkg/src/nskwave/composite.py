"""Shifted superposition of the smooth fan and the traveling shock.

Assembles the composite background fields, the weight function of the
shift dynamics, the forcing terms the superposition leaves in the
momentum and auxiliary equations, and the wave-interaction norms.  All
x-derivatives of the forcing terms are expanded analytically into the
derivative stacks of the two waves: the forcings are small differences of
large terms, which numerical differentiation would destroy.
"""
from __future__ import annotations

import numpy as np

from . import thermo
from .errors import VacuumError
from .quadrature import adaptive_simpson
from .rarefaction import RarefactionWave
from .riemann import WavePattern
from .shockprofile import ShockProfile, eval_profile
from .thermo import GasModel


def _pressure_flux_x(st, model):
    """(p(v))_x from a derivative stack."""
    return thermo.dpressure(st["v"], model) * st["vx"]


def _viscous_flux_x(st, model):
    """(mu(v) u_x / v)_x expanded."""
    a = model.alpha
    v = st["v"]
    return (-(a + 1.0) * v ** (-a - 2.0) * st["vx"] * st["ux"]
            + v ** (-a - 1.0) * st["uxx"])


def _capillary_main_x(st, model):
    """(kappa(v)(-v_xx/v^5 + 5 v_x^2 / (2 v^6)))_x expanded."""
    b = model.beta
    v, vx, vxx, vxxx = st["v"], st["vx"], st["vxx"], st["vxxx"]
    return (-vxxx * v ** (-b - 5.0)
            + (b + 10.0) * vxx * vx * v ** (-b - 6.0)
            - 2.5 * (b + 6.0) * vx ** 3 * v ** (-b - 7.0))


def _capillary_grad_x(st, model):
    """(kappa'(v) v_x^2 / (2 v^5))_x expanded."""
    b = model.beta
    v, vx, vxx = st["v"], st["vx"], st["vxx"]
    return (-b * vx * vxx * v ** (-b - 6.0)
            + 0.5 * b * (b + 6.0) * vx ** 3 * v ** (-b - 7.0))


class CompositeWave:
    """Fan plus shifted shock, glued through the intermediate state."""

    def __init__(self, rarefaction: RarefactionWave, profile: ShockProfile | None,
                 pattern: WavePattern, model: GasModel):
        self.rarefaction = rarefaction
        self.profile = profile
        self.pattern = pattern
        self.model = model
        if pattern.has_shock and profile is None:
            raise ValueError("pattern has a shock of finite strength but no profile was given")

    # -- raw stacks --------------------------------------------------------

    def _shock_stack(self, t, x, X):
        zeros = np.zeros_like(np.asarray(x, dtype=float))
        if not self.pattern.has_shock or self.profile is None:
            const = dict.fromkeys(("vx", "vxx", "vxxx", "ux", "uxx", "w", "wx"), zeros)
            const["v"] = np.full_like(zeros, self.pattern.mid.v)
            const["u"] = np.full_like(zeros, self.pattern.mid.u)
            return const
        xi = np.asarray(x, dtype=float) - self.pattern.sigma * t - X
        return eval_profile(self.profile, xi)

    def part_stacks(self, t, x, X, order: int = 3):
        """(fan stack, shock stack) with derivatives up to ``order``."""
        return self.rarefaction.eval(t, x, order=order), self._shock_stack(t, x, X)

    # -- composite fields ----------------------------------------------------

    def eval_bar(self, t, x, X) -> dict:
        """Composite fields vbar, ubar, wbar with first derivatives and vbar_xx."""
        rs, ss = self.part_stacks(t, x, X, order=2)
        v_m, u_m = self.pattern.mid.v, self.pattern.mid.u
        b = self.model.beta
        # grouping the fan offset first keeps the superposition exact where
        # either wave sits at the intermediate state
        vbar = ss["v"] + (rs["v"] - v_m)
        if np.any(vbar <= 0.0):
            raise VacuumError("composite vacuum: superposed volume is not positive")
        ubar = ss["u"] + (rs["u"] - u_m)
        vbar_x = rs["vx"] + ss["vx"]
        ubar_x = rs["ux"] + ss["ux"]
        vbar_xx = rs["vxx"] + ss["vxx"]
        gcap = vbar ** (-0.5 * (b + 5.0))
        wbar = -vbar_x * gcap
        wbar_x = -vbar_xx * gcap + 0.5 * (b + 5.0) * vbar_x ** 2 * vbar ** (-0.5 * (b + 7.0))
        return {"v": vbar, "u": ubar, "w": wbar,
                "vx": vbar_x, "ux": ubar_x, "wx": wbar_x, "vxx": vbar_xx}

    # -- weight of the shifted entropy ----------------------------------------

    def weight(self, t, x, X):
        """Monotone weight 1 + (u_m - uS)/sqrt(delta_S); identically 1 without a shock."""
        x = np.asarray(x, dtype=float)
        if not self.pattern.has_shock:
            return np.ones_like(x)
        ss = self._shock_stack(t, x, X)
        return 1.0 + (self.pattern.mid.u - ss["u"]) / np.sqrt(self.pattern.delta_S)

    def weight_x(self, t, x, X):
        """x-derivative of the weight: sigma vS_x / sqrt(delta_S) > 0."""
        x = np.asarray(x, dtype=float)
        if not self.pattern.has_shock:
            return np.zeros_like(x)
        ss = self._shock_stack(t, x, X)
        return -ss["ux"] / np.sqrt(self.pattern.delta_S)

    # -- forcing terms ----------------------------------------------------------

    def momentum_defect(self, t, x, X):
        """Forcing left in the momentum equation by the superposition.

        Returns (interaction part, fan part).  The interaction part
        telescopes to zero when either wave is absent; the fan part is the
        viscous/capillary flux of the fan alone, which solves only the
        ideal equations.
        """
        x = np.asarray(x, dtype=float)
        m = self.model
        zeros = np.zeros_like(x)
        if not self.pattern.has_rarefaction:
            return zeros, zeros.copy()
        rs = self.rarefaction.eval(t, x, order=3)
        fan = (-_viscous_flux_x(rs, m)
               - _capillary_main_x(rs, m)
               + _capillary_grad_x(rs, m))
        if not self.pattern.has_shock:
            return zeros, fan
        ss = self._shock_stack(t, x, X)
        v_m, u_m = self.pattern.mid.v, self.pattern.mid.u
        bar = {"v": ss["v"] + (rs["v"] - v_m), "u": ss["u"] + (rs["u"] - u_m),
               "vx": rs["vx"] + ss["vx"], "ux": rs["ux"] + ss["ux"],
               "vxx": rs["vxx"] + ss["vxx"], "uxx": rs["uxx"] + ss["uxx"],
               "vxxx": rs["vxxx"] + ss["vxxx"]}
        if np.any(bar["v"] <= 0.0):
            raise VacuumError("composite vacuum: superposed volume is not positive")

        def group(term):
            return term(bar, m) - term(rs, m) - term(ss, m)

        interaction = (group(_pressure_flux_x)
                       - group(_viscous_flux_x)
                       - group(_capillary_main_x)
                       + group(_capillary_grad_x))
        return interaction, fan

    def aux_defect(self, t, x, X, Xdot):
        """Forcing left in the auxiliary-variable equation; linear in Xdot."""
        x = np.asarray(x, dtype=float)
        if not (self.pattern.has_shock and self.pattern.has_rarefaction):
            return np.zeros_like(x)
        rs, ss = self.part_stacks(t, x, X, order=2)
        b = self.model.beta
        vbar = ss["v"] + (rs["v"] - self.pattern.mid.v)
        if np.any(vbar <= 0.0):
            raise VacuumError("composite vacuum: superposed volume is not positive")
        vbar_x = rs["vx"] + ss["vx"]
        g_s = ss["v"] ** (-0.5 * (b + 5.0))
        g_b = vbar ** (-0.5 * (b + 5.0))
        gp_s = -0.5 * (b + 5.0) * ss["v"] ** (-0.5 * (b + 7.0))
        gp_b = -0.5 * (b + 5.0) * vbar ** (-0.5 * (b + 7.0))
        bracket_x = (ss["vxx"] * (g_s - g_b)
                     + ss["vx"] * (gp_s * ss["vx"] - gp_b * vbar_x))
        return -Xdot * bracket_x

    # -- wave-interaction norms ----------------------------------------------

    def _breakpoints(self, t, X):
        pts = []
        tau = 1.0 + t
        r = self.rarefaction
        if not r.degenerate:
            lo, hi = r.support(t)
            pts += [lo, r.w_minus * tau, r.center * tau, r.w_m * tau, hi]
        if self.pattern.has_shock and self.profile is not None:
            c = self.pattern.sigma * t + X
            pts += [c + self.profile.xi_lo, c + 0.5 * self.profile.xi_lo,
                    c, c + 0.5 * self.profile.xi_hi, c + self.profile.xi_hi]
        if not pts:
            pts = [-1.0, 1.0]
        pts = np.unique(np.asarray(pts, dtype=float))
        # geometric padding across any wide gap so exponential humps at a
        # gap edge are found by the adaptive refinement
        out = [pts[0]]
        for aL, aR in zip(pts[:-1], pts[1:]):
            gap = aR - aL
            if gap > 80.0:
                step = 20.0
                pos = aL + step
                while pos < aR - step:
                    out.append(pos)
                    pos = aL + (pos - aL) * 2.0
                step = 20.0
                pos = aR - step
                down = []
                while pos > aL + step:
                    down.append(pos)
                    pos = aR - (aR - pos) * 2.0
                out.extend(reversed(down))
            out.append(aR)
        return np.unique(np.asarray(out))

    def interaction_norms(self, t, X=0.0, xdot: float = 1.0) -> dict:
        """Norms of the wave-overlap products and of the forcing terms.

        The auxiliary-forcing norm is evaluated at shift rate ``xdot``
        (the forcing is linear in it, so 1.0 gives the per-unit-rate
        norm).
        """
        v_m = self.pattern.mid.v
        keys = ("vSx_vR_L1", "vSx_vR_L2", "vRx_vSx_L1", "vRx_vSx_L2",
                "vRx_vS_L2", "Q1I_L2", "Q2_L2")
        if not (self.pattern.has_shock and self.pattern.has_rarefaction):
            return dict.fromkeys(keys, 0.0)
        breaks = self._breakpoints(t, X)

        def prod(fn, p):
            val = adaptive_simpson(lambda x: np.abs(fn(x)) ** p, breaks,
                                   abs_tol=1e-300, rel_tol=1e-8)
            return max(val, 0.0) ** (1.0 / p)

        def overlap(x, which):
            rs, ss = self.part_stacks(t, x, X, order=1)
            if which == "sx_r":
                return ss["vx"] * (rs["v"] - v_m)
            if which == "rx_sx":
                return rs["vx"] * ss["vx"]
            return rs["vx"] * (ss["v"] - v_m)

        out = {
            "vSx_vR_L1": prod(lambda x: overlap(x, "sx_r"), 1),
            "vSx_vR_L2": prod(lambda x: overlap(x, "sx_r"), 2),
            "vRx_vSx_L1": prod(lambda x: overlap(x, "rx_sx"), 1),
            "vRx_vSx_L2": prod(lambda x: overlap(x, "rx_sx"), 2),
            "vRx_vS_L2": prod(lambda x: overlap(x, "rx_s"), 2),
            "Q1I_L2": prod(lambda x: self.momentum_defect(t, x, X)[0], 2),
            "Q2_L2": prod(lambda x: self.aux_defect(t, x, X, xdot), 2),
        }
        return out
