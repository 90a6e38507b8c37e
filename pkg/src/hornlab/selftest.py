"""Fast invariant suite behind ``hornlab selftest``."""

from __future__ import annotations

import math
import sys

import numpy as np

from . import densities as dn
from . import spherical as sph
from . import transforms as tr
from .harness import run_verify
from .instance import HornInstance
from .rng import RngStream


def _normalisation():
    cases = [
        HornInstance("additive", [1.0, 0.0], 0.5),
        HornInstance("positive", [2.0, 0.5, -1.0], 1.0),
        HornInstance("unitary", [1.0, -1.0], 0.8),
        HornInstance("unitary", [2.0, 0.5, -1.0], 2.5),
    ]
    return all(abs(dn.integrate_pdf(i) - 1) < 1e-6 for i in cases)


def _rank1(stream):
    gen = stream.generator()
    for n in (2, 3, 4):
        s = np.sort(gen.normal(size=n))[::-1] * 2
        b = gen.uniform(0.2, 2.0)
        full = sph.hciz([-1j * b] + [0] * (n - 1), s)
        if abs(sph.hciz_rank1(b, s) - full) > 1e-8 * abs(full):
            return False
        full = sph.gn_spherical([b] + [0] * (n - 1), s)
        if abs(sph.gn_rank1(b, s) - full) > 1e-8 * abs(full):
            return False
        k = np.sort(gen.choice(np.arange(-8, 9), size=n, replace=False))[::-1]
        full = sph.char_spherical([b] + [0] * (n - 1), k)
        if abs(sph.char_rank1(b, k) - full) > 1e-8 * max(abs(full), 1e-300):
            return False
    return True


def _theta():
    x = np.linspace(-np.pi, np.pi, 256)
    return all(
        np.max(np.abs(tr.theta_kernel(x, e, n, "fourier") - tr.theta_kernel(x, e, n, "gaussian")))
        < 1e-12
        for e in (0.1, 1.0)
        for n in (1, 2)
    )


def _gue_transform():
    return tr.forward_transform_check("gue", 0.5, [1.0, 0.0]).rel_err < 1e-6


def _unitary_series():
    inst = HornInstance("unitary", [1.0, -1.0], 0.8)
    t = np.linspace(1.25, 1.55, 5)[:, None]
    rec = tr.inverse_unitary_series(inst, t, 0.1)
    return bool(np.max(np.abs(rec / dn.pdf_mult_unitary(t, inst) - 1)) < 0.1)


def _verify(stream):
    inst = HornInstance("additive", [1.0, 0.0], 0.5)
    return run_verify(inst, 20_000, stream).passed


def run_selftest(stream=None, out=None):
    """Run the suite, print one line per check and return overall success."""
    stream = stream or RngStream(0)
    out = out or sys.stdout
    checks = [
        ("density normalisation", _normalisation),
        ("rank-1 spherical functions", lambda: _rank1(stream)),
        ("theta kernel duality", _theta),
        ("GUE transform pair", _gue_transform),
        ("unitary series inversion", _unitary_series),
        ("Monte Carlo verification", lambda: _verify(stream)),
    ]
    ok = True
    for name, fn in checks:
        try:
            passed = bool(fn())
        except Exception as exc:  # report, keep going
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}", file=out)
    return ok


if __name__ == "__main__":
    sys.exit(0 if run_selftest() else 1)
