"""Fixed quadrature rules shared by the overlap and efficiency integrals.

Everything here is deterministic: the same arguments always produce the same
nodes in the same order, so sums over them are reproducible bit for bit.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def _gl(n):
    x, w = leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=64)
def _gh(n):
    x, w = hermgauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gauss_legendre(a, b, n):
    """Nodes and weights of an n-point Gauss-Legendre rule on [a, b]."""
    x, w = _gl(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gauss_hermite(n):
    """Nodes and weights for ∫ f(x) exp(-x²) dx."""
    return _gh(n)


def composite_gauss_legendre(edges, n):
    """Concatenate n-point rules over consecutive intervals of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            x, w = gauss_legendre(lo, hi, n)
            xs.append(x)
            ws.append(w)
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)


def radial_edges(breakpoints, extent, inner_panels=4, first_width=None, growth=1.6):
    """Panel edges for a radial integral on [0, extent].

    The field may be non-smooth at each breakpoint, so panels never straddle
    one.  Up to the first breakpoint the interval is split uniformly; between
    breakpoints a single panel each; beyond the last breakpoint panels grow
    geometrically so evanescent tails with very different decay lengths are
    all resolved.
    """
    bps = sorted(b for b in set(breakpoints) if 0 < b < extent)
    if not bps:
        bps = [extent / 8]
    edges = list(np.linspace(0.0, bps[0], inner_panels + 1))
    for b in bps[1:]:
        mid = 0.5 * (edges[-1] + b)
        edges.extend([mid, b])
    last = edges[-1]
    if extent > last:
        width = first_width if first_width else 0.05 * last
        x = last
        while x + width < extent:
            x += width
            edges.append(x)
            width *= growth
        edges.append(extent)
    return np.asarray(edges)


class PolarGrid:
    """Tensor-product rule on a disc: composite Gauss-Legendre in r (with the
    r dr Jacobian folded into the weights) times a uniform trapezoid in φ,
    which is exact for trigonometric polynomials of degree < n_phi."""

    def __init__(self, breakpoints, extent, n_radial=24, n_phi=64, inner_panels=4, first_width=None):
        edges = radial_edges(breakpoints, extent, inner_panels=inner_panels, first_width=first_width)
        r, wr = composite_gauss_legendre(edges, n_radial)
        self.edges = edges
        self.r = r
        self.phi = np.arange(n_phi) * (2 * np.pi / n_phi)
        self.weights = (wr * r)[:, None] * np.full(n_phi, 2 * np.pi / n_phi)[None, :]
        self.R, self.PHI = np.meshgrid(self.r, self.phi, indexing="ij")

    def integrate(self, values):
        return float(np.sum(np.real(values) * self.weights))


class LobeIntegral:
    """Result of :func:`sinc2_integral`: value, error estimate and window."""

    def __init__(self, value, error, tail, window, clipped, n_panels):
        self.value = value
        self.error = error
        self.tail = tail
        self.window = window
        self.clipped = clipped
        self.n_panels = n_panels

    def __repr__(self):
        return (f"LobeIntegral(value={self.value:.6e}, error={self.error:.2e}, tail={self.tail:.2e}, "
                f"panels={self.n_panels})")


def _walk(z, t0, direction, limit, lobes, samples_per_lobe):
    """Sample z from t0 towards ``limit`` until |z − z(t0)| reaches the lobe
    budget, |z| turns over (a neighbouring root lies beyond) or the limit is
    hit.  Returns the sample arrays (ordered away from t0) and the reason."""
    span = abs(limit - t0)
    if span == 0:
        return np.array([t0]), np.array([float(z(np.array([t0]))[0])]), "limit"
    h = 1e-7 * max(abs(t0), span)
    z0 = float(z(np.array([t0]))[0])
    slope = abs(float((z(np.array([t0 + direction * h]))[0] - z0) / h))
    target = lobes * np.pi
    reach = target / slope if slope > 0 else span
    reach = min(max(reach, 1e-6 * span), span)
    while True:
        n = int(samples_per_lobe * lobes * min(4.0, max(1.0, reach * slope / target if slope else 1.0))) + 2
        t = t0 + direction * np.linspace(0.0, reach, n)
        zs = z(t)
        a = np.abs(zs)
        grow = np.abs(zs - z0) >= target
        # turn-over: |z| starts to fall again after having left the anchor lobe
        turn = np.nonzero((np.diff(a) < 0) & (a[1:] > np.pi))[0]
        stop_turn = turn[0] + 1 if turn.size else None
        stop_grow = int(np.argmax(grow)) if grow.any() else None
        if stop_turn is not None and (stop_grow is None or stop_turn < stop_grow):
            return t[: stop_turn + 1], zs[: stop_turn + 1], "turn"
        if stop_grow is not None:
            return t[: stop_grow + 1], zs[: stop_grow + 1], "lobes"
        if reach >= span:
            return t, zs, "limit"
        reach = min(2 * reach, span)


def sinc2_integral(f, z, t0, t_lo, t_hi, amp=None, lobes=320, n_gl=10, samples_per_lobe=8):
    """∫ f(t) dt for an integrand of the form A(t)·sinc²(z(t)) around t0.

    The window runs ``lobes`` sinc lobes either side of ``t0`` (clipped at
    ``t_lo``/``t_hi`` and where |z| turns over towards another root).  Panel
    edges sit at the zeros z = kπ so every panel holds one smooth lobe and is
    integrated with ``n_gl`` Gauss-Legendre nodes.  Where the window ends on
    the lobe budget the remaining tail ≈ A/(2|z'||z|) is added; ``amp``
    evaluates A(t) for that estimate.  The error estimate combines the
    difference to an (n_gl − 4)-point rule with a fifth of the tail.
    """
    pieces = []
    ends = []
    for direction, limit in ((-1.0, t_lo), (1.0, t_hi)):
        t, zs, why = _walk(z, t0, direction, limit, lobes, samples_per_lobe)
        pieces.append((t, zs))
        ends.append(why)
    # assemble monotone samples across the window
    t_left, z_left = pieces[0]
    t_right, z_right = pieces[1]
    ts = np.concatenate([t_left[::-1], t_right[1:]])
    zs = np.concatenate([z_left[::-1], z_right[1:]])
    edges = [ts[0]]
    k = np.floor(zs / np.pi)
    for i in np.nonzero(np.diff(k) != 0)[0]:
        # linear interpolation of the crossing of the nearest multiple of π
        level = np.pi * max(k[i], k[i + 1])
        dz = zs[i + 1] - zs[i]
        frac = (level - zs[i]) / dz if dz != 0 else 0.5
        edges.append(ts[i] + frac * (ts[i + 1] - ts[i]))
    edges.append(ts[-1])
    edges = np.unique(np.concatenate([edges, [t0]]))
    x_hi, w_hi = composite_gauss_legendre(edges, n_gl)
    x_lo, w_lo = composite_gauss_legendre(edges, max(2, n_gl - 4))
    v_hi = float(np.sum(w_hi * f(x_hi)))
    v_lo = float(np.sum(w_lo * f(x_lo)))
    tail = 0.0
    if amp is not None:
        for (t, zz), why in zip(pieces, ends):
            if why != "lobes" or len(t) < 2:
                continue
            te, ze = t[-1], zz[-1]
            slope = abs((zz[-1] - zz[-2]) / (t[-1] - t[-2]))
            if slope > 0 and ze != 0:
                tail += float(amp(np.array([te]))[0]) / (2 * slope * abs(ze))
    value = v_hi + tail
    error = abs(v_hi - v_lo) + 0.2 * abs(tail)
    return LobeIntegral(value, error, tail, (float(edges[0]), float(edges[-1])), tuple(ends), len(edges) - 1)
