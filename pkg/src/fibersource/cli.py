"""Command-line front end.

    fibersource design --target 1.596um
    fibersource contour --config run.toml --out results/
    fibersource efficiency --config run.toml --format both

A run is described by a TOML file with the sections ``fiber``, ``pump``,
``process``, ``numerics`` and ``output`` (plus an optional ``sweep``).
Every physical quantity is a string carrying an explicit unit, for example
``radius = "0.395 um"`` or ``bandwidth = "23.5 Grad/s"``.  Bandwidths given
in Hz-type units (``GHz``, ``THz``) are angular-converted with a factor 2π;
use ``rad/s``-type units to enter σ directly.

Exit codes: 0 success, 1 computational failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import re
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .efficiency import SWEEP_PARAMETERS, EfficiencyRequest, QuadratureSettings, efficiency
from .errors import FiberSourceError, OutOfValidityRange
from .materials import fused_silica, omega_to_um, um_to_omega
from .modes import HE11, HE12, FiberGeometry, mode_table
from .nonlinear import CHI3_DEFAULT, CHI3_VERSION, sfwm_coefficients, tospdc_coefficients
from .phasematching import (
    contour_csv,
    degenerate_mismatch,
    degenerate_tospdc_radius,
    sfwm_anchor,
    sfwm_contour,
    sfwm_contour_extent,
    sfwm_process,
    tospdc_contour,
    tospdc_process,
)
from .spectrum import PumpConfig, grid_widths, jsi_grid_sfwm, jsi_slices_tospdc, sigma_from_duration

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# ---------------------------------------------------------------------------
# units

_UNITS = {
    "length": {"nm": 1e-9, "um": 1e-6, "µm": 1e-6, "mm": 1e-3, "cm": 1e-2, "m": 1.0, "km": 1e3},
    "bandwidth": {
        "rad/s": 1.0, "krad/s": 1e3, "Mrad/s": 1e6, "Grad/s": 1e9, "Trad/s": 1e12,
        "Hz": 2 * np.pi, "kHz": 2 * np.pi * 1e3, "MHz": 2 * np.pi * 1e6, "GHz": 2 * np.pi * 1e9,
        "THz": 2 * np.pi * 1e12,
    },
    "time": {"fs": 1e-15, "ps": 1e-12, "ns": 1e-9, "us": 1e-6, "s": 1.0},
    "power": {"uW": 1e-6, "mW": 1e-3, "W": 1.0},
    "rate": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9},
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zµ/]+)\s*$")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (exit code 2)."""


def parse_quantity(text, kind):
    """Parse ``"<number> <unit>"`` into SI (rad/s for bandwidths)."""
    if not isinstance(text, str):
        raise ConfigError(f"{kind} value {text!r} must be a string with a unit, e.g. \"1 {next(iter(_UNITS[kind]))}\"")
    m = _QUANTITY.match(text)
    if not m:
        raise ConfigError(f"cannot parse {kind} value {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    table = _UNITS[kind]
    if unit not in table:
        raise ConfigError(f"unit {unit!r} not allowed for {kind}; use one of {sorted(table)}")
    return value * table[unit]


def parse_list(text, kind):
    """Comma-separated quantities, or a list of them."""
    items = text.split(",") if isinstance(text, str) else list(text)
    return [parse_quantity(t.strip() if isinstance(t, str) else t, kind) for t in items if str(t).strip()]


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    radius: float = None
    design_target_um: float = None
    cladding_index: float = 1.0
    pump_wavelength_um: float = 0.532
    sigma: float = 23.5e9
    power: float = 0.18
    rep_rate: float = 1e8
    processes: tuple = ("sfwm", "tospdc")
    length: float = 0.01
    regime: str = "pulsed"
    chi3: float = CHI3_DEFAULT
    convention: str = "vector"
    idler_wavelength_um: float = None
    jsi_points: int = 256
    slice_points: int = 1024
    contour_points: int = 200
    scan_points: int = 2000
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    out_dir: str = "."
    formats: tuple = ("csv", "json")
    normalize: bool = False
    sweep_parameter: str = None
    sweep_values: tuple = ()

    def canonical(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k not in ("out_dir", "formats", "normalize")}
        d["quadrature"] = vars(self.quadrature) if not hasattr(self.quadrature, "__dataclass_fields__") else {
            k: getattr(self.quadrature, k) for k in self.quadrature.__dataclass_fields__}
        d["processes"] = list(self.processes)
        d["sweep_values"] = list(self.sweep_values)
        return json.dumps(d, sort_keys=True, default=repr)

    @property
    def sha256(self):
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def pump(self, sigma=None):
        s = self.sigma if sigma is None else sigma
        if self.regime == "cw":
            s = 0.0
        return PumpConfig.from_wavelength(self.pump_wavelength_um, s, self.power, self.rep_rate)

    def provenance(self):
        return {
            "config_sha256": self.sha256,
            "sellmeier": fused_silica().version,
            "chi3": CHI3_VERSION if self.chi3 == CHI3_DEFAULT else f"chi3-user/{self.chi3:.8e}",
            "fibersource": __version__,
        }


_SECTIONS = {
    "fiber": {"radius", "design_target", "cladding_index"},
    "pump": {"wavelength", "bandwidth", "duration", "power", "rep_rate"},
    "process": {"kind", "length", "regime", "chi3", "convention", "idler_wavelength"},
    "numerics": {"jsi_points", "slice_points", "contour_points", "scan_points", "lobes", "n_gl", "n_outer", "n_inner",
                 "n_theta", "target"},
    "output": {"directory", "formats", "normalize"},
    "sweep": {"parameter", "values"},
}


def config_from_dict(doc):
    """Validate a parsed TOML document and build a :class:`RunConfig`."""
    for sec, body in doc.items():
        if sec not in _SECTIONS:
            raise ConfigError(f"unknown section [{sec}]; expected one of {sorted(_SECTIONS)}")
        if not isinstance(body, dict):
            raise ConfigError(f"[{sec}] must be a table")
        extra = set(body) - _SECTIONS[sec]
        if extra:
            raise ConfigError(f"unknown key(s) in [{sec}]: {sorted(extra)}")
    cfg = RunConfig()
    fib = doc.get("fiber", {})
    if "radius" in fib and "design_target" in fib:
        raise ConfigError("[fiber] takes exactly one of 'radius' and 'design_target'")
    if "radius" in fib:
        cfg.radius = parse_quantity(fib["radius"], "length")
        if not cfg.radius > 0:
            raise ConfigError("fiber radius must be positive")
    elif "design_target" in fib:
        cfg.design_target_um = parse_quantity(fib["design_target"], "length") * 1e6
    else:
        cfg.radius = 0.395e-6
    cfg.cladding_index = float(fib.get("cladding_index", 1.0))

    pm = doc.get("pump", {})
    if "bandwidth" in pm and "duration" in pm:
        raise ConfigError("[pump] takes at most one of 'bandwidth' and 'duration'")
    if "wavelength" in pm:
        cfg.pump_wavelength_um = parse_quantity(pm["wavelength"], "length") * 1e6
    if "bandwidth" in pm:
        cfg.sigma = parse_quantity(pm["bandwidth"], "bandwidth")
    if "duration" in pm:
        cfg.sigma = sigma_from_duration(parse_quantity(pm["duration"], "time"))
    if "power" in pm:
        cfg.power = parse_quantity(pm["power"], "power")
    if "rep_rate" in pm:
        cfg.rep_rate = parse_quantity(pm["rep_rate"], "rate")
    if cfg.sigma < 0 or not cfg.power > 0 or not cfg.rep_rate > 0:
        raise ConfigError("pump bandwidth must be nonnegative, power and repetition rate positive")

    pr = doc.get("process", {})
    kind = pr.get("kind", "both")
    if kind not in ("sfwm", "tospdc", "both"):
        raise ConfigError("[process] kind must be 'sfwm', 'tospdc' or 'both'")
    cfg.processes = ("sfwm", "tospdc") if kind == "both" else (kind,)
    if "length" in pr:
        cfg.length = parse_quantity(pr["length"], "length")
    cfg.regime = pr.get("regime", "pulsed")
    if cfg.regime not in ("pulsed", "cw"):
        raise ConfigError("[process] regime must be 'pulsed' or 'cw'")
    if cfg.regime == "pulsed" and cfg.sigma == 0:
        raise ConfigError("the pulsed regime needs a nonzero pump bandwidth")
    cfg.chi3 = float(pr.get("chi3", CHI3_DEFAULT))
    cfg.convention = pr.get("convention", "vector")
    if cfg.convention not in ("vector", "magnitude", "dominant"):
        raise ConfigError("[process] convention must be 'vector', 'magnitude' or 'dominant'")
    if "idler_wavelength" in pr:
        cfg.idler_wavelength_um = parse_quantity(pr["idler_wavelength"], "length") * 1e6

    nm = doc.get("numerics", {})
    for key in ("jsi_points", "slice_points", "contour_points", "scan_points"):
        if key in nm:
            v = nm[key]
            if not isinstance(v, int) or v < 8:
                raise ConfigError(f"[numerics] {key} must be an integer >= 8")
            setattr(cfg, key, v)
    qkw = {k: nm[k] for k in ("lobes", "n_gl", "n_outer", "n_inner", "n_theta", "target") if k in nm}
    if qkw:
        cfg.quadrature = replace(cfg.quadrature, **qkw)

    out = doc.get("output", {})
    cfg.out_dir = str(out.get("directory", "."))
    fmts = out.get("formats", "both")
    cfg.formats = _formats(fmts)
    cfg.normalize = bool(out.get("normalize", False))

    sw = doc.get("sweep", {})
    if sw:
        cfg.sweep_parameter = sw.get("parameter")
        if cfg.sweep_parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"[sweep] parameter must be one of {SWEEP_PARAMETERS}")
        kind = {"bandwidth": "bandwidth", "power": "power", "length": "length"}[cfg.sweep_parameter]
        cfg.sweep_values = tuple(parse_list(sw.get("values", ""), kind))
    return cfg


def _formats(value):
    if isinstance(value, str):
        value = ["csv", "json"] if value == "both" else [value]
    value = tuple(value)
    if not value or any(v not in ("csv", "json") for v in value):
        raise ConfigError("formats must be 'csv', 'json' or 'both'")
    return value


def load_config(path):
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(doc)


# ---------------------------------------------------------------------------
# helpers


def _num(x):
    return f"{x:.8e}"


def _geometry(cfg):
    radius = cfg.radius
    if radius is None:
        fused_silica().check([cfg.design_target_um, cfg.design_target_um / 3])
        radius = degenerate_tospdc_radius(cfg.design_target_um, cladding_index=cfg.cladding_index)
    return FiberGeometry(radius, cladding_index=cfg.cladding_index)


def _comment_header(cfg, **extra):
    lines = [f"# {k}: {v}" for k, v in sorted({**cfg.provenance(), **extra}.items())]
    return "\n".join(lines) + "\n"


def _dump_json(doc):
    return json.dumps(_round(doc), indent=1, sort_keys=True) + "\n"


def _round(obj):
    """9 significant digits for every float so outputs are byte-stable."""
    if isinstance(obj, float):
        return float(_num(obj)) if np.isfinite(obj) else repr(obj)
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round(v) for v in obj]
    return obj


class Writer:
    def __init__(self, cfg):
        self.cfg = cfg
        self.dir = Path(cfg.out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.written = []

    def text(self, name, text):
        path = self.dir / name
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        self.written.append(str(path))
        return path

    def csv(self, name, body, **extra):
        if "csv" in self.cfg.formats:
            self.text(name, _comment_header(self.cfg, **extra) + body)

    def json(self, name, doc, force=False):
        if force or "json" in self.cfg.formats:
            self.text(name, _dump_json({"provenance": self.cfg.provenance(), **doc}))


def _table(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_design(cfg, args):
    target = cfg.design_target_um
    if target is None:
        raise ConfigError("design needs a target wavelength (--target or [fiber] design_target)")
    fused_silica().check([target, target / 3])
    t0 = time.perf_counter()
    r = degenerate_tospdc_radius(target, cladding_index=cfg.cladding_index)
    residual = abs(degenerate_mismatch(r, float(um_to_omega(target)), cladding_index=cfg.cladding_index))
    elapsed = time.perf_counter() - t0
    print(f"target wavelength  {target:.6f} um")
    print(f"core radius        {r * 1e6:.6f} um")
    print(f"residual mismatch  {residual:.3e} rad/m")
    print(f"pump wavelength    {target / 3:.6f} um (HE12), triplets in HE11")
    print(f"solved in {elapsed:.2f} s")
    if args.out:
        w = Writer(cfg)
        w.json("design.json", {"target_um": target, "radius_m": r, "residual_rad_m": residual}, force=True)
    return EXIT_OK


def cmd_contour(cfg, args):
    g = _geometry(cfg)
    w = Writer(cfg)
    n = cfg.contour_points
    if "sfwm" in cfg.processes:
        proc = sfwm_process(g, nonlinear=False)
        _, lam_min, lam_max = sfwm_contour_extent(proc, n_scan=cfg.scan_points)
        if lam_min is None:
            grid = np.empty(0)
        else:
            # uniform in pump wavelength over the contour's span, ends included
            grid = np.sort(um_to_omega(np.linspace(lam_min, lam_max, n) * 1e6))
        branches = sfwm_contour(proc, grid, n_scan=cfg.scan_points)
        for name in ("outer", "inner"):
            pts = branches[name]
            w.csv(f"sfwm_contour_{name}.csv", contour_csv(pts, "sfwm"), core_radius_m=_num(g.core_radius))
            print(f"sfwm {name}: {len(pts)} points")
    if "tospdc" in cfg.processes:
        proc = tospdc_process(g, nonlinear=False)
        lam_i = cfg.idler_wavelength_um or 3 * cfg.pump_wavelength_um
        wi = float(um_to_omega(lam_i))
        tp = proc.pump_dispersion
        lo, hi = max(tp.omega_min, 2.6 * wi), min(tp.omega_max, 3.4 * wi)
        grid = np.linspace(lo, hi, n) if hi > lo else np.empty(0)
        pts = tospdc_contour(proc, wi, grid, n_scan=cfg.scan_points)
        w.csv("tospdc_contour_single.csv", contour_csv(pts, "tospdc"), core_radius_m=_num(g.core_radius),
              idler_wavelength_um=_num(lam_i))
        print(f"tospdc: {len(pts)} points at fixed idler {lam_i:.4f} um")
    _report(w)
    return EXIT_OK


def _write_grid(w, cfg, stem, grid):
    grids = [(stem, grid)]
    if cfg.normalize:
        grids.append((stem + "_normalized", grid.normalized()))
    for name, gr in grids:
        w.csv(f"{name}.csv", gr.to_csv())
        w.json(f"{name}.json", {"grid": gr.header(), "widths_rad_s": _safe_widths(gr)}, force=True)


def _safe_widths(grid):
    try:
        return grid_widths(grid)
    except ValueError:
        return {}


def cmd_jsi(cfg, args):
    g = _geometry(cfg)
    w = Writer(cfg)
    pump = cfg.pump()
    if pump.cw:
        raise ConfigError("joint spectra need a pulsed pump")
    if "sfwm" in cfg.processes:
        proc = sfwm_process(g, pump.omega, cfg.chi3, cfg.convention)
        grid = jsi_grid_sfwm(proc, pump, cfg.length, n=cfg.jsi_points)
        _write_grid(w, cfg, "sfwm_jsi", grid)
        print(f"sfwm JSI {cfg.jsi_points}x{cfg.jsi_points}, widths {_fmt_widths(grid)}")
    if "tospdc" in cfg.processes:
        proc = tospdc_process(g, pump.omega, cfg.chi3, cfg.convention)
        a, b = jsi_slices_tospdc(proc, pump, cfg.length, n_grid=cfg.jsi_points, n_slice=cfg.slice_points)
        _write_grid(w, cfg, "tospdc_jsi_nuplus0", a)
        _write_grid(w, cfg, "tospdc_jsi_nuab0", b)
        print(f"tospdc slices, widths {_fmt_widths(a)} / {_fmt_widths(b)}")
    _report(w)
    return EXIT_OK


def _fmt_widths(grid):
    return ", ".join(f"{k}={v:.3e}" for k, v in _safe_widths(grid).items()) or "n/a"


def cmd_coefficients(cfg, args):
    g = _geometry(cfg)
    w = Writer(cfg)
    wp = float(um_to_omega(cfg.pump_wavelength_um))
    rows = []
    if "sfwm" in cfg.processes:
        ws, wi = sfwm_anchor(sfwm_process(g, nonlinear=False), wp)
        co = sfwm_coefficients(g, wp, ws, wi, chi3=cfg.chi3, convention=cfg.convention)
        w.json("sfwm_coefficients.json", {"coefficients": co.to_dict()})
        rows += [("sfwm", k, float(v)) for k, v in sorted(co.to_dict().items()) if isinstance(v, float)]
        print(f"sfwm   gamma_fwm = {co.to_dict()['gamma_fwm_per_km_W']:.2f} /(km W), "
              f"A_fwm = {co.area_fwm * 1e12:.4f} um^2")
    if "tospdc" in cfg.processes:
        co = tospdc_coefficients(g, wp, chi3=cfg.chi3, convention=cfg.convention)
        w.json("tospdc_coefficients.json", {"coefficients": co.to_dict()})
        rows += [("tospdc", k, float(v)) for k, v in sorted(co.to_dict().items()) if isinstance(v, float)]
        print(f"tospdc gamma_pdc = {co.to_dict()['gamma_pdc_per_km_W']:.2f} /(km W), "
              f"A_pdc = {co.area_pdc * 1e12:.4f} um^2")
    w.csv("coefficients.csv", _table(["process", "quantity", "value"], rows))
    _report(w)
    return EXIT_OK


def _request(cfg, g, process, **over):
    pump = cfg.pump()
    return EfficiencyRequest(process, g, pump, cfg.length, cfg.regime, chi3=cfg.chi3, convention=cfg.convention,
                             quadrature=cfg.quadrature).with_(**over)


def cmd_efficiency(cfg, args):
    g = _geometry(cfg)
    w = Writer(cfg)
    rows = []
    for proc in cfg.processes:
        res = efficiency(_request(cfg, g, proc))
        w.json(f"{proc}_efficiency_{cfg.regime}.json", {"result": res.to_dict()})
        rows.append((proc, cfg.regime, res.eta, res.rel_error, res.gamma, res.prefactor, res.integral))
        print(f"{proc:6s} {cfg.regime:6s} eta = {res.eta:.4e}  (rel. error {res.rel_error:.1e})")
    w.csv(f"efficiency_{cfg.regime}.csv",
          _table(["process", "regime", "eta", "rel_error", "gamma_per_W_m", "prefactor", "integral"], rows))
    _report(w)
    return EXIT_OK


def cmd_sweep(cfg, args):
    if args.parameter:
        cfg.sweep_parameter = args.parameter
    if args.values:
        if not cfg.sweep_parameter:
            raise ConfigError("--values needs --parameter")
        cfg.sweep_values = tuple(parse_list(args.values, cfg.sweep_parameter))
    if cfg.sweep_parameter not in SWEEP_PARAMETERS or not cfg.sweep_values:
        raise ConfigError("sweep needs a parameter and values ([sweep] section or --parameter/--values)")
    if cfg.sweep_parameter == "bandwidth" and cfg.regime == "cw":
        raise ConfigError("a bandwidth sweep needs the pulsed regime")
    g = _geometry(cfg)
    w = Writer(cfg)
    rows, records = [], []
    from .efficiency import sweep

    for proc in cfg.processes:
        for value, res in sweep(_request(cfg, g, proc), cfg.sweep_parameter, cfg.sweep_values):
            rows.append((proc, cfg.regime, value, res.eta, res.rel_error))
            records.append({"process": proc, "value": value, "result": res.to_dict()})
            print(f"{proc:6s} {cfg.sweep_parameter}={value:.4e}  eta = {res.eta:.4e}")
    unit = {"bandwidth": "rad_s", "power": "W", "length": "m"}[cfg.sweep_parameter]
    stem = f"sweep_{cfg.sweep_parameter}_{cfg.regime}"
    w.csv(f"{stem}.csv", _table(["process", "regime", f"{cfg.sweep_parameter}_{unit}", "eta", "rel_error"], rows))
    w.json(f"{stem}.json", {"parameter": cfg.sweep_parameter, "points": records})
    _report(w)
    return EXIT_OK


def _report(w):
    for p in w.written:
        print(f"wrote {p}")


COMMANDS = {
    "design": cmd_design,
    "contour": cmd_contour,
    "jsi": cmd_jsi,
    "coefficients": cmd_coefficients,
    "efficiency": cmd_efficiency,
    "sweep": cmd_sweep,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="fibersource", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--out", help="output directory (overrides [output] directory)")
    common.add_argument("--format", choices=["csv", "json", "both"], help="output formats")
    common.add_argument("--normalize", action="store_true", help="also write peak-normalized joint spectra")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("design", parents=[common], help="core radius for degenerate TOSPDC")
    p.add_argument("--target", help='triplet wavelength, e.g. "1.596um"')
    sub.add_parser("contour", parents=[common], help="perfect-phasematching contours")
    sub.add_parser("jsi", parents=[common], help="joint spectral intensities")
    sub.add_parser("coefficients", parents=[common], help="effective areas and nonlinear coefficients")
    sub.add_parser("efficiency", parents=[common], help="conversion efficiency at one operating point")
    p = sub.add_parser("sweep", parents=[common], help="efficiency versus bandwidth, power or length")
    p.add_argument("--parameter", choices=SWEEP_PARAMETERS)
    p.add_argument("--values", help='comma-separated values with units, e.g. "1mW,10mW,100mW"')
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig(radius=0.395e-6)
        if args.command == "design" and args.target:
            cfg.design_target_um = parse_quantity(args.target, "length") * 1e6
        if args.out:
            cfg.out_dir = args.out
        if args.format:
            cfg.formats = _formats(args.format)
        if args.normalize:
            cfg.normalize = True
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, OutOfValidityRange) as exc:
        print(f"fibersource: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FiberSourceError as exc:
        print(f"fibersource: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
