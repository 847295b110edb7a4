"""Command-line front end.

Every command prints one JSON document ``{"command", "status", "payload"}``
to stdout.  Floats are written with 17 significant digits so output is
byte-reproducible.  Exit codes: 0 ok, 2 violation, 1 error.

Points and matrices are read from JSON files (``-`` for stdin): a complex
number is ``[re, im]`` or a plain number, a point is an array of complex
numbers, a matrix is a row-major array of 9 complex numbers (nested rows are
accepted too).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import boundary, domain312, domain333, geometry, schwarz, tetrablock
from .core_types import (
    DEFAULT_CONFIG, MudomError, SeparationNotCertified, ScanConfig, as_matrix3, as_point,
    derive_seed, json_vector, parallel_map, random_contraction,
)

__all__ = ["main", "dumps", "CommandResult"]

EXIT = {"ok": 0, "violation": 2, "error": 1}


class CommandResult:
    __slots__ = ("command", "status", "payload")

    def __init__(self, command, status, payload):
        if status not in EXIT:
            raise ValueError(status)
        self.command, self.status, self.payload = command, status, payload

    @property
    def exit_code(self) -> int:
        return EXIT[self.status]

    def to_json(self) -> dict:
        return {"command": self.command, "status": self.status, "payload": self.payload}


def _encode(obj, out):
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    elif isinstance(obj, (complex, np.complexfloating)):
        _encode([obj.real, obj.imag], out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)) + ": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    elif hasattr(obj, "to_json"):
        _encode(obj.to_json(), out)
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with floats at 17 significant digits and NaN/inf as null."""
    out = []
    _encode(obj, out)
    return "".join(out)


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MudomError(f"cannot read {path}: {exc}") from exc


def _config(args) -> ScanConfig:
    cfg = DEFAULT_CONFIG
    grid = getattr(args, "grid", None)
    tol = getattr(args, "tol", None)
    if grid is not None:
        cfg = cfg.with_(torus_n=grid)
    if tol is not None:
        cfg = cfg.with_(tol=tol, boundary_band=max(cfg.boundary_band, tol))
    return cfg


# ---------------------------------------------------------------------------
# commands

_ARITY = {"e333": 7, "e312": 5, "tetra": 3, "bidisc": 2}


def cmd_membership(args) -> CommandResult:
    cfg = _config(args)
    x = as_point(_read_json(args.point_file), _ARITY[args.domain])
    closed = args.closure
    if args.domain == "e333":
        v = (domain333.in_Gamma_333 if closed else domain333.in_G_333)(x, cfg)
    elif args.domain == "e312":
        v = (domain312.in_Gamma_312 if closed else domain312.in_G_312)(x, cfg)
    elif args.domain == "tetra":
        v = (tetrablock.in_Gamma_tetra if closed else tetrablock.in_G_tetra)(x, cfg)
    else:
        v = (tetrablock.in_Gamma_bidisc if closed else tetrablock.in_G_bidisc)(x, cfg)
    payload = {"domain": args.domain, "closure": closed,
               "member": v.in_closure if closed else v.inside, "verdict": v.to_json()}
    return CommandResult("membership", "ok", payload)


def cmd_mu(args) -> CommandResult:
    cfg = _config(args)
    A = as_matrix3(_read_json(args.matrix_file))
    r = domain333.mu_E333(A, cfg)
    return CommandResult("mu", "ok", r.to_json())


CERTIFIED = 1e-6


def _crosscheck_point(x, cfg, rpoly: bool):
    oracles = {
        "psi1_torus": domain333.in_G_333(x, cfg),
        "fiber_X": domain333.in_G_333_fiberwise(x, "X", cfg),
        "fiber_Y": domain333.in_G_333_fiberwise(x, "Y", cfg),
        "fiber_Z": domain333.in_G_333_fiberwise(x, "Z", cfg),
        "eta_bridge": domain312.eta_bridge_G(x, cfg),
    }
    report = {k: {"state": v.state.value, "margin": v.margin} for k, v in oracles.items()}
    certified = {k: v.state.value for k, v in oracles.items() if abs(v.margin) > CERTIFIED}
    conflict = len(set(certified.values())) > 1
    if rpoly:
        z = domain333.rpoly_zero_search(x)
        report["rpoly_search"] = {"zero_found": z["found"], "min_abs": z["min_abs"]}
        if z["found"] and "Inside" in certified.values():
            conflict = True
    band = len(certified) < len(oracles)
    return {"point": json_vector(x), "oracles": report, "agree": not conflict,
            "band_flagged": band}


def cmd_crosscheck(args) -> CommandResult:
    cfg = _config(args)
    if args.point_file is not None:
        points = [as_point(_read_json(args.point_file), 7)]
        source = {"point_file": args.point_file}
    else:
        points = [domain333.pi333(random_contraction(derive_seed(args.seed, k), args.norm_bound))
                  for k in range(args.sample)]
        source = {"sample": args.sample, "seed": args.seed, "norm_bound": args.norm_bound}
    rows = parallel_map(lambda x: _crosscheck_point(x, cfg, not args.no_rpoly), points)
    disagreements = [i for i, r in enumerate(rows) if not r["agree"]]
    payload = {"source": source, "config": cfg.to_json(), "certified_margin": CERTIFIED,
               "n": len(rows), "disagreements": disagreements, "results": rows}
    return CommandResult("crosscheck", "violation" if disagreements else "ok", payload)


def cmd_boundary(args) -> CommandResult:
    cfg = _config(args)
    if args.point_file is None:
        rep = boundary.unitary_image_checks(args.seed, args.unitaries, cfg)
        if args.set == "K":
            rep = {k: v for k, v in rep.items() if k != "worst_deviation_K1"}
        elif args.set == "K1":
            rep = {k: v for k, v in rep.items() if k != "worst_deviation_K"}
        return CommandResult("boundary", "ok" if rep["ok"] else "violation",
                             dict(rep, set=args.set))
    if args.set == "K":
        x = as_point(_read_json(args.point_file), 7)
        v = boundary.in_K(x, cfg)
        fib = boundary.fiber_boundary_check(x, cfg)
        bridge = boundary.k_bridge_check(x, cfg)
        ok = fib["agrees_with_K"] and bridge["agree"]
        payload = {"set": "K", "verdict": v.to_json(), "fiber_check": fib, "bridge": bridge}
    else:
        xt = as_point(_read_json(args.point_file), 5)
        v = boundary.in_K1(xt, cfg)
        ok = True
        payload = {"set": "K1", "verdict": v.to_json()}
    payload["member"] = v.inside
    return CommandResult("boundary", "ok" if ok else "violation", payload)


def cmd_schwarz(args) -> CommandResult:
    cfg = _config(args)
    lam = complex(args.lambda0.replace(" ", ""))
    raw = _read_json(args.point_file)
    if len(raw) == 7:
        rep = schwarz.schwarz_necessary_333(lam, as_point(raw, 7), cfg)
    else:
        rep = schwarz.schwarz_necessary_312(lam, as_point(raw, 5), cfg)
    return CommandResult("schwarz", "ok" if rep.necessary_ok else "violation", rep.to_json())


def cmd_separate(args) -> CommandResult:
    cfg = _config(args)
    a = as_point(_read_json(args.point_file), 7)
    try:
        cert = geometry.separate(a, cfg, strategy=args.strategy, n_samples=args.samples,
                                 seed=args.seed)
    except SeparationNotCertified as exc:
        return CommandResult("separate", "violation", {"reason": str(exc)})
    return CommandResult("separate", "ok", cert.to_json())


def _parse_axis(tok: str, dim: int):
    tok = tok.strip().lower()
    part = tok[-2:]
    if part not in ("re", "im") or not tok.startswith("x"):
        raise MudomError(f"bad axis {tok!r}; use e.g. x1re or x7im")
    idx = int(tok[1:-2]) - 1
    if not 0 <= idx < dim:
        raise MudomError(f"axis index out of range in {tok!r}")
    return idx, (1.0 if part == "re" else 1j)


def cmd_slice(args) -> CommandResult:
    cfg = _config(args)
    dim = 7 if args.domain == "e333" else 5
    axes = args.plane.split(",")
    if len(axes) != 2:
        raise MudomError("--plane needs two axes, e.g. x1re,x7re")
    (i, di), (j, dj) = (_parse_axis(a, dim) for a in axes)
    base = (as_point(_read_json(args.center), dim) if args.center
            else np.zeros(dim, dtype=complex))
    s = np.linspace(-args.extent, args.extent, args.res)
    test = domain333.in_Gamma_333 if dim == 7 else domain312.in_Gamma_312

    def cell(ab):
        a, b = ab
        p = base.copy()
        p[i] += di * a
        p[j] += dj * b
        v = test(p, cfg)
        return [float(a), float(b), v.state.value, v.margin]

    cells = parallel_map(cell, [(a, b) for b in s for a in s])
    if args.format == "csv":
        lines = ["u,v,state,margin"] + [
            f"{format(u, '.17g')},{format(v, '.17g')},{st},{format(m, '.17g')}"
            for u, v, st, m in cells]
        payload = {"plane": args.plane, "res": args.res, "csv": "\n".join(lines)}
    else:
        payload = {"plane": args.plane, "res": args.res, "extent": args.extent,
                   "cells": cells}
    return CommandResult("slice", "ok", payload)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mudomains", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def scan_flags(sp):
        sp.add_argument("--grid", type=int, default=None, help="torus_n for scans")
        sp.add_argument("--tol", type=float, default=None)

    m = sub.add_parser("membership", help="three-state membership verdict")
    m.add_argument("domain", choices=sorted(_ARITY))
    m.add_argument("point_file")
    m.add_argument("--closure", action="store_true", help="test the closed domain")
    scan_flags(m)
    m.set_defaults(func=cmd_membership)

    u = sub.add_parser("mu", help="structured singular value")
    u.add_argument("matrix_file")
    u.add_argument("--tol", type=float, default=None)
    u.set_defaults(func=cmd_mu)

    c = sub.add_parser("crosscheck", help="run the equivalent G oracles and compare")
    c.add_argument("point_file", nargs="?")
    c.add_argument("--sample", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--norm-bound", type=float, default=0.9)
    c.add_argument("--no-rpoly", action="store_true", help="skip the direct zero search")
    scan_flags(c)
    c.set_defaults(func=cmd_crosscheck)

    b = sub.add_parser("boundary", help="K / K1 membership and unitary images")
    b.add_argument("--set", choices=("K", "K1"), default="K")
    b.add_argument("point_file", nargs="?")
    b.add_argument("--unitaries", type=int, default=50)
    b.add_argument("--seed", type=int, default=0)
    scan_flags(b)
    b.set_defaults(func=cmd_boundary)

    s = sub.add_parser("schwarz", help="Schwarz necessary conditions")
    s.add_argument("--lambda0", required=True)
    s.add_argument("point_file")
    scan_flags(s)
    s.set_defaults(func=cmd_schwarz)

    e = sub.add_parser("separate", help="polynomial separation certificate")
    e.add_argument("point_file")
    e.add_argument("--strategy", choices=("auto", "case_split"), default="auto")
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    scan_flags(e)
    e.set_defaults(func=cmd_separate)

    sl = sub.add_parser("slice", help="verdict grid over a real 2-D slice")
    sl.add_argument("--plane", required=True, help="two axes such as x1re,x7re")
    sl.add_argument("--res", type=int, default=21)
    sl.add_argument("--extent", type=float, default=1.5)
    sl.add_argument("--domain", choices=("e333", "e312"), default="e333")
    sl.add_argument("--center", default=None, help="point file for the slice origin")
    sl.add_argument("--format", choices=("json", "csv"), default="json")
    scan_flags(sl)
    sl.set_defaults(func=cmd_slice)
    return p


def run(argv=None) -> CommandResult:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MudomError, ValueError, TypeError) as exc:
        return CommandResult(args.command, "error",
                             {"error": type(exc).__name__, "message": str(exc)})


def main(argv=None) -> int:
    try:
        res = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return 1 if exc.code else 0
    if res.command == "slice" and res.status == "ok" and "csv" in res.payload:
        sys.stdout.write(res.payload["csv"] + "\n")
    else:
        sys.stdout.write(dumps(res.to_json()) + "\n")
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
