"""Run configuration: flat ``key = value`` text with optional sections.

Keys in the ``[run]`` section (or before any section header) keep their bare
names; keys in other sections are addressed as ``section.key``, e.g.
``bc.x``, ``phase1.gamma`` or ``gravity.y``. Overrides use the same names.
Anything not given falls back to the defaults of the selected case.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .boundary import BC, BoundaryConfigError, BoundarySpec
from .cases import CaseSpec, get_case
from .eos import EosKind, EosSpec
from .model import Phases

OUTPUT_ENV = "CURLFREE_OUTPUT_DIR"

_BOOL = {"on": True, "off": False, "true": True, "false": False, "yes": True, "no": False,
         "1": True, "0": False}


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    case: str
    nx: int
    ny: int
    cfl: float
    t_end: float
    bc: BoundarySpec
    phases: Phases
    gravity: tuple
    domain: tuple
    curl_free: bool = True
    order: int = 2
    output_dir: str = "output"
    output_every: float | None = None
    diag_every: int = 1
    write_vtk: bool = True
    max_steps: int | None = None
    restart: str | None = None
    workers: int = 1
    c_h: float | None = None

    def __post_init__(self):
        if not (0.0 < self.cfl <= 1.0):
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.t_end > 0.0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        min_ny = 1 if get_case(self.case).domain[2] is None else 4
        if self.nx < 4 or self.ny < min_ny:
            raise ConfigError(f"grid too small: nx={self.nx}, ny={self.ny}")
        if self.order not in (1, 2):
            raise ConfigError("order must be 1 or 2")
        if self.diag_every < 1:
            raise ConfigError("diag_every must be at least 1")
        if self.output_every is not None and not self.output_every > 0.0:
            raise ConfigError("output_every must be positive")
        for n, side in ((self.nx, self.bc.x_lo), (self.ny, self.bc.y_lo)):
            if side is BC.PERIODIC and n < 2:
                raise ConfigError("periodic boundaries need at least two cells")

    @property
    def case_spec(self) -> CaseSpec:
        return get_case(self.case)

    def flat(self) -> dict:
        """Fully resolved key/value pairs, in the same naming used for input."""
        out = {
            "case": self.case, "nx": self.nx, "ny": self.ny, "cfl": self.cfl,
            "t_end": self.t_end, "curl_free": "on" if self.curl_free else "off",
            "order": self.order, "output_dir": self.output_dir,
            "output_every": "" if self.output_every is None else self.output_every,
            "diag_every": self.diag_every, "write_vtk": "on" if self.write_vtk else "off",
            "max_steps": "" if self.max_steps is None else self.max_steps,
            "restart": self.restart or "", "workers": self.workers,
            "c_h": "auto" if self.c_h is None else self.c_h,
            "bc.x_lo": self.bc.x_lo.value, "bc.x_hi": self.bc.x_hi.value,
            "bc.y_lo": self.bc.y_lo.value, "bc.y_hi": self.bc.y_hi.value,
            "gravity.x": self.gravity[0], "gravity.y": self.gravity[1],
            "domain.x_lo": self.domain[0], "domain.x_hi": self.domain[1],
            "domain.y_lo": "" if self.domain[2] is None else self.domain[2],
            "domain.y_hi": "" if self.domain[3] is None else self.domain[3],
        }
        for name, spec in (("phase1", self.phases.first), ("phase2", self.phases.second)):
            out[f"{name}.eos"] = spec.kind.value
            out[f"{name}.gamma"] = spec.gamma
            if spec.kind is EosKind.STIFFENED:
                out[f"{name}.p0"] = spec.p0
                out[f"{name}.rho0"] = spec.rho0
                out[f"{name}.c0"] = spec.c0
        return out

    def to_ini(self) -> str:
        sections: dict[str, list[str]] = {"run": []}
        for key, value in self.flat().items():
            sec, _, name = key.rpartition(".")
            sections.setdefault(sec or "run", []).append(f"{name} = {value}")
        return "\n".join(f"[{s}]\n" + "\n".join(lines) + "\n" for s, lines in sections.items())

    def with_values(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def _flatten(text: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    first = next((ln.strip() for ln in text.splitlines()
                  if ln.strip() and not ln.strip().startswith(("#", ";"))), "")
    if not first.startswith("["):
        text = "[run]\n" + text
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    flat = {}
    for sec in parser.sections():
        for key, value in parser.items(sec):
            flat[key if sec == "run" else f"{sec}.{key}"] = value.strip()
    return flat


def parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override must look like key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _as(kind, raw, key):
    try:
        if kind is bool:
            return _BOOL[raw.lower()]
        return kind(raw)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def _optional(raw):
    return None if raw is None or raw == "" or raw.lower() in ("none", "auto") else raw


def _phase(flat: dict, name: str, default: EosSpec) -> EosSpec:
    keys = {k.split(".", 1)[1]: flat.pop(k) for k in list(flat) if k.startswith(name + ".")}
    if not keys:
        return default
    kind = keys.pop("eos", default.kind.value).lower()
    same = kind == default.kind.value
    try:
        gamma = float(keys.pop("gamma", default.gamma if same else "nan"))
        if kind == "ideal":
            spec = EosSpec.ideal(gamma)
        elif kind == "stiffened":
            vals = {}
            for k in ("p0", "rho0", "c0"):
                if k in keys:
                    vals[k] = float(keys.pop(k))
                elif same:
                    vals[k] = getattr(default, k)
                else:
                    raise ConfigError(f"{name}.{k} is required for a stiffened gas")
            spec = EosSpec.stiffened(gamma, **vals)
        else:
            raise ConfigError(f"{name}.eos must be ideal or stiffened")
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc
    if keys:
        raise ConfigError(f"unknown keys for {name}: {sorted(keys)}")
    return spec


def build_config(flat: dict) -> RunConfig:
    flat = dict(flat)
    if "case" not in flat:
        raise ConfigError("config needs a 'case' key")
    try:
        case = get_case(flat.pop("case"))
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc

    def take(key, kind, default):
        raw = flat.pop(key, None)
        return default if raw is None else _as(kind, raw, key)

    nx = take("nx", int, case.nx)
    ny = take("ny", int, case.ny)
    bcx = flat.pop("bc.x", case.bc_x)
    bcy = flat.pop("bc.y", case.bc_y)
    try:
        bc = BoundarySpec(flat.pop("bc.x_lo", bcx), flat.pop("bc.x_hi", bcx),
                          flat.pop("bc.y_lo", bcy), flat.pop("bc.y_hi", bcy))
    except (BoundaryConfigError, ValueError) as exc:
        raise ConfigError(f"boundary: {exc}") from exc
    gravity = (take("gravity.x", float, case.gravity[0]), take("gravity.y", float, case.gravity[1]))
    d = case.domain
    domain = (take("domain.x_lo", float, d[0]), take("domain.x_hi", float, d[1]))
    y_lo, y_hi = _optional(flat.pop("domain.y_lo", None)), _optional(flat.pop("domain.y_hi", None))
    domain += (d[2] if y_lo is None else _as(float, y_lo, "domain.y_lo"),
               d[3] if y_hi is None else _as(float, y_hi, "domain.y_hi"))
    phases = Phases(_phase(flat, "phase1", case.phases.first),
                    _phase(flat, "phase2", case.phases.second))
    out_default = os.environ.get(OUTPUT_ENV, str(Path("output") / case.name))
    output_every = _optional(flat.pop("output_every", None))
    max_steps = _optional(flat.pop("max_steps", None))
    restart = _optional(flat.pop("restart", None))
    c_h = _optional(flat.pop("c_h", None))
    cfg = dict(
        case=case.name, nx=nx, ny=ny,
        cfl=take("cfl", float, case.cfl), t_end=take("t_end", float, case.t_end),
        bc=bc, phases=phases, gravity=gravity, domain=domain,
        curl_free=take("curl_free", bool, True), order=take("order", int, 2),
        output_dir=flat.pop("output_dir", out_default),
        output_every=None if output_every is None else _as(float, output_every, "output_every"),
        diag_every=take("diag_every", int, 1), write_vtk=take("write_vtk", bool, True),
        max_steps=None if max_steps is None else _as(int, max_steps, "max_steps"),
        restart=restart, workers=take("workers", int, 1),
        c_h=None if c_h is None else _as(float, c_h, "c_h"),
    )
    if flat:
        raise ConfigError(f"unknown config keys: {sorted(flat)}")
    return RunConfig(**cfg)


def parse_config(text: str, overrides=None) -> RunConfig:
    flat = _flatten(text)
    flat.update(parse_overrides(overrides) if not isinstance(overrides, dict) else overrides)
    return build_config(flat)


def load_config(path: str | Path, overrides=None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, overrides)
