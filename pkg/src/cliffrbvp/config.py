"""JSON problem configs and their translation into solver objects."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from .clifford_rbvp import FAMILY_MODES, CliffordRbvp, ConformalMaps
from .complex_rbvp import CONDITION_RTOL
from .contour import Contour, from_spec
from .errors import ContourError, RbvpError
from .exprlang import ExprSyntaxError, compile_expr

DEFAULT_NODES = 512


class ConfigError(RbvpError, ValueError):
    """Malformed problem config; the message names the offending field."""


def _pair(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(f"{where}: expected a number or [re, im], got {value!r}")


def _expr(section: Mapping, key: str, where: str):
    if key not in section:
        raise ConfigError(f"{where}.{key}: missing")
    src = section[key]
    if not isinstance(src, str):
        raise ConfigError(f"{where}.{key}: expected an expression string")
    try:
        return compile_expr(src)
    except ExprSyntaxError as exc:
        raise ConfigError(f"{where}.{key}: {exc}") from None


@dataclass(frozen=True)
class ProblemConfig:
    contour: dict
    g: tuple[str, str]
    G: Optional[tuple[str, str]] = None
    G_const: Optional[tuple[complex, complex]] = None
    vanish_at_infinity: bool = True
    family_count: int = 3
    family_mode: str = "paired"
    tol: float = CONDITION_RTOL
    conformal: Optional[dict] = None
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> ProblemConfig:
        if not isinstance(d, Mapping):
            raise ConfigError("config root must be an object")
        if "contour" not in d or not isinstance(d["contour"], Mapping):
            raise ConfigError("contour: missing or not an object")
        if ("G" in d) == ("G_const" in d):
            raise ConfigError("exactly one of G and G_const must be given")
        if "g" not in d or not isinstance(d["g"], Mapping):
            raise ConfigError("g: missing or not an object")
        g = tuple(_expr(d["g"], k, "g").source for k in ("g0_expr", "g1_expr"))
        G = G_const = None
        if "G" in d:
            if not isinstance(d["G"], Mapping):
                raise ConfigError("G: expected an object")
            G = tuple(_expr(d["G"], k, "G").source for k in ("g0_expr", "g1_expr"))
        else:
            sec = d["G_const"]
            if not isinstance(sec, Mapping) or "a" not in sec or "b" not in sec:
                raise ConfigError("G_const: expected an object with fields a and b")
            G_const = (_pair(sec["a"], "G_const.a"), _pair(sec["b"], "G_const.b"))
        conformal = d.get("conformal")
        if conformal is not None:
            if not isinstance(conformal, Mapping):
                raise ConfigError("conformal: expected an object")
            for k in ("chi_plus", "chi_minus", "phi_plus", "phi_minus"):
                _expr(conformal, k, "conformal")
            conformal = dict(conformal)
        vanish = d.get("vanish_at_infinity", True)
        if not isinstance(vanish, bool):
            raise ConfigError("vanish_at_infinity: expected true or false")
        count = d.get("family_count", 3)
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise ConfigError("family_count: expected a positive integer")
        mode = d.get("family_mode", "paired")
        if mode not in FAMILY_MODES:
            raise ConfigError(f"family_mode: expected one of {FAMILY_MODES}")
        tol = d.get("tol", CONDITION_RTOL)
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
            raise ConfigError("tol: expected a positive number")
        return cls(dict(d["contour"]), g, G, G_const, vanish, count, mode, float(tol), conformal, dict(d))

    @classmethod
    def from_file(cls, path) -> ProblemConfig:
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    def build_contour(self, nodes: Optional[int] = None) -> Contour:
        n = nodes if nodes is not None else self.contour.get("nodes", DEFAULT_NODES)
        try:
            return from_spec(self.contour, int(n))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ContourError):
                raise ConfigError(f"contour: {exc}") from None
            raise ConfigError(f"contour: malformed spec ({exc!r})") from None

    def build(self, nodes: Optional[int] = None) -> tuple[CliffordRbvp, Optional[ConformalMaps]]:
        c = self.build_contour(nodes)
        G0, G1 = self.G if self.G is not None else self.G_const
        p = CliffordRbvp.from_hat(c, G0, G1, self.g[0], self.g[1], self.vanish_at_infinity)
        maps = None
        if self.conformal is not None:
            maps = ConformalMaps.from_specs(*(self.conformal[k] for k in ("chi_plus", "chi_minus", "phi_plus", "phi_minus")))
        return p, maps
