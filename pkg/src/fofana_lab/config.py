"""Experiment configuration: a single JSON document, validated up front.

Example (every key is optional; omitted keys take the defaults shown by
``fofana-lab default-config``)::

    {
      "grids": [
        {"d": 1, "L": 64, "m": 64},
        {"d": 2, "L": 16, "m": 16,
         "t_caloric": {"base": 0.02, "ratio": 1.1, "count": 57}}
      ],
      "exponents": [[1, 2, 1.5], [2, 4, 3]],
      "ladders": {"r": {"base": 0.015625, "ratio": 2, "count": 13}},
      "catalog": "all",
      "seed": 0
    }

Exponent triples are written ``[p, q, alpha]``.  Ladders are
``{"base", "ratio", "count"}`` objects.  Grid-dependent ladders live in the
grid entry; ``r`` (Fofana supremum), ``rho`` (dilation functional) and
``mu`` (restriction table) are shared.  Refinement studies coarsen a grid to
``m/2`` and square the ratio of its ladders, so those ladders need an odd
count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .catalog import catalog
from .grid import GridSpec, Ladder, make_grid
from .norms import DEFAULT_R_LADDER, ExponentError, Exponents

__all__ = ["ConfigError", "GridConfig", "ExperimentConfig", "load_config", "parse_config", "default_config_dict"]

GRID_LADDERS = ("t", "t_harmonic", "t_heat", "t_caloric")
SHARED_LADDERS = ("r", "rho", "mu")
TOP_KEYS = ("grids", "exponents", "ladders", "catalog", "seed", "out")


class ConfigError(ValueError):
    """The configuration violates a precondition; raised before any computation."""


def _ladder_dict(lad: Ladder) -> dict[str, float]:
    return {"base": lad.base, "ratio": lad.ratio, "count": lad.count}


def _default_grid_ladders(spec: GridSpec) -> dict[str, Ladder]:
    from .maximal import default_t_ladder

    caloric_ratio = 1.05 if spec.d == 1 else 1.1
    # heights up to 0.6 L^2, where the torus has equilibrated to ~1e-10
    caloric = Ladder.spanning(0.02, 0.6 * spec.L**2, caloric_ratio)
    if caloric.count % 2 == 0:
        caloric = Ladder(caloric.base, caloric.ratio, caloric.count + 1)
    return {
        "t": default_t_ladder(spec),
        # the sampled Poisson kernel needs t >= 2h on the coarse (m/2) grid
        "t_harmonic": Ladder(max(0.25, 4 * spec.h), 2**0.25, 17),
        "t_heat": Ladder(0.05, 1.05, 77),
        "t_caloric": caloric,
    }


@dataclass(frozen=True)
class GridConfig:
    spec: GridSpec
    ladders: dict[str, Ladder] = field(hash=False)

    @property
    def d(self) -> int:
        return self.spec.d

    def coarse(self) -> GridSpec:
        return make_grid(self.spec.d, int(self.spec.L), int(self.spec.m) // 2)

    def coarse_ladder(self, name: str) -> Ladder:
        lad = self.ladders[name]
        return Ladder(lad.base, lad.ratio**2, (lad.count + 1) // 2)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"d": self.spec.d, "L": int(self.spec.L), "m": int(self.spec.m)}
        for k in GRID_LADDERS:
            out[k] = _ladder_dict(self.ladders[k])
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    grids: tuple[GridConfig, ...]
    exponents: tuple[Exponents, ...]
    r: Ladder
    rho: Ladder
    mu: Ladder
    catalog: tuple[str, ...] | None
    seed: int
    out: str | None = None

    def functions(self, d: int) -> list[str]:
        """Selected catalog names available in dimension ``d``, in catalog order."""
        names = list(catalog(d, self.seed))
        if self.catalog is None:
            return names
        return [n for n in names if n in self.catalog]

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return ExperimentConfig(self.grids, self.exponents, self.r, self.rho, self.mu, self.catalog, seed, self.out)

    def to_dict(self) -> dict[str, Any]:
        """Canonical echo of the fully resolved configuration."""
        return {
            "grids": [g.to_dict() for g in self.grids],
            "exponents": [[e.p, e.q, e.alpha] for e in self.exponents],
            "ladders": {"r": _ladder_dict(self.r), "rho": _ladder_dict(self.rho), "mu": _ladder_dict(self.mu)},
            "catalog": "all" if self.catalog is None else list(self.catalog),
            "seed": self.seed,
        }


def default_config_dict() -> dict[str, Any]:
    return {
        "grids": [{"d": 1, "L": 64, "m": 64}, {"d": 2, "L": 16, "m": 16}],
        "exponents": [[1, 2, 1.5], [2, 4, 3]],
        "ladders": {
            "r": _ladder_dict(DEFAULT_R_LADDER),
            "rho": _ladder_dict(DEFAULT_R_LADDER),
            "mu": {"base": 1.0, "ratio": 2.0, "count": 4},
        },
        "catalog": "all",
        "seed": 0,
    }


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _number(v: Any, where: str) -> float:
    _require(isinstance(v, (int, float)) and not isinstance(v, bool), f"{where}: expected a number, got {v!r}")
    _require(math.isfinite(v), f"{where}: must be finite, got {v!r}")
    return float(v)


def _integer(v: Any, where: str) -> int:
    _require(isinstance(v, int) and not isinstance(v, bool), f"{where}: expected an integer, got {v!r}")
    return int(v)


def _keys(obj: Any, allowed: tuple[str, ...], where: str) -> dict:
    _require(isinstance(obj, dict), f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(allowed))
    _require(not unknown, f"{where}: unknown key(s) {unknown}; allowed: {list(allowed)}")
    return obj


def _ladder(obj: Any, where: str) -> Ladder:
    _keys(obj, ("base", "ratio", "count"), where)
    _require(set(obj) == {"base", "ratio", "count"}, f"{where}: ladder needs base, ratio and count")
    try:
        return Ladder(_number(obj["base"], f"{where}.base"), _number(obj["ratio"], f"{where}.ratio"), _integer(obj["count"], f"{where}.count"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _grid(obj: Any, i: int) -> GridConfig:
    where = f"grids[{i}]"
    _keys(obj, ("d", "L", "m") + GRID_LADDERS, where)
    for k in ("d", "L", "m"):
        _require(k in obj, f"{where}: missing {k!r}")
    try:
        spec = make_grid(_integer(obj["d"], f"{where}.d"), _integer(obj["L"], f"{where}.L"), _integer(obj["m"], f"{where}.m"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    _require(spec.m >= 4, f"{where}: m must be at least 4 so the refinement studies can halve it")
    ladders = _default_grid_ladders(spec)
    for k in GRID_LADDERS:
        if k in obj:
            ladders[k] = _ladder(obj[k], f"{where}.{k}")
    t = ladders["t"]
    _require(t.is_dyadic, f"{where}.t: the convolution-height ladder must be dyadic (base a power of two, ratio 2)")
    _require(t.members[0] >= spec.h, f"{where}.t: heights must start at or above the grid step h={spec.h}")
    for k in ("t_harmonic", "t_heat", "t_caloric"):
        lad = ladders[k]
        _require(lad.count % 2 == 1 and lad.count >= 5, f"{where}.{k}: count must be odd and >= 5 for the refinement study")
    _require(
        ladders["t_harmonic"].members[0] >= 4 * spec.h,
        f"{where}.t_harmonic: heights must start at or above 2h of the coarse grid, i.e. {4 * spec.h:g}",
    )
    top = ladders["t_caloric"].top
    _require(
        top >= 0.5 * spec.L**2,
        f"{where}.t_caloric: top height {top:g} is too low; the half derivative needs heights up to about 0.6 L^2 = {0.6 * spec.L**2:g}",
    )
    return GridConfig(spec, ladders)


def parse_config(raw: Any) -> ExperimentConfig:
    """Validate a decoded JSON document and resolve defaults."""
    raw = {} if raw is None else raw
    _keys(raw, TOP_KEYS, "config")
    base = default_config_dict()

    grids_raw = raw.get("grids", base["grids"])
    _require(isinstance(grids_raw, list) and grids_raw, "grids: expected a non-empty list")
    grids = tuple(_grid(g, i) for i, g in enumerate(grids_raw))

    exps_raw = raw.get("exponents", base["exponents"])
    _require(isinstance(exps_raw, list) and exps_raw, "exponents: expected a non-empty list of [p, q, alpha]")
    exps = []
    for i, tr in enumerate(exps_raw):
        _require(isinstance(tr, list) and len(tr) == 3, f"exponents[{i}]: expected [p, q, alpha], got {tr!r}")
        p, q, a = (_number(v, f"exponents[{i}]") for v in tr)
        try:
            e = Exponents(p, q, a)
            for g in grids:
                e.theorem_mode(g.d)
        except ExponentError as exc:
            raise ConfigError(f"exponents[{i}] = {tr}: {exc}") from exc
        exps.append(e)

    lad_raw = _keys(raw.get("ladders", {}), SHARED_LADDERS, "ladders")
    shared = {k: _ladder(lad_raw.get(k, base["ladders"][k]), f"ladders.{k}") for k in SHARED_LADDERS}
    _require(shared["r"].is_dyadic, "ladders.r: must be dyadic so dilation reindexing is exact")
    _require(shared["rho"].is_dyadic, "ladders.rho: dilation factors must be powers of two")
    _require(shared["mu"].members[0] >= 1, "ladders.mu: members must be >= 1")

    cat_raw = raw.get("catalog", "all")
    if cat_raw == "all":
        names = None
    else:
        _require(isinstance(cat_raw, list) and cat_raw, "catalog: expected \"all\" or a non-empty list of names")
        known: set[str] = set()
        for g in grids:
            known |= set(catalog(g.d))
        for n in cat_raw:
            _require(isinstance(n, str) and n in known, f"catalog: unknown function {n!r}; known: {sorted(known)}")
        names = tuple(cat_raw)

    seed = _integer(raw.get("seed", 0), "seed")
    _require(seed >= 0, "seed: must be non-negative")
    out = raw.get("out")
    _require(out is None or isinstance(out, str), "out: expected a path string")
    return ExperimentConfig(grids, tuple(exps), shared["r"], shared["rho"], shared["mu"], names, seed, out)


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Read and validate a JSON config file (``None`` gives the defaults)."""
    if path is None:
        return parse_config({})
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)
