"""Flat ``key = value`` run configuration.

Blank lines and ``#`` comments are ignored. Later sources override earlier
ones: built-in defaults, then the config file, then ``--set`` flags. Every
invariant of the embedded parameter types is checked here, and problems are
reported with the line (or flag) and key that caused them.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from decoy_lm05.channel import ChannelParams, IntensitySet
from decoy_lm05.errors import ConfigError, InvalidIntensityError
from decoy_lm05.optimizer import OptimizeSpec, RateFormula
from decoy_lm05.sampler import SampleSpec

ENV_VAR = "DECOY_LM05_CONFIG"

_FLOAT_KEYS = {
    "alpha", "eta_ab", "y0", "e_det", "e0", "mu", "nu1", "nu2",
    "l_start", "l_stop", "l_step", "l_max", "distance",
    "f_ec", "mu_min", "mu_max", "tolerance",
}  # fmt: skip
_INT_KEYS = {"seed", "pulses", "threads"}
_BOOL_KEYS = {"optimize"}
_STR_KEYS = {"formula"}
_PER_FORMULA_MU = {f"mu_{f.value}" for f in RateFormula}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS | _PER_FORMULA_MU

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class Entry:
    value: str
    origin: str  # e.g. "cfg/run.cfg:12" or "--set"


def parse_lines(text: str, source: str) -> dict[str, Entry]:
    entries: dict[str, Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        origin = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{origin}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        _check_key(key, origin)
        entries[key] = Entry(value, origin)
    return entries


def parse_overrides(pairs: list[str]) -> dict[str, Entry]:
    entries: dict[str, Entry] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set: expected KEY=VALUE, got {pair!r}")
        key, value = (part.strip() for part in pair.split("=", 1))
        _check_key(key, "--set")
        entries[key] = Entry(value, "--set")
    return entries


def _check_key(key: str, origin: str) -> None:
    if key not in KNOWN_KEYS:
        raise ConfigError(f"{origin}: unknown key {key!r}")


@dataclass(frozen=True)
class RunConfig:
    channel: ChannelParams = field(default_factory=ChannelParams)
    mu: float = 0.45
    nu1: float = 0.05
    nu2: float = 0.0
    mu_overrides: dict[RateFormula, float] = field(default_factory=dict)
    l_start: float = 0.0
    l_stop: float = 100.0
    l_step: float = 1.0
    l_max: float | None = None
    distance: float | None = None
    formulas: tuple[RateFormula, ...] = (RateFormula.INFINITE,)
    optimize: bool = False
    f_ec: float = 1.22
    mu_min: float | None = None
    mu_max: float = 2.0
    tolerance: float = 1e-5
    seed: int = 0
    pulses: int = 1_000_000
    threads: int = 1

    def mu_for(self, formula: RateFormula) -> float:
        return self.mu_overrides.get(formula, self.mu)

    def spec_for(self, formula: RateFormula) -> OptimizeSpec:
        return OptimizeSpec(
            formula=formula,
            nu1=self.nu1,
            nu2=self.nu2,
            mu_min=self.mu_min,
            mu_max=self.mu_max,
            tolerance=self.tolerance,
            f_ec=self.f_ec,
        )

    def distances(self) -> list[float]:
        # index-based so that no rounding error accumulates along the sweep
        n = int(math.floor((self.l_stop - self.l_start) / self.l_step + 1e-9)) + 1
        return [self.l_start + k * self.l_step for k in range(n)]

    @property
    def cutoff_range(self) -> float:
        return self.l_max if self.l_max is not None else self.l_stop

    @property
    def single_distance(self) -> float:
        return self.distance if self.distance is not None else self.l_start

    def sample_spec(self) -> SampleSpec:
        return SampleSpec(self.pulses, self.seed)


def _convert(key: str, entry: Entry) -> object:
    v = entry.value
    try:
        if key in _FLOAT_KEYS or key in _PER_FORMULA_MU:
            x = float(v)
            if not math.isfinite(x):
                raise ValueError("not finite")
            return x
        if key in _INT_KEYS:
            return int(v)
        if key in _BOOL_KEYS:
            low = v.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError("not a boolean")
        if key == "formula":
            names = [s.strip() for s in v.split(",") if s.strip()]
            if not names:
                raise ValueError("no formula given")
            return tuple(RateFormula(name) for name in names)
    except ValueError as exc:
        raise ConfigError(f"{entry.origin}: key {key!r}: invalid value {v!r} ({exc})") from None
    return v


def build_config(entries: dict[str, Entry]) -> RunConfig:
    values = {key: _convert(key, entry) for key, entry in entries.items()}

    def fail(key: str, message: str) -> ConfigError:
        origin = entries[key].origin if key in entries else "defaults"
        return ConfigError(f"{origin}: key {key!r}: {message}")

    channel_keys = ("alpha", "eta_ab", "y0", "e_det", "e0")
    channel_kwargs = {k: values[k] for k in channel_keys if k in values}
    try:
        channel = ChannelParams(**channel_kwargs)
    except ValueError as exc:
        bad = next((k for k in channel_keys if k in str(exc)), channel_keys[0])
        raise fail(bad, str(exc)) from None

    mu_overrides = {
        RateFormula(key[3:]): values[key] for key in values if key in _PER_FORMULA_MU
    }
    plain = {
        k: values[k]
        for k in (
            "mu", "nu1", "nu2", "l_start", "l_stop", "l_step", "l_max", "distance",
            "optimize", "f_ec", "mu_min", "mu_max", "tolerance", "seed", "pulses", "threads",
        )  # fmt: skip
        if k in values
    }
    if "formula" in values:
        plain["formulas"] = values["formula"]
    cfg = RunConfig(channel=channel, mu_overrides=mu_overrides, **plain)

    if not cfg.l_step > 0:
        raise fail("l_step", f"must be > 0, got {cfg.l_step}")
    if not 0 <= cfg.l_start <= cfg.l_stop:
        raise fail("l_start", f"need 0 <= l_start <= l_stop, got {cfg.l_start} > {cfg.l_stop}")
    if cfg.l_max is not None and not cfg.l_max > 0:
        raise fail("l_max", f"must be > 0, got {cfg.l_max}")
    if cfg.distance is not None and not cfg.distance >= 0:
        raise fail("distance", f"must be >= 0, got {cfg.distance}")
    if not cfg.f_ec >= 1:
        raise fail("f_ec", f"must be >= 1, got {cfg.f_ec}")
    if cfg.pulses < 1:
        raise fail("pulses", f"must be >= 1, got {cfg.pulses}")
    if not 0 <= cfg.seed < 2**64:
        raise fail("seed", f"must be a 64-bit unsigned integer, got {cfg.seed}")
    if cfg.threads < 1:
        raise fail("threads", f"must be >= 1, got {cfg.threads}")
    if not cfg.mu > 0:
        raise fail("mu", f"must be > 0, got {cfg.mu}")

    if not cfg.nu1 > cfg.nu2 >= 0:
        raise fail("nu2" if "nu2" in entries else "nu1", f"need nu1 > nu2 >= 0, got {cfg.nu1}, {cfg.nu2}")
    if not cfg.nu1 + cfg.nu2 < 1:
        raise fail("nu1", f"need nu1 + nu2 < 1, got {cfg.nu1 + cfg.nu2}")
    if not cfg.optimize:
        for formula in cfg.formulas:
            if not formula.uses_decoys:
                continue
            try:
                IntensitySet(cfg.mu_for(formula), cfg.nu1, cfg.nu2)
            except InvalidIntensityError as exc:
                key = f"mu_{formula.value}" if formula in mu_overrides else "mu"
                if key not in entries:
                    # blame the decoy that the user actually set
                    key = next((k for k in ("nu1", "nu2") if k in entries), key)
                raise fail(key, str(exc)) from None
    for formula in cfg.formulas:
        try:
            cfg.spec_for(formula)
        except ValueError as exc:
            raise fail("mu_min" if "mu_min" in entries else "mu_max", str(exc)) from None
    return cfg


def load_config(path: str | os.PathLike[str] | None, overrides: list[str] | None = None) -> RunConfig:
    """Defaults, then the config file (or ``$DECOY_LM05_CONFIG``), then overrides."""
    entries: dict[str, Entry] = {}
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {p}: {exc.strerror}") from None
        entries.update(parse_lines(text, str(p)))
    entries.update(parse_overrides(overrides or []))
    return build_config(entries)
