"""``redsm run <scenario>``: command-line front end for the benchmark scenarios.

Config files hold ``key = value`` lines (UTF-8, ``#`` starts a comment).
List-valued keys take comma-separated values. Flags override file values.
When no seed is given, ``DEFAULT_SEED`` (20180701) is used.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import fields, replace

from .errors import ConfigError, ReDSMError
from .scenarios import DEFAULT_SEED, SCENARIO_NAMES, Scenario, default_scenario, run_scenario, validate

_PI_SUFFIX = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*$", re.IGNORECASE)

BUDGET_MODES = {"paper": "paper", "physical": "physical"}
BATCH_MODES = {"paper": "paper", "fixed-state": "fixed-state"}


def parse_theta(text: str, key: str = "theta") -> float:
    """Radians (``0.785``) or a multiple of pi (``0.25pi``, ``pi``)."""
    raw = text.strip()
    m = _PI_SUFFIX.match(raw)
    try:
        if m:
            value = (float(m.group(1)) if m.group(1) else 1.0) * math.pi
        else:
            value = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {text!r} as an angle") from None
    if not math.isfinite(value) or not 0.0 < value <= math.pi / 2 + 1e-15:
        raise ConfigError(f"{key}: {text!r} violates 0<theta<=pi/2")
    return min(value, math.pi / 2)


def _int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None
    if not value.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {text!r}")
    return int(value)


def _float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _bool(text: str, key: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


def _items(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _choice(table: dict, text: str, key: str) -> str:
    if text.strip() not in table:
        raise ConfigError(f"{key}: expected one of {', '.join(table)}, got {text!r}")
    return table[text.strip()]


def _positive(values, key):
    for v in values:
        if v < 1:
            raise ConfigError(f"{key}: {v} must be positive")
    return values


def _nu(text: str) -> float:
    value = _float(text, "nu")
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"nu: {text!r} must lie in [0, 1]")
    return value


# key -> converter from raw string to the Scenario field value
CONVERTERS = {
    "state": lambda t: t.strip(),
    "d": lambda t: _positive([_int(x, "d") for x in _items(t)], "d"),
    "theta": lambda t: [parse_theta(x) for x in _items(t)],
    "nc": lambda t: _positive([_int(x, "nc") for x in _items(t)], "nc"),
    "nu": lambda t: [_nu(x) for x in _items(t)],
    "protocols": _items,
    "seed": lambda t: _int(t, "seed"),
    "batches": lambda t: _positive([_int(t, "batches")], "batches")[0],
    "budget_mode": lambda t: _choice(BUDGET_MODES, t, "budget_mode"),
    "batch_mode": lambda t: _choice(BATCH_MODES, t, "batch_mode"),
    "out": lambda t: t.strip(),
    "exact": lambda t: _bool(t, "exact"),
    "workers": lambda t: _positive([_int(t, "workers")], "workers")[0],
}
KEY_ALIASES = {"n_c": "nc", "budget-mode": "budget_mode", "batch-mode": "batch_mode", "scenario": "scenario"}


def read_config(path: str) -> dict[str, str]:
    """Raw ``key -> value`` strings from a config file."""
    raw = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (p.strip() for p in line.split("=", 1))
            key = KEY_ALIASES.get(key.lower(), key.lower())
            if key != "scenario" and key not in CONVERTERS:
                raise ConfigError(f"{key}: unknown key ({path}:{lineno})")
            raw[key] = value
    return raw


def parse_config(name: str | None, config_path: str | None = None, overrides: dict | None = None) -> Scenario:
    """Resolve a Scenario: defaults for ``name``, then file values, then flag overrides.

    ``overrides`` maps keys to raw strings (as typed on the command line).
    """
    raw = read_config(config_path) if config_path else {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = KEY_ALIASES.get(key, key)
        if key not in CONVERTERS:
            raise ConfigError(f"{key}: unknown key")
        raw[key] = value
    name = name or raw.pop("scenario", None)
    raw.pop("scenario", None)
    if name is None:
        raise ConfigError("scenario: no scenario name given")
    scenario = default_scenario(name)
    values = {}
    for key, text in raw.items():
        values[key] = CONVERTERS[key](text) if isinstance(text, str) else text
    scenario = replace(scenario, **values)
    if "seed" not in values:
        scenario = replace(scenario, seed=DEFAULT_SEED)
    return validate(scenario)


def describe(s: Scenario) -> str:
    parts = []
    for f in fields(s):
        parts.append(f"{f.name}={getattr(s, f.name)!r}")
    return "resolved scenario: " + ", ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="redsm", description="Rebit-enhanced direct state measurement benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a benchmark scenario and write a CSV")
    run.add_argument("scenario", nargs="?", choices=SCENARIO_NAMES, help="scenario name (or 'scenario' in --config)")
    run.add_argument("--config", help="key = value config file")
    run.add_argument("--state", help="state ensemble: pure, pure_haar, mixed, nearly_pure, reference")
    run.add_argument("--d", help="dimension list, e.g. 2,3,5")
    run.add_argument("--theta", help="coupling list in radians or with a pi suffix, e.g. 0.5pi")
    run.add_argument("--nc", help="copy budget list, e.g. 1e4,1e5")
    run.add_argument("--nu", help="depolarising weights for nearly-pure states")
    run.add_argument("--protocols", help="comma list of protocols")
    run.add_argument("--seed", help=f"master seed (default {DEFAULT_SEED})")
    run.add_argument("--batches", help="number of batches M")
    run.add_argument("--budget-mode", dest="budget_mode", choices=sorted(BUDGET_MODES))
    run.add_argument("--batch-mode", dest="batch_mode", choices=sorted(BATCH_MODES))
    run.add_argument("--out", help="output CSV path (default <scenario>.csv)")
    run.add_argument("--exact", action="store_const", const="true", help="infinite-statistics mode")
    run.add_argument("--workers", help="worker processes (default 1)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in CONVERTERS if getattr(args, k, None) is not None}
    try:
        scenario = parse_config(args.scenario, args.config, overrides)
        print(describe(scenario))
        path, report = run_scenario(scenario)
    except (ReDSMError, OSError) as exc:
        print(f"redsm: error: {exc}", file=sys.stderr)
        return 2
    print(report)
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
