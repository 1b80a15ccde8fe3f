"""Global caps and tunables.

All limits live in one mutable Settings object so the CLI can load a flat
key=value config file and tests can tighten/loosen caps locally.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, fields


@dataclass
class Settings:
    # largest root-of-unity order the cyclotomic layer will accept
    modulus_cap: int = 10**6
    # refinement rounds for interval sign certification before giving up
    sign_refine_rounds: int = 12
    # largest group fully enumerated (elements or dual)
    enumeration_cap: int = 10**6
    # subgroups materialize their elements below this size
    subgroup_materialize_cap: int = 10**5
    # sparse convolution refuses to build results with more entries
    convolution_result_cap: int = 10**7
    # largest group the pd-tiling LP will be posed on
    lp_group_cap: int = 10**3
    # denominator bound when rationalizing float LP solutions
    lp_denominator_cap: int = 10**6
    # node budgets for the backtracking searches
    tile_search_budget: int = 10**6
    spectrum_search_budget: int = 10**6
    hadamard_search_budget: int = 10**6
    # instances with |A| above this stay structural (never materialized)
    instance_materialize_cap: int = 10**6
    # RNG seed used by every Sampled-mode sweep
    seed: int = 0
    # worker-count knob consumed by partitionable sweeps (1 = serial)
    workers: int = 1

    def digest(self) -> str:
        items = sorted((f.name, getattr(self, f.name)) for f in fields(self))
        blob = ";".join(f"{k}={v}" for k, v in items).encode()
        return hashlib.sha256(blob).hexdigest()


SETTINGS = Settings()


def load_config_file(path: str, settings: Settings | None = None) -> Settings:
    """Read a flat key=value file into a Settings object.

    Unknown keys are rejected so typos fail loudly. Blank lines and
    '#'-comments are allowed.
    """
    s = settings if settings is not None else SETTINGS
    known = {f.name: f.type for f in fields(s)}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
            setattr(s, key, int(value))
    return s


def effective_workers(settings: Settings | None = None) -> int:
    """Worker count, with the WEAKTILE_WORKERS env var taking precedence."""
    env = os.environ.get("WEAKTILE_WORKERS")
    if env:
        return max(1, int(env))
    s = settings if settings is not None else SETTINGS
    return max(1, s.workers)
