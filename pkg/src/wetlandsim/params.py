"""Model parameters, validation, and the coexistence/positivity conditions.

The model is governed by nine positive scalars:

    d1, d2  diffusion coefficients of fish and boyciana
    c       capturing rate of the boyciana
    alpha   ratio-dependence shape parameter
    m       conversion rate
    d       boyciana death rate
    h1, h2  human interference coefficients on fish and boyciana
    r       human logistic growth rate

h1 and h2 may be exactly zero, which encodes the human-free case; all
other parameters must be strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from pathlib import Path

from .errors import InvalidParams, MalformedData

__all__ = [
    "ModelParams",
    "PARAM_NAMES",
    "check_e1_condition",
    "check_e2_condition",
    "check_persistence_condition",
    "load_params",
    "parse_params",
]

PARAM_NAMES = ("d1", "d2", "c", "alpha", "m", "d", "h1", "h2", "r")


@dataclass(frozen=True)
class ModelParams:
    d1: float
    d2: float
    c: float
    alpha: float
    m: float
    d: float
    h1: float
    h2: float
    r: float

    def __post_init__(self):
        for name in PARAM_NAMES:
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("d1", "d2", "c", "alpha", "m", "d", "r"):
            v = getattr(self, name)
            if not (v > 0.0):
                raise InvalidParams(f"parameter {name} must be > 0, got {v}")
        for name in ("h1", "h2"):
            v = getattr(self, name)
            if not (v >= 0.0):
                raise InvalidParams(f"parameter {name} must be >= 0, got {v}")

    def replace(self, **kw) -> "ModelParams":
        d = asdict(self)
        d.update(kw)
        return ModelParams(**d)

    def as_dict(self) -> dict:
        return asdict(self)


def check_e1_condition(p: ModelParams) -> bool:
    """Existence condition for the human-free coexistence equilibrium.

    True iff 1 - alpha/c < d/m < 1, both inequalities strict.
    """
    return 1.0 - p.alpha / p.c < p.d / p.m < 1.0


def check_e2_condition(p: ModelParams) -> bool:
    """Existence condition for the coexistence equilibrium under uniform
    human density one.

    True iff 1 - (alpha/c)(1 - h1) < (d + h2)/m < 1.  Reduces exactly to
    ``check_e1_condition`` when h1 = h2 = 0.
    """
    return 1.0 - (p.alpha / p.c) * (1.0 - p.h1) < (p.d + p.h2) / p.m < 1.0


def check_persistence_condition(p: ModelParams) -> bool:
    """Necessary condition for a positive lower absorbing bound.

    True iff h1 < 1 - c/alpha and h2 < m - d, both strict.
    """
    return p.h1 < 1.0 - p.c / p.alpha and p.h2 < p.m - p.d


def parse_params(text: str, source: str = "<string>") -> ModelParams:
    """Parse the ``name = value`` configuration format.

    One assignment per line; ``#`` starts a comment; blank lines are
    ignored.  Exactly the nine model parameter keys are accepted and all
    must be present.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedData(f"{source}:{lineno}: expected 'name = value', got {raw!r}")
        name, _, val = line.partition("=")
        name = name.strip()
        if name not in PARAM_NAMES:
            raise MalformedData(f"{source}:{lineno}: unknown parameter {name!r}")
        if name in values:
            raise MalformedData(f"{source}:{lineno}: duplicate parameter {name!r}")
        try:
            values[name] = float(val.strip())
        except ValueError:
            raise MalformedData(f"{source}:{lineno}: cannot parse value {val.strip()!r}") from None
    missing = [n for n in PARAM_NAMES if n not in values]
    if missing:
        raise MalformedData(f"{source}: missing parameters: {', '.join(missing)}")
    try:
        return ModelParams(**values)
    except InvalidParams as exc:
        raise MalformedData(f"{source}: {exc}") from exc


def load_params(path) -> ModelParams:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MalformedData(f"cannot read parameter file {path}: {exc}") from exc
    return parse_params(text, source=str(path))


def format_params(p: ModelParams) -> str:
    """Render parameters back into the configuration format."""
    return "".join(f"{name} = {getattr(p, name)!r}\n" for name in PARAM_NAMES)
