"""Scenario geometry: fixed node positions, altitudes, map size, and the two
user placement patterns (uniform disc / two clusters).

Layouts can be generated from a seeded stream or loaded from / saved to a
plain-text INI file so a given geometry is reproducible byte for byte.
"""

import configparser
from dataclasses import dataclass, field

import numpy as np

from .channel import horizontal_distance

__all__ = ["ScenarioLayout", "make_layout", "load_layout", "save_layout"]

UNIFORM_DISC = "uniform_disc"
TWO_CLUSTER = "two_cluster"
LAYOUT_KINDS = (UNIFORM_DISC, TWO_CLUSTER)

# Two-cluster geometry, relative to the legitimate UAV. The large cluster
# holds 70% of the users; both discs stay inside the coverage radius.
_CLUSTER_BIG = ((-25.0, -10.0), 15.0)
_CLUSTER_SMALL = ((25.0, 15.0), 10.0)
_BIG_FRACTION = 0.7


@dataclass
class ScenarioLayout:
    """Static geometry of one scenario.

    legit/eve/helper_init are horizontal (x, y) in meters; ues is a (U, 2)
    array. h is the shared helper/legitimate altitude, h_e the (higher)
    eavesdropper altitude, l_max the side of the square map centered at the
    origin, d_max the coverage radius of the legitimate and helper UAVs.
    """

    legit: np.ndarray
    eve: np.ndarray
    ues: np.ndarray
    helper_init: np.ndarray
    h: float = 80.0
    h_e: float = 120.0
    l_max: float = 200.0
    d_max: float = 45.0
    kind: str = UNIFORM_DISC
    seed_note: str = field(default="", compare=False)

    def __post_init__(self):
        self.legit = np.asarray(self.legit, dtype=float).reshape(2)
        self.eve = np.asarray(self.eve, dtype=float).reshape(2)
        self.helper_init = np.asarray(self.helper_init, dtype=float).reshape(2)
        self.ues = np.asarray(self.ues, dtype=float).reshape(-1, 2)
        if self.ues.shape[0] < 1:
            raise ValueError("need at least one user")
        if self.h <= 0:
            raise ValueError("altitude h must be positive")
        if self.h_e <= self.h:
            raise ValueError("eavesdropper altitude h_e must exceed h")
        if self.l_max <= 0 or self.d_max <= 0:
            raise ValueError("l_max and d_max must be positive")
        half = self.l_max / 2.0
        for name, p in (("legit", self.legit), ("eve", self.eve), ("helper_init", self.helper_init)):
            if np.any(np.abs(p) > half):
                raise ValueError(f"{name} position {tuple(p)} lies outside the map square")
        if np.any(np.abs(self.ues) > half):
            raise ValueError("a user position lies outside the map square")

    @property
    def n_ues(self):
        return self.ues.shape[0]

    def ue_legit_distances(self):
        return horizontal_distance(self.ues, self.legit[None, :])


def _uniform_disc(center, radius, n, rng):
    draws = rng.uniform(size=(n, 2))
    r = radius * np.sqrt(draws[:, 0])
    theta = 2.0 * np.pi * draws[:, 1]
    return center + np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)


def make_layout(kind, n_ues, rng, *, legit=(0.0, 0.0), eve=(80.0, 80.0),
                helper_init=(-90.0, -90.0), h=80.0, h_e=120.0,
                l_max=200.0, d_max=45.0):
    """Generate a scenario layout of the given kind with seeded user draws.

    uniform_disc scatters all users uniformly in the coverage disc around
    the legitimate UAV; two_cluster splits them 70/30 between a large and a
    small disc on opposite sides of it.
    """
    legit = np.asarray(legit, dtype=float)
    if kind == UNIFORM_DISC:
        ues = _uniform_disc(legit, d_max, n_ues, rng)
    elif kind == TWO_CLUSTER:
        n_big = int(round(_BIG_FRACTION * n_ues))
        n_big = min(max(n_big, 1), n_ues - 1) if n_ues > 1 else n_ues
        big_c, big_r = _CLUSTER_BIG
        small_c, small_r = _CLUSTER_SMALL
        ues = np.concatenate([
            _uniform_disc(legit + np.asarray(big_c), big_r, n_big, rng),
            _uniform_disc(legit + np.asarray(small_c), small_r, n_ues - n_big, rng),
        ])
    else:
        raise ValueError(f"unknown layout kind {kind!r} (expected one of {LAYOUT_KINDS})")
    return ScenarioLayout(legit=legit, eve=eve, ues=ues, helper_init=helper_init,
                          h=h, h_e=h_e, l_max=l_max, d_max=d_max, kind=kind)


def _fmt_pair(p):
    return f"{float(p[0])!r}, {float(p[1])!r}"


def _parse_pair(raw, key):
    parts = [s.strip() for s in raw.split(",")]
    if len(parts) != 2:
        raise ValueError(f"layout key {key!r}: expected 'x, y', got {raw!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ValueError(f"layout key {key!r}: {exc}") from None


def save_layout(layout, path):
    """Write a layout to an INI file (sections [layout] and [ues])."""
    cp = configparser.ConfigParser()
    cp["layout"] = {
        "kind": layout.kind,
        "l_max": repr(float(layout.l_max)),
        "d_max": repr(float(layout.d_max)),
        "h": repr(float(layout.h)),
        "h_e": repr(float(layout.h_e)),
        "legit": _fmt_pair(layout.legit),
        "eve": _fmt_pair(layout.eve),
        "helper_init": _fmt_pair(layout.helper_init),
    }
    cp["ues"] = {f"ue{i}": _fmt_pair(layout.ues[i]) for i in range(layout.n_ues)}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        cp.write(fh)


def load_layout(path):
    """Read a layout from an INI file written by :func:`save_layout`."""
    cp = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        cp.read_file(fh, source=str(path))
    if not cp.has_section("layout") or not cp.has_section("ues"):
        raise ValueError(f"{path}: layout file needs [layout] and [ues] sections")
    sec = cp["layout"]
    ue_keys = sorted(cp["ues"], key=lambda k: int(k.removeprefix("ue")))
    ues = np.array([_parse_pair(cp["ues"][k], k) for k in ue_keys])
    return ScenarioLayout(
        legit=_parse_pair(sec["legit"], "legit"),
        eve=_parse_pair(sec["eve"], "eve"),
        ues=ues,
        helper_init=_parse_pair(sec["helper_init"], "helper_init"),
        h=float(sec["h"]),
        h_e=float(sec["h_e"]),
        l_max=float(sec["l_max"]),
        d_max=float(sec["d_max"]),
        kind=sec.get("kind", UNIFORM_DISC),
    )
