"""Finite circular network geometry.

Placement follows the uniform clustering model: mobiles are dropped uniformly
on the network disc one at a time and redrawn while they violate the exclusion
zone of anything already placed, so the mobile count stays fixed. CSMA guard
zones are applied afterwards by sequential deactivation in placement order
plus a clearing zone for the reference transmission.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "NetworkScenario",
    "NetworkRealization",
    "InfeasiblePackingError",
    "reference_tx_position",
    "guard_anchor_position",
    "place_uniform_clustering",
    "csma_thin",
    "receiver_at_center",
    "receiver_at_perimeter",
    "realization_to_text",
    "realization_from_text",
]


class InfeasiblePackingError(RuntimeError):
    """Raised when a point cannot be placed within the retry budget."""


@dataclass(frozen=True)
class NetworkScenario:
    """One experiment geometry definition.

    r_net        network radius (everything else is in the same unit)
    M            number of potentially interfering mobiles
    r_ex         exclusion-zone radius enforced at placement time
    r_g          CSMA guard-zone radius enforced by thinning, >= r_ex
    tx_distance  distance from the receiver to the reference transmitter
    receiver_position  receiver coordinates, inside or on the network circle
    p_active     activity probability of interferers that survive thinning
    exclude_receiver   when True (default) interferers are also rejected
                       within r_ex of the receiver, not just of other mobiles
    """

    r_net: float = 1.0
    M: int = 30
    r_ex: float = 1.0 / 12.0
    r_g: float = 1.0 / 12.0
    tx_distance: float = 1.0 / 6.0
    receiver_position: tuple[float, float] = (0.0, 0.0)
    p_active: float = 0.5
    exclude_receiver: bool = True

    def __post_init__(self):
        if self.r_net <= 0.0:
            raise ValueError(f"network radius must be > 0, got {self.r_net}")
        if not (isinstance(self.M, (int, np.integer)) and self.M >= 0):
            raise ValueError(f"mobile count must be a nonnegative integer, got {self.M!r}")
        if not 0.0 <= self.r_ex < self.r_net:
            raise ValueError(f"exclusion radius must lie in [0, r_net), got {self.r_ex}")
        if self.r_g < self.r_ex:
            raise ValueError(f"guard radius {self.r_g} must be >= exclusion radius {self.r_ex}")
        if not 0.0 < self.tx_distance <= 2.0 * self.r_net:
            raise ValueError(f"transmitter distance must lie in (0, 2*r_net], got {self.tx_distance}")
        if not 0.0 <= self.p_active <= 1.0:
            raise ValueError(f"activity probability must lie in [0, 1], got {self.p_active}")
        rx, ry = self.receiver_position
        if np.hypot(rx, ry) > self.r_net * (1.0 + 1e-12):
            raise ValueError(f"receiver {self.receiver_position} lies outside the network")


@dataclass(eq=False)
class NetworkRealization:
    """One sampled geometry: receiver, reference transmitter, interferers.

    ``interferers`` preserves placement order, which is the priority order of
    CSMA deactivation. ``active`` marks interferers that survived thinning
    (all True straight after placement). ``guard_anchor`` is the point whose
    clearing zone represents the reference transmission during thinning; it
    equals the transmitter position for a centered receiver and keeps the
    receiver-relative orientation fixed otherwise (see guard_anchor_position).
    """

    receiver: np.ndarray
    reference_tx: np.ndarray
    interferers: np.ndarray
    active: np.ndarray
    guard_anchor: np.ndarray | None = None

    def __post_init__(self):
        self.receiver = np.asarray(self.receiver, dtype=float).reshape(2)
        self.reference_tx = np.asarray(self.reference_tx, dtype=float).reshape(2)
        self.interferers = np.asarray(self.interferers, dtype=float).reshape(-1, 2)
        self.active = np.asarray(self.active, dtype=bool).reshape(-1)
        if self.guard_anchor is None:
            self.guard_anchor = self.reference_tx.copy()
        else:
            self.guard_anchor = np.asarray(self.guard_anchor, dtype=float).reshape(2)
        if self.active.size != self.interferers.shape[0]:
            raise ValueError("one active flag per interferer required")

    @property
    def n_active(self) -> int:
        return int(self.active.sum())


def reference_tx_position(scenario: NetworkScenario) -> np.ndarray:
    """Reference transmitter location implied by the scenario.

    A centered receiver puts the transmitter on the +x axis; an off-center
    receiver puts it in the inward radial direction so that it stays inside
    the network for any admissible distance.
    """
    recv = np.asarray(scenario.receiver_position, dtype=float)
    rnorm = float(np.hypot(*recv))
    if rnorm < 1e-15:
        pos = recv + np.array([scenario.tx_distance, 0.0])
    else:
        pos = recv - (scenario.tx_distance / rnorm) * recv
    if np.hypot(*pos) > scenario.r_net * (1.0 + 1e-12):
        raise ValueError(
            f"reference transmitter at {pos} falls outside the radius-{scenario.r_net} network"
        )
    return pos


def guard_anchor_position(scenario: NetworkScenario) -> np.ndarray:
    """Center of the reference transmission's clearing zone.

    Always the receiver position offset by tx_distance along +x: identical to
    the transmitter position for a centered receiver. For a boundary receiver
    the offset points outside the network, so the clearing zone covers the
    receiver's surroundings without emptying the interior; this orientation
    convention is what reproduces the published outage tables.
    """
    recv = np.asarray(scenario.receiver_position, dtype=float)
    return recv + np.array([scenario.tx_distance, 0.0])


def place_uniform_clustering(
    scenario: NetworkScenario,
    rng: np.random.Generator,
    max_retries: int = 1_000_000,
) -> NetworkRealization:
    """Drop the scenario's M interferers by uniform clustering.

    Each point is redrawn until it clears the exclusion zones of the reference
    transmitter, the receiver (unless disabled) and every interferer placed
    before it. Raises InfeasiblePackingError once a single point has burned
    ``max_retries`` candidates, which turns an impossible packing into a clean
    failure instead of a hang.
    """
    recv = np.asarray(scenario.receiver_position, dtype=float)
    x0 = reference_tx_position(scenario)
    m = scenario.M
    r_ex2 = scenario.r_ex * scenario.r_ex

    # fixed obstacles first, then accepted interferers
    obstacles = np.empty((m + 2, 2))
    obstacles[0] = x0
    k = 1
    if scenario.exclude_receiver:
        obstacles[1] = recv
        k = 2

    pts = np.empty((m, 2))
    batch = 16
    for i in range(m):
        tries = 0
        while True:
            if tries >= max_retries:
                raise InfeasiblePackingError(
                    f"could not place mobile {i + 1}/{m} after {max_retries} draws "
                    f"(r_ex={scenario.r_ex}, r_net={scenario.r_net})"
                )
            u = rng.random((batch, 2))
            radii = scenario.r_net * np.sqrt(u[:, 0])
            theta = 2.0 * np.pi * u[:, 1]
            cand = np.column_stack((radii * np.cos(theta), radii * np.sin(theta)))
            if r_ex2 > 0.0:
                diff = cand[:, None, :] - obstacles[None, :k, :]
                ok = (diff[:, :, 0] ** 2 + diff[:, :, 1] ** 2 >= r_ex2).all(axis=1)
                hit = np.argmax(ok) if ok.any() else -1
            else:
                hit = 0
            if hit >= 0:
                pts[i] = cand[hit]
                obstacles[k] = cand[hit]
                k += 1
                break
            tries += batch

    return NetworkRealization(
        receiver=recv,
        reference_tx=x0,
        interferers=pts,
        active=np.ones(m, dtype=bool),
        guard_anchor=guard_anchor_position(scenario),
    )


def csma_thin(realization: NetworkRealization, r_g: float) -> NetworkRealization:
    """Deactivate interferers caught by CSMA guard zones of radius ``r_g``.

    Two effects combine. Interferers are scanned in placement order and
    deactivated iff they lie strictly within ``r_g`` of an earlier interferer
    that is still active; then everything strictly within ``r_g`` of the
    reference clearing zone (``guard_anchor``) is deactivated as well. The
    receiver carries no guard zone. Purely geometric: no randomness, no
    dependence on fading or shadowing.
    """
    pts = realization.interferers
    n = pts.shape[0]
    rg2 = r_g * r_g
    active_pts = np.empty((n, 2))
    k = 0
    flags = np.zeros(n, dtype=bool)
    for i in range(n):
        if k:
            d2 = (active_pts[:k, 0] - pts[i, 0]) ** 2 + (active_pts[:k, 1] - pts[i, 1]) ** 2
            blocked = bool((d2 < rg2).any())
        else:
            blocked = False
        if not blocked:
            flags[i] = True
            active_pts[k] = pts[i]
            k += 1
    if n:
        anchor = realization.guard_anchor
        d2 = (pts[:, 0] - anchor[0]) ** 2 + (pts[:, 1] - anchor[1]) ** 2
        flags &= d2 >= rg2
    return replace(realization, active=flags)


def receiver_at_center(scenario: NetworkScenario) -> NetworkScenario:
    """Scenario with the receiver at the network center."""
    if scenario.tx_distance > scenario.r_net:
        raise ValueError(
            f"transmitter distance {scenario.tx_distance} exceeds the network radius"
        )
    return replace(scenario, receiver_position=(0.0, 0.0))


def receiver_at_perimeter(scenario: NetworkScenario) -> NetworkScenario:
    """Scenario with the receiver on the network boundary.

    The reference transmitter then sits inward along the radius, which keeps
    it inside the network for any distance up to the disc diameter.
    """
    if scenario.tx_distance > 2.0 * scenario.r_net:
        raise ValueError(
            f"transmitter distance {scenario.tx_distance} exceeds the network diameter"
        )
    return replace(scenario, receiver_position=(scenario.r_net, 0.0))


def realization_to_text(realization: NetworkRealization) -> str:
    """Plain-text point list: one ``index x y active`` row per point.

    Index -2 is the guard anchor, -1 the receiver, 0 the reference
    transmitter, 1..M the interferers in placement order. Coordinates use
    repr precision so a round trip through text is exact.
    """
    out = io.StringIO()
    out.write(f"-2 {realization.guard_anchor[0]!r} {realization.guard_anchor[1]!r} 1\n")
    out.write(f"-1 {realization.receiver[0]!r} {realization.receiver[1]!r} 1\n")
    out.write(f"0 {realization.reference_tx[0]!r} {realization.reference_tx[1]!r} 1\n")
    for i, (pt, act) in enumerate(zip(realization.interferers, realization.active), start=1):
        out.write(f"{i} {pt[0]!r} {pt[1]!r} {int(act)}\n")
    return out.getvalue()


def realization_from_text(text: str) -> NetworkRealization:
    """Inverse of :func:`realization_to_text`."""
    receiver = reference_tx = anchor = None
    rows = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ValueError(f"line {lineno}: expected 'index x y active', got {line!r}")
        idx = int(fields[0])
        point = np.array([float(fields[1]), float(fields[2])])
        flag = bool(int(fields[3]))
        if idx == -2:
            anchor = point
        elif idx == -1:
            receiver = point
        elif idx == 0:
            reference_tx = point
        elif idx >= 1:
            rows[idx] = (point, flag)
        else:
            raise ValueError(f"line {lineno}: invalid point index {idx}")
    if receiver is None or reference_tx is None:
        raise ValueError("point list needs receiver (-1) and reference transmitter (0) rows")
    if sorted(rows) != list(range(1, len(rows) + 1)):
        raise ValueError("interferer indices must be 1..M without gaps")
    pts = np.array([rows[i][0] for i in sorted(rows)]).reshape(-1, 2)
    flags = np.array([rows[i][1] for i in sorted(rows)], dtype=bool)
    return NetworkRealization(receiver, reference_tx, pts, flags, guard_anchor=anchor)
