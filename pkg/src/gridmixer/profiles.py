"""Three-piece-linear concentration profiles and their update operations.

A profile describes reactant concentration across a channel's width along an
axis directed counter-clockwise to the flow.  It is flat at ``value_left`` on
``[0, flat_left]``, flat at ``value_right`` on ``[w - flat_right, w]``, and
ramps linearly in between.  The ramp's width equals twice the diffusion
length, which grows with residence time as ``2 * sqrt(D * t)``.

Because the axis convention is tied to the flow direction, profiles never
need re-orientation at bends; joins and splits see their channels in
left-to-right order as provided by the flow module.

All operations preserve reactant mass exactly: straight advances keep the
area under the profile, joins and splits keep the velocity-weighted area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

# flat segments thinner than this fraction of the width count as empty
ZERO_WIDTH_FRACTION = 1e-12
# breakpoint value agreement required to accept a combined profile as-is
EXACT_FORM_TOLERANCE = 1e-12


@dataclass(frozen=True, slots=True)
class SPProfile:
    value_left: float
    value_right: float
    flat_left: float
    flat_right: float
    width: float

    def __post_init__(self):
        w = self.width
        if w <= 0:
            raise ValueError(f"profile width must be positive, got {w}")
        vl, vr = self.value_left, self.value_right
        if vr > vl + 1e-9 * max(1.0, vl):
            raise ValueError(f"profile must be non-increasing: left {vl} < right {vr}")
        fl, fr = self.flat_left, self.flat_right
        if fl < -1e-9 * w or fr < -1e-9 * w or fl + fr > w * (1 + 1e-9):
            raise ValueError(f"flat segments ({fl}, {fr}) do not fit width {w}")
        zero = ZERO_WIDTH_FRACTION * w
        if vr > vl:
            vr = vl  # rounding-level inversion snapped flat
        if vl == vr:
            fl = fr = 0.5 * w  # canonical uniform form
        else:
            fl = min(max(fl, 0.0), w)
            fr = min(max(fr, 0.0), w)
            if fl < zero:
                fl = 0.0
            if fr < zero:
                fr = 0.0
            if fl + fr > w:
                excess = fl + fr - w
                fl -= 0.5 * excess
                fr -= 0.5 * excess
        object.__setattr__(self, "value_left", vl)
        object.__setattr__(self, "value_right", vr)
        object.__setattr__(self, "flat_left", fl)
        object.__setattr__(self, "flat_right", fr)

    @classmethod
    def uniform(cls, concentration: float, width: float) -> "SPProfile":
        return cls(concentration, concentration, 0.5 * width, 0.5 * width, width)

    @property
    def is_uniform(self) -> bool:
        return self.value_left == self.value_right

    @property
    def ramp_width(self) -> float:
        """Width of the partially mixed middle region (twice the diffusion length)."""
        return self.width - self.flat_left - self.flat_right

    def value_at(self, s: float) -> float:
        if s <= self.flat_left:
            return self.value_left
        if s >= self.width - self.flat_right:
            return self.value_right
        mid = self.width - self.flat_left - self.flat_right
        frac = (s - self.flat_left) / mid
        return self.value_left + (self.value_right - self.value_left) * frac

    def area(self) -> float:
        """Area under the profile; reactant volume per unit flow."""
        mid = self.width - self.flat_left - self.flat_right
        return (
            self.value_left * self.flat_left
            + self.value_right * self.flat_right
            + 0.5 * (self.value_left + self.value_right) * mid
        )

    def mean(self) -> float:
        return self.area() / self.width

    def breakpoints(self) -> list[tuple[float, float]]:
        """Corner points of the piecewise-linear profile, left to right."""
        w, fl, fr = self.width, self.flat_left, self.flat_right
        pts = [(0.0, self.value_left)]
        if fl > 0:
            pts.append((fl, self.value_left))
        if w - fr > fl:
            pts.append((w - fr, self.value_right))
        pts.append((w, self.value_right))
        return pts

    def mirrored(self, full_scale: float = 1.0) -> "SPProfile":
        """Reflection s -> w - s with concentrations mapped c -> full_scale - c."""
        return SPProfile(
            full_scale - self.value_right,
            full_scale - self.value_left,
            self.flat_right,
            self.flat_left,
            self.width,
        )

    def as_dict(self) -> dict:
        return {
            "valueLeft": self.value_left,
            "valueRight": self.value_right,
            "flatLeft": self.flat_left,
            "flatRight": self.flat_right,
            "width": self.width,
        }


# ----------------------------------------------------------------------------
# Straight channels
# ----------------------------------------------------------------------------


def diffuse(profile: SPProfile, duration: float, diffusivity: float) -> SPProfile:
    """Evolve a profile by pure transverse diffusion for ``duration`` seconds.

    The evolution is split into phases, each holding the profile's form
    (which flat segments are non-empty) fixed:

    * both flats non-empty: the profile is read as the result of mixing for an
      implied time ``t = L^2 / 4D`` with ``L`` the half-width of the ramp;
      after ``dt`` the ramp half-width becomes ``sqrt(L^2 + 4 D dt)`` and both
      flats shrink by the growth, wall values unchanged;
    * one flat empty: the surviving flat keeps shrinking with the ramp now
      spanning the remaining width ``L = w - flat``; the far wall value closes
      the gap by the factor ``L / L'`` so that area is preserved;
    * both flats empty: the ramp spans the whole width; reading it as the
      middle of a virtual wider channel with implied time ``t = w^2 / 16D``,
      the wall offset from the mean decays as ``sqrt(t / t')``.

    A phase ends when a flat empties or the time budget runs out; at most
    three phases occur.  Area is preserved exactly in every phase.
    """
    if duration <= 0 or profile.is_uniform:
        return profile
    w = profile.width
    d4 = 4.0 * diffusivity
    vl, vr = profile.value_left, profile.value_right
    fl, fr = profile.flat_left, profile.flat_right
    zero = ZERO_WIDTH_FRACTION * w
    remaining = duration

    for _ in range(8):  # phases: at most both-flats -> one-flat -> no-flats
        if remaining <= 0:
            break
        if fl > zero and fr > zero:
            half = 0.5 * (w - fl - fr)
            shrink = min(fl, fr)
            to_event = shrink * (2.0 * half + shrink) / d4
            step = min(remaining, to_event)
            grown = math.sqrt(half * half + d4 * step)
            growth = d4 * step / (grown + half)  # grown - half without cancellation
            fl -= growth
            fr -= growth
            remaining -= step
        elif fl > zero:
            fr = 0.0
            span = w - fl
            to_event = fl * (w + span) / d4
            step = min(remaining, to_event)
            grown = math.sqrt(span * span + d4 * step)
            vr = vl - span * (vl - vr) / grown
            fl -= d4 * step / (grown + span)
            remaining -= step
        elif fr > zero:
            fl = 0.0
            span = w - fr
            to_event = fr * (w + span) / d4
            step = min(remaining, to_event)
            grown = math.sqrt(span * span + d4 * step)
            vl = vr + span * (vl - vr) / grown
            fr -= d4 * step / (grown + span)
            remaining -= step
        else:
            fl = fr = 0.0
            implied = w * w / (4.0 * d4)  # ramp spans w: virtual channel time
            decay = math.sqrt(implied / (implied + remaining))
            offset = 0.5 * (vl - vr) * (1.0 - decay)
            vl -= offset
            vr += offset
            remaining = 0.0
        if fl < zero:
            fl = 0.0
        if fr < zero:
            fr = 0.0
    else:
        raise AssertionError("diffusion phase loop failed to terminate")
    return SPProfile(vl, vr, fl, fr, w)


def implied_mixing_time(profile: SPProfile, diffusivity: float) -> float:
    """Mixing age the profile's ramp implies under the diffusion-length law.

    Reads the ramp as the partially mixed middle region of a fresh-interface
    evolution: half-width L satisfies L = 2*sqrt(D*t), so t = L^2 / 4D.
    """
    half = 0.5 * profile.ramp_width
    return half * half / (4.0 * diffusivity)


def advance_straight(
    profile: SPProfile, length: float, velocity: float, diffusivity: float
) -> SPProfile:
    """Advance a profile down a straight channel of the given length.

    The residence time uses the effective length ``length + w/2`` to account
    for mixing inside the grid nodes; apply it once per straight run, not per
    lattice edge.
    """
    if length <= 0 or velocity <= 0:
        raise ValueError("channel length and velocity must be positive")
    effective = length + 0.5 * profile.width
    return diffuse(profile, effective / velocity, diffusivity)


# ----------------------------------------------------------------------------
# Joining
# ----------------------------------------------------------------------------


def _combined_breakpoints(
    inflows: Sequence[tuple[SPProfile, float]], width: float
) -> tuple[list[tuple[float, float]], float]:
    """Concatenate inflow profiles side by side, scaled to velocity shares.

    Returns the breakpoints of the combined piecewise-linear profile and the
    exact area beneath it.
    """
    total_v = sum(v for _, v in inflows)
    points: list[tuple[float, float]] = []
    area = 0.0
    offset = 0.0
    for prof, vel in inflows:
        scale = (vel / total_v) * (width / prof.width)
        for s, value in prof.breakpoints():
            x = offset + s * scale
            if points and abs(points[-1][0] - x) <= ZERO_WIDTH_FRACTION * width:
                if points[-1][1] == value:
                    continue
            points.append((x, value))
        area += prof.area() * scale
        offset += (vel / total_v) * width
    points[-1] = (width, points[-1][1])  # absorb rounding in the final cut
    return points, area


def _as_exact_form(
    points: list[tuple[float, float]], area: float, width: float
) -> SPProfile | None:
    """Return the combined profile unchanged if it already has the 3-piece form."""
    vl = points[0][1]
    vr = points[-1][1]
    tol = EXACT_FORM_TOLERANCE * max(1.0, abs(vl))
    fl = 0.0
    for x, value in points:
        if abs(value - vl) <= tol:
            fl = x
        else:
            break
    fr = 0.0
    for x, value in reversed(points):
        if abs(value - vr) <= tol:
            fr = width - x
        else:
            break
    if fl + fr > width:
        candidate = SPProfile.uniform(vl, width)
    else:
        candidate = SPProfile(vl, vr, fl, fr, width)
    tiny = ZERO_WIDTH_FRACTION * width
    step_at = candidate.width - candidate.flat_right
    for x, value in points:
        if abs(candidate.value_at(x) - value) <= tol:
            continue
        # at a vertical step both one-sided limits are admissible
        if abs(x - candidate.flat_left) <= tiny and abs(value - vl) <= tol:
            continue
        if abs(x - step_at) <= tiny and abs(value - vr) <= tol:
            continue
        return None
    if abs(candidate.area() - area) > EXACT_FORM_TOLERANCE * max(1.0, area):
        return None
    return candidate


def join_profiles(inflows: Sequence[tuple[SPProfile, float]], width: float) -> SPProfile:
    """Join 2 or 3 inflow profiles (ordered left to right) into one profile.

    The combined profile concatenates the inflows at widths proportional to
    their velocities.  If it already has the 3-piece form it is returned
    as-is.  Otherwise a tentative profile keeps the leftmost inflow's left
    segment and the rightmost's right segment, and is then adjusted on one
    side until the area under it matches the combined area exactly: shrink the
    flat toward zero first, then move the wall value.
    """
    if not 2 <= len(inflows) <= 3:
        raise ValueError(f"joins take 2 or 3 inflows, got {len(inflows)}")
    if any(v <= 0 for _, v in inflows):
        raise ValueError("inflow velocities must be positive")
    # neighboring inflows must not interleave in value (profile monotonicity)
    for (left, _), (right, _) in zip(inflows, inflows[1:]):
        if left.value_right < right.value_left - 1e-9:
            raise ValueError(
                "inflow profiles out of order: left profile min "
                f"{left.value_right} below right profile max {right.value_left}"
            )

    points, area = _combined_breakpoints(inflows, width)
    exact = _as_exact_form(points, area, width)
    if exact is not None:
        return exact

    total_v = sum(v for _, v in inflows)
    first_prof, first_v = inflows[0]
    last_prof, last_v = inflows[-1]
    vl = first_prof.value_left
    fl = first_prof.flat_left * (first_v / total_v) * (width / first_prof.width)
    vr = last_prof.value_right
    fr = last_prof.flat_right * (last_v / total_v) * (width / last_prof.width)

    if not (vr * width - 1e-9 <= area <= vl * width + 1e-9):
        raise AssertionError(
            f"combined area {area} outside attainable range [{vr * width}, {vl * width}]"
        )
    if vl - vr <= ZERO_WIDTH_FRACTION:
        return SPProfile.uniform(area / width, width)

    tentative_area = _area_of(vl, vr, fl, fr, width)
    if tentative_area < area:
        # keep the left segment; shrink the right flat, then raise the right value
        max_area = _area_of(vl, vr, fl, 0.0, width)
        if max_area >= area:
            fr = 2.0 * (max_area - area) / (vl - vr)
        else:
            fr = 0.0
            vr = 2.0 * (area - vl * fl) / (width - fl) - vl
            if vr > vl:
                return SPProfile.uniform(area / width, width)
    elif tentative_area > area:
        # keep the right segment; shrink the left flat, then lower the left value
        min_area = _area_of(vl, vr, 0.0, fr, width)
        if min_area <= area:
            fl = 2.0 * (area - min_area) / (vl - vr)
        else:
            fl = 0.0
            vl = 2.0 * (area - vr * fr) / (width - fr) - vr
            if vl < vr:
                return SPProfile.uniform(area / width, width)
    return SPProfile(vl, vr, fl, fr, width)


def _area_of(vl: float, vr: float, fl: float, fr: float, width: float) -> float:
    return vl * fl + vr * fr + 0.5 * (vl + vr) * (width - fl - fr)


# ----------------------------------------------------------------------------
# Splitting
# ----------------------------------------------------------------------------


def split_profile(profile: SPProfile, velocities: Sequence[float]) -> list[SPProfile]:
    """Split a profile at cumulative velocity fractions of the width.

    Each slice is rescaled horizontally back to the full width; slices of a
    3-piece profile are exactly 3-piece, so no simplification is involved.
    Velocity-weighted area is conserved exactly.
    """
    if not 2 <= len(velocities) <= 3:
        raise ValueError(f"splits produce 2 or 3 outflows, got {len(velocities)}")
    if any(v <= 0 for v in velocities):
        raise ValueError("outflow velocities must be positive")
    w = profile.width
    total = sum(velocities)
    pieces = []
    left_cut = 0.0
    acc = 0.0
    for i, v in enumerate(velocities):
        acc += v
        right_cut = w if i == len(velocities) - 1 else w * (acc / total)
        pieces.append(_slice_profile(profile, left_cut, right_cut))
        left_cut = right_cut
    return pieces


def _slice_profile(profile: SPProfile, left: float, right: float) -> SPProfile:
    w = profile.width
    span = right - left
    flat_l = max(0.0, min(right, profile.flat_left) - left)
    flat_r = max(0.0, right - max(left, w - profile.flat_right))
    # endpoint values take the limit from inside the slice, so a cut exactly on
    # a step boundary lands on the correct side
    if flat_l > 0.0:
        vl = profile.value_left
    elif left >= w - profile.flat_right:
        vl = profile.value_right
    else:
        vl = profile.value_at(left)
    if flat_r > 0.0:
        vr = profile.value_right
    elif right <= profile.flat_left:
        vr = profile.value_left
    else:
        vr = profile.value_at(right)
    scale = w / span
    return SPProfile(vl, vr, min(flat_l * scale, w), min(flat_r * scale, w), w)


def join_split(
    inflows: Sequence[tuple[SPProfile, float]], out_velocities: Sequence[float]
) -> list[SPProfile]:
    """Two adjacent inflows merge and immediately split into two outflows."""
    if len(inflows) != 2 or len(out_velocities) != 2:
        raise ValueError("join-split nodes have exactly 2 inflows and 2 outflows")
    width = inflows[0][0].width
    joined = join_profiles(inflows, width)
    return split_profile(joined, out_velocities)
