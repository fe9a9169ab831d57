"""Exact-rational recursion for higher-order derivative-test exponents.

An order-r derivative test bounds an exponential sum over an interval of
length M, with phase derivatives of size T*M^(-j) for j = r-2, r-1, r, by

    M^a * T^b  +  M^xi * T^eta  +  M^alpha  +  M^gamma * T^(-delta).

The seven exponents are exact rationals.  The order-4 base values are fixed
input data; each higher order is obtained from the previous one by a fixed
algebraic step that divides through by 2(b+1).  The "+epsilon" carried by b
and eta at order 4 survives the step onto b and eta of every later order,
so it is tracked as a pair of boolean flags rather than symbolically.

All arithmetic uses fractions.Fraction: no rounding happens anywhere in
this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]

#: Hard cap on the recursion order; denominators grow geometrically and a
#: runaway input would allocate huge integers for no analytic gain.
MAX_ORDER = 10_000

#: Order-4 base exponents (fixed input data, not derived here).
BASE_ORDER = 4
_BASE = {
    "a": Fraction(1, 2),
    "b": Fraction(13, 84),
    "xi": Fraction(0),
    "eta": Fraction(31, 84),
    "alpha": Fraction(334, 411),
    "gamma": Fraction(1),
    "delta": Fraction(1, 2),
}


@dataclass(frozen=True)
class ExponentTuple:
    """The seven exponents of an order-r derivative-test bound.

    eps_on names the entries that carry a "+epsilon"; only "b" and "eta"
    ever do.  Instances are immutable and safe to share across threads.
    """

    order: int
    a: Fraction
    b: Fraction
    xi: Fraction
    eta: Fraction
    alpha: Fraction
    gamma: Fraction
    delta: Fraction
    eps_on: frozenset = field(default_factory=lambda: frozenset({"b", "eta"}))

    def __post_init__(self):
        if self.order < BASE_ORDER:
            raise ValueError(f"order must be >= {BASE_ORDER}, got {self.order}")
        if not self.eps_on <= {"b", "eta"}:
            raise ValueError(f"eps flags limited to b/eta, got {set(self.eps_on)}")

    def as_dict(self) -> dict:
        """JSON-friendly layout: exact fraction strings plus the eps flag list."""
        d = {"order": self.order}
        for name in ("a", "b", "xi", "eta", "alpha", "gamma", "delta"):
            d[name] = str(getattr(self, name))
        d["eps_on"] = sorted(self.eps_on)
        return d

    def __str__(self) -> str:
        parts = []
        for name in ("a", "b", "xi", "eta", "alpha", "gamma", "delta"):
            v = str(getattr(self, name))
            if name in self.eps_on:
                v += "+eps"
            parts.append(f"{name}={v}")
        return f"ExponentTuple(order={self.order}, " + ", ".join(parts) + ")"


def base_tuple() -> ExponentTuple:
    """The order-4 tuple (1/2, 13/84+eps, 0, 31/84+eps, 334/411, 1, 1/2)."""
    return ExponentTuple(order=BASE_ORDER, **_BASE)


def step(t: ExponentTuple) -> ExponentTuple:
    """One recursion step: the order-(j) tuple from the order-(j-1) tuple.

    The common denominator of the step is 2(b+1); the identities
    2(b+1)*b' = b (and likewise for eta, delta) therefore hold exactly.
    """
    d = 2 * (t.b + 1)
    return ExponentTuple(
        order=t.order + 1,
        a=(t.a + t.b + 1) / d,
        b=t.b / d,
        xi=((t.xi + 1) * (t.b + 1) - t.a * t.eta) / d,
        eta=t.eta / d,
        alpha=(t.alpha + 1) / 2,
        gamma=(t.a * t.delta + (t.b + 1) * (t.gamma + 1)) / d,
        delta=t.delta / d,
        eps_on=frozenset(t.eps_on & {"b", "eta"}),
    )


def derive_tuple(r: int) -> ExponentTuple:
    """The order-r tuple: the base with (r-4) recursion steps applied.

    Raises ValueError for r < 4 and for r above MAX_ORDER.
    """
    if r < BASE_ORDER:
        raise ValueError(f"order must be >= {BASE_ORDER}, got {r}")
    if r > MAX_ORDER:
        raise ValueError(f"order {r} exceeds cap {MAX_ORDER}")
    t = base_tuple()
    for _ in range(r - BASE_ORDER):
        t = step(t)
    return t


def bound_eval(t: ExponentTuple, M: float, T: float, eps: float = 0.0) -> float:
    """Numeric value of the four-term bound at (M, T).

    eps is substituted into the flagged exponents (b and/or eta).  Used by
    the empirical lab for constant fitting; constants are not modeled here.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if T <= 0:
        raise ValueError(f"T must be > 0, got {T}")
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    b = float(t.b) + (eps if "b" in t.eps_on else 0.0)
    eta = float(t.eta) + (eps if "eta" in t.eps_on else 0.0)
    return (
        M ** float(t.a) * T ** b
        + M ** float(t.xi) * T ** eta
        + M ** float(t.alpha)
        + M ** float(t.gamma) * T ** (-float(t.delta))
    )


def alpha_closed_form(r: int) -> Fraction:
    """Closed form of the alpha recursion: 1 - (1 - alpha_4)/2^(r-4)."""
    if r < BASE_ORDER:
        raise ValueError(f"order must be >= {BASE_ORDER}, got {r}")
    return 1 - (1 - _BASE["alpha"]) / 2 ** (r - BASE_ORDER)


def as_fraction(v: RationalLike) -> Fraction:
    """Exact conversion accepting Fraction, int, or strings like '139/194'
    and '0.4923' (decimal strings parse exactly)."""
    if isinstance(v, Fraction):
        return v
    return Fraction(str(v)) if not isinstance(v, int) else Fraction(v)
