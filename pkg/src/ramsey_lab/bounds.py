"""Exact arithmetic for linear size-Ramsey upper bounds on cycle families.

Everything integer-valued is computed with Python ints, everything
rational-valued with ``fractions.Fraction``; only logarithm-based
coefficients fall back to binary64.  The central objects are

* a family of linear forms ``a*m1 + b*m2 + c`` produced by a quadratic
  coefficient recursion, bounding Ramsey numbers of cycle tuples against
  a complete bipartite graph,
* closed-form host sizes ``82 * 35**(2**t_odd - 2) * 81**t_even * m`` for
  multicolour cycle Ramsey numbers, and
* per-model size-Ramsey coefficient reports (binomial random host,
  random regular host, bipartite random host) built on the density
  thresholds from :mod:`ramsey_lab.threshold_solver`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import threshold_solver

Rational = Union[int, Fraction]

#: Hard ceiling on the recursion level; the coefficients grow doubly
#: exponentially (roughly 35**(2**t)), so anything beyond this is almost
#: certainly a caller bug.  Raise explicitly if you really want more.
DEFAULT_T_CAP = 8


# ── basic types ──────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CycleSpec:
    """An ordered tuple of target cycle lengths, each at least 3."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        if not self.lengths:
            raise ValueError("need at least one cycle length")
        for n in self.lengths:
            if not isinstance(n, int) or n < 3:
                raise ValueError(f"cycle length must be an integer >= 3, got {n!r}")

    @classmethod
    def of(cls, *lengths: int) -> "CycleSpec":
        return cls(tuple(lengths))

    @property
    def t(self) -> int:
        return len(self.lengths)

    @property
    def t_even(self) -> int:
        return sum(1 for n in self.lengths if n % 2 == 0)

    @property
    def t_odd(self) -> int:
        return sum(1 for n in self.lengths if n % 2 == 1)

    @property
    def n_max(self) -> int:
        return max(self.lengths)


@dataclass(frozen=True)
class LinearForm:
    """The exact linear form ``a*m1 + b*m2 + c`` with integer coefficients."""

    a: int
    b: int
    c: int

    def evaluate(self, m1: int, m2: int) -> int:
        return self.a * m1 + self.b * m2 + self.c

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass
class BoundReport:
    """One size-Ramsey upper bound: total ~ coefficient * n.

    ``c`` is the exact host-size constant (host has c*n vertices),
    ``d`` the certified edge density, ``coefficient`` the sharp
    n-coefficient of the expected edge count and ``coefficient_loose``
    the weaker closed form (when one exists).  ``coefficient_exact`` is
    populated when the coefficient is exactly rational (regular model
    with integer density).  ``constraint_ok`` records whether every
    requested cycle length clears the minimum-length requirement
    ``n_i >= 2*ceil(log2(c * n_max)) + 2``.
    """

    model: str
    c: Fraction
    d: float
    coefficient: float
    coefficient_loose: Optional[float]
    constraint_ok: bool
    coefficient_exact: Optional[Fraction] = None

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "c": format_rational(self.c),
            "c_float": float(self.c),
            "d": self.d,
            "coefficient": self.coefficient,
            "coefficient_loose": self.coefficient_loose,
            "coefficient_exact": (
                None
                if self.coefficient_exact is None
                else format_rational(self.coefficient_exact)
            ),
            "constraint_ok": self.constraint_ok,
        }


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ── the linear-form recursion ────────────────────────────────────────────────


def base_linear_form() -> LinearForm:
    """Level-1 form: 33*m1 + 49*m2."""
    return LinearForm(33, 49, 0)


def _check_level(t: int, t_cap: int, minimum: int = 1) -> None:
    if not isinstance(t, int) or t < minimum:
        raise ValueError(f"level t must be an integer >= {minimum}, got {t!r}")
    if t > t_cap:
        raise ValueError(
            f"level t={t} exceeds the cap {t_cap}; coefficients grow like "
            f"35**(2**t), pass a larger t_cap explicitly if this is intended"
        )


def ramsey_linear_form(t: int, t_cap: int = DEFAULT_T_CAP) -> LinearForm:
    """Coefficients (a_t, b_t, c_t) of the level-t linear form.

    Quadratic recursion from level t-1:

        a_t = 32*a**2 + a*b + 32*b
        b_t = 49*a**2 + a*b + 49*b
        c_t = -a*b + a*c + c
    """
    _check_level(t, t_cap)
    a, b, c = 33, 49, 0
    for _ in range(t - 1):
        a, b, c = (
            32 * a * a + a * b + 32 * b,
            49 * a * a + a * b + 49 * b,
            -a * b + a * c + c,
        )
    return LinearForm(a, b, c)


def eval_ramsey_form(t: int, m1: int, m2: int, t_cap: int = DEFAULT_T_CAP) -> int:
    """Evaluate the level-t form by the literal two-fold recursion.

    Level 1 is the base form; level t plugs a level-(t-1) value back into
    level t-1:

        F_t(m1, m2) = F_{t-1}(F_{t-1}(32*m1 + 49*m2, m1 + m2 - 1),
                              32*m1 + 49*m2)

    This is intentionally *not* the coefficient route, so the two can be
    cross-checked against each other.
    """
    _check_level(t, t_cap)
    if m1 < 1 or m2 < 1:
        raise ValueError("arguments m1, m2 must be positive integers")
    if t == 1:
        return 33 * m1 + 49 * m2
    outer = 32 * m1 + 49 * m2
    inner = eval_ramsey_form(t - 1, outer, m1 + m2 - 1, t_cap)
    return eval_ramsey_form(t - 1, inner, outer, t_cap)


def closed_form_envelope(t: int, m1: int, m2: int, t_cap: int = DEFAULT_T_CAP) -> int:
    """Closed-form dominating value ``35**(2**t - 2) * (32*m1 + 49*m2)``.

    Defined for t >= 2; it upper-bounds :func:`eval_ramsey_form` there.
    """
    _check_level(t, t_cap, minimum=2)
    if m1 < 0 or m2 < 0:
        raise ValueError("arguments m1, m2 must be nonnegative")
    return 35 ** (2**t - 2) * (32 * m1 + 49 * m2)


# ── closed-form host sizes ───────────────────────────────────────────────────


def multicycle_host_size(spec: CycleSpec, m: int, t_cap: int = DEFAULT_T_CAP) -> Fraction:
    """Host size ``82 * 35**(2**t_odd - 2) * 81**t_even * m`` as an exact rational.

    With no odd cycles the exponent is -1 and the value is a genuine
    fraction (denominator 35); callers that need an integer host size
    should take the ceiling themselves.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if spec.t_odd > t_cap:
        raise ValueError(f"t_odd={spec.t_odd} exceeds cap {t_cap}")
    return Fraction(82) * Fraction(35) ** (2**spec.t_odd - 2) * 81**spec.t_even * m


def bipartite_ramsey_bound(t: int, m: int, t_cap: int = DEFAULT_T_CAP) -> int:
    """Bipartite host side ``81**t * m`` for t even cycles plus a biclique side m."""
    _check_level(t, t_cap)
    if m < 1:
        raise ValueError("m must be a positive integer")
    return 81**t * m


# ── length constraints ───────────────────────────────────────────────────────


def ceil_log2_fraction(x: Rational) -> int:
    """Smallest integer k with 2**k >= x, computed exactly for rationals."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ceil_log2 requires a positive argument")
    p, q = x.numerator, x.denominator

    def holds(k: int) -> bool:
        return p <= (q << k) if k >= 0 else (p << -k) <= q

    k = p.bit_length() - q.bit_length()
    while holds(k - 1):
        k -= 1
    while not holds(k):
        k += 1
    return k


def validate_length_constraints(spec: CycleSpec, host_size: Rational) -> list[bool]:
    """Per-cycle flags for ``n_i >= 2*ceil(log2(host_size)) + 2``.

    The cutoff is reported, not enforced: short cycles simply come back
    flagged False so callers can surface the violation.
    """
    cutoff = 2 * ceil_log2_fraction(host_size) + 2
    return [n >= cutoff for n in spec.lengths]


# ── size-Ramsey coefficient reports ──────────────────────────────────────────


def host_constant(spec: CycleSpec) -> Fraction:
    """The c with host size N = c*n used by the random-host bounds.

    For exactly two cycles the linear-form route (coefficient sum of the
    level-2 form) competes with the closed-form host size; the smaller
    constant wins.  For any other count only the closed form applies.
    """
    closed = multicycle_host_size(spec, 1)
    if spec.t == 2:
        form = ramsey_linear_form(2)
        return min(Fraction(form.a + form.b), closed)
    return closed


def _constraint_ok(spec: CycleSpec, c: Fraction) -> bool:
    return all(validate_length_constraints(spec, c * spec.n_max))


def size_ramsey_gnp(spec: CycleSpec) -> BoundReport:
    """Edge-count coefficient for the binomial random host G(c*n, d/N).

    Sharp coefficient: c**2 * (c*ln(c) - (c-2)*ln(c-2)) / 2, also equal
    to c*d/2 at the critical density d; loose closed form
    (ln(c) + 1) * c**2.
    """
    c = host_constant(spec)
    cf = float(c)
    d = threshold_solver.gnp_min_density(1 / c)
    tight = cf * cf * (cf * math.log(cf) - (cf - 2.0) * math.log(cf - 2.0)) / 2.0
    loose = (math.log(cf) + 1.0) * cf * cf
    return BoundReport(
        model="gnp",
        c=c,
        d=d,
        coefficient=tight,
        coefficient_loose=loose,
        constraint_ok=_constraint_ok(spec, c),
    )


def size_ramsey_regular(
    spec: CycleSpec,
    d: Rational,
    verify: bool = True,
    grid_points: int = 100_000,
) -> BoundReport:
    """Edge-count coefficient c*d/2 for the random d-regular host on c*n vertices.

    ``d`` must be a density certified nonpositive-exponent for this spec's
    host constant; with ``verify=True`` (the default) the certificate is
    re-checked via the threshold solver.  ``verify=False`` skips the check
    and also admits the degenerate d=0 used by unit tests.
    """
    c = host_constant(spec)
    d = Fraction(d)
    if d < 0:
        raise ValueError("density d must be nonnegative")
    if verify:
        if d == 0:
            raise ValueError("d=0 is not certifiable; pass verify=False for degenerate input")
        check = threshold_solver.check_density_certificate(c, d, grid_points=grid_points)
        if not check.ok:
            raise ValueError(
                f"d={d} is not certified for c={c}: exponent "
                f"{check.max_exponent:+.6e} > 0 at a={check.worst_a!r}"
            )
    exact = Fraction(c) * d / 2
    return BoundReport(
        model="regular",
        c=c,
        d=float(d),
        coefficient=float(exact),
        coefficient_loose=None,
        constraint_ok=_constraint_ok(spec, c),
        coefficient_exact=exact,
    )


def size_ramsey_bipartite(spec: CycleSpec) -> BoundReport:
    """Edge-count coefficient for the bipartite random host, all-even specs only.

    Host is G(N, N, d/N) with N = 81**t * n; sharp coefficient
    2*c**2*(c*ln(c) - (c-1)*ln(c-1)) with c = 81**t, loose form
    2*c**2*(ln(c) + 1).
    """
    if spec.t_odd:
        raise ValueError("bipartite bound requires every cycle length to be even")
    c = Fraction(81) ** spec.t
    cf = float(c)
    d = threshold_solver.bipartite_min_density(1 / c)
    tight = 2.0 * cf * cf * (cf * math.log(cf) - (cf - 1.0) * math.log(cf - 1.0))
    loose = 2.0 * cf * cf * (math.log(cf) + 1.0)
    return BoundReport(
        model="bipartite",
        c=c,
        d=d,
        coefficient=tight,
        coefficient_loose=loose,
        constraint_ok=_constraint_ok(spec, c),
    )


__all__ = [
    "DEFAULT_T_CAP",
    "CycleSpec",
    "LinearForm",
    "BoundReport",
    "base_linear_form",
    "ramsey_linear_form",
    "eval_ramsey_form",
    "closed_form_envelope",
    "multicycle_host_size",
    "bipartite_ramsey_bound",
    "ceil_log2_fraction",
    "validate_length_constraints",
    "host_constant",
    "size_ramsey_gnp",
    "size_ramsey_regular",
    "size_ramsey_bipartite",
    "format_rational",
]
