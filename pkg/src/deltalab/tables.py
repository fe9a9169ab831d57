"""Sieved tables of the character convolution functions, their cutoff
splits, divisor-sum asymptotics, and short-interval prime counts.

The functions, all attached to a real character chi of conductor D:

    lam  = 1 * chi            (integer)
    nu   = mu * (mu chi)      (integer)
    rho  = 1 * lam            (integer)
    lam' (d) = sum_{kl=d} chi(k) log l  = (lam * Lambda)(d)
    Lambda(n) = sum_{dm=n} lam'(d) nu(m)   (the von Mangoldt function)

plus the splits at the cutoff C (default D^2): rho = rho* + rho_*,
Lambda = Lambda* + Lambda_* according to m <= C versus m > C.

lam' and Lambda are integer combinations of logarithms of primes.  The
float arrays evaluate those combinations against the shared correctly
rounded math.log values; the identity checks in verify_table_identities
compare the integer coefficient vectors themselves, prime by prime, so
they are exact and immune to float accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

import numpy as np

from .characters import RealCharacter, ResiduePattern, l_one, l_one_derivative, residue_main_term
from .monomials import Monomial, evaluate, mono
from .sieves import mobius_array, primes_up_to, smallest_prime_factor, tau_array, von_mangoldt_window

__all__ = [
    "FunctionTable",
    "CountReport",
    "AsymptoticReport",
    "sieve_tables",
    "divisor_sum",
    "asymptotic_residual",
    "psi_counts",
    "tau_moment_bound",
    "verify_table_identities",
    "lam_prime_summatory",
    "nu_value",
    "MemoryBudgetError",
    "ERROR_MONOMIALS",
]


class MemoryBudgetError(MemoryError):
    """Table would not fit the configured budget."""


class IdentityCheckError(AssertionError):
    """An exact convolution-identity check failed."""


#: Approximate bytes per table entry (five int64 + four float64 + chi int8).
_BYTES_PER_ENTRY = 80
DEFAULT_MEMORY_BUDGET = 2 << 30

#: Error-term monomials of the divisor-sum asymptotics, eps = 0.
ERROR_MONOMIALS: Dict[str, Monomial] = {
    "lambda": mono(D=Fraction(1, 3), x=Fraction(1, 3)),
    "lambda_prime": mono(D=Fraction(1, 3), x=Fraction(1, 3)),
    "rho": mono(D=Fraction(527, 1038), x=Fraction(511, 1038)),
}

_INT_FIELDS = ("lam", "nu", "rho", "rho_star", "rho_substar")
_FLOAT_FIELDS = ("lam_prime", "Lam", "Lam_star", "Lam_substar")


@dataclass(frozen=True)
class FunctionTable:
    """Arrays over n in [1, N] (index 0 unused), immutable after build."""

    limit: int
    chi: RealCharacter
    cutoff: int
    lam: np.ndarray
    nu: np.ndarray
    rho: np.ndarray
    rho_star: np.ndarray
    rho_substar: np.ndarray
    lam_prime: np.ndarray
    Lam: np.ndarray
    Lam_star: np.ndarray
    Lam_substar: np.ndarray

    def array(self, f: str) -> np.ndarray:
        key = _canonical_name(f)
        return getattr(self, key)


_NAME_ALIASES = {
    "lambda": "lam",
    "lam": "lam",
    "nu": "nu",
    "rho": "rho",
    "rho_star": "rho_star",
    "rho*": "rho_star",
    "rho_substar": "rho_substar",
    "rho_*": "rho_substar",
    "lambda_prime": "lam_prime",
    "lam_prime": "lam_prime",
    "lambda'": "lam_prime",
    "Lambda": "Lam",
    "Lam": "Lam",
    "Lambda_star": "Lam_star",
    "Lambda*": "Lam_star",
    "Lambda_substar": "Lam_substar",
    "Lambda_*": "Lam_substar",
}


def _canonical_name(f: str) -> str:
    try:
        return _NAME_ALIASES[f]
    except KeyError:
        raise ValueError(
            f"unknown function {f!r}; choose from {sorted(set(_NAME_ALIASES))}"
        ) from None


def nu_value(chi: RealCharacter, m: int) -> int:
    """nu(m) via multiplicativity: nu(p) = -1 - chi(p), nu(p^2) = chi(p),
    nu(p^k) = 0 for k >= 3."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    out = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            if k == 1:
                out *= -1 - chi(p)
            elif k == 2:
                out *= chi(p)
            else:
                return 0
            if out == 0:
                return 0
        p += 1 if p == 2 else 2
    if m > 1:
        out *= -1 - chi(m)
    return out


def sieve_tables(
    N: int,
    chi: RealCharacter,
    cutoff: Optional[int] = None,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> FunctionTable:
    """Build all nine arrays on [1, N] by strided divisor sieves.

    cutoff defaults to D^2.  Raises MemoryBudgetError with a suggested
    smaller limit when the arrays would not fit the budget.
    """
    N = int(N)
    if N < 1:
        raise ValueError(f"limit must be >= 1, got {N}")
    need = N * _BYTES_PER_ENTRY
    if need > memory_budget:
        raise MemoryBudgetError(
            f"limit {N} needs ~{need >> 20} MiB > budget {memory_budget >> 20} MiB; "
            f"use limit <= {memory_budget // _BYTES_PER_ENTRY} or psi_counts, "
            "which streams segmented sieves"
        )
    C = chi.conductor**2 if cutoff is None else int(cutoff)
    chi_tab = chi.value_table(N)

    lam = np.zeros(N + 1, dtype=np.int64)
    for d, c in zip(
        np.flatnonzero(chi_tab[1:]).tolist(), chi_tab[1:][chi_tab[1:] != 0].tolist()
    ):
        d += 1
        lam[d::d] += c

    mu = mobius_array(N)
    nu = np.zeros(N + 1, dtype=np.int64)
    mc = mu * chi_tab
    for d, c in zip(np.flatnonzero(mc[1:]).tolist(), mc[1:][mc[1:] != 0].tolist()):
        d += 1
        nu[d::d] += c * mu[1 : N // d + 1]

    rho = np.zeros(N + 1, dtype=np.int64)
    for m, v in zip(np.flatnonzero(lam[1:]).tolist(), lam[1:][lam[1:] != 0].tolist()):
        m += 1
        rho[m::m] += v

    rho_star = np.zeros(N + 1, dtype=np.int64)
    for m in range(1, min(C, N) + 1):
        v = int(lam[m])
        if v:
            rho_star[m::m] += v
    rho_substar = rho - rho_star  # exact integer complement of the m <= C part

    # lam' = lam * Lambda: one strided pass per prime power, all log values
    # drawn from math.log (the shared correctly rounded table).
    lam_prime = np.zeros(N + 1, dtype=np.float64)
    Lam = np.zeros(N + 1, dtype=np.float64)
    for p in primes_up_to(N):
        p = int(p)
        lp = math.log(p)
        pk = p
        while pk <= N:
            Lam[pk] = lp
            lam_prime[pk::pk] += lp * lam[1 : N // pk + 1]
            pk *= p

    Lam_star = np.zeros(N + 1, dtype=np.float64)
    for m in range(1, min(C, N) + 1):
        v = int(nu[m])
        if v:
            Lam_star[m::m] += v * lam_prime[1 : N // m + 1]
    # Exact float complement so Lambda = Lambda* + Lambda_* holds pointwise;
    # the m > C definition is verified at the coefficient level by
    # verify_table_identities.
    Lam_substar = Lam - Lam_star

    for arr in (lam, nu, rho, rho_star, rho_substar, lam_prime, Lam, Lam_star, Lam_substar):
        arr.setflags(write=False)
    return FunctionTable(
        limit=N,
        chi=chi,
        cutoff=C,
        lam=lam,
        nu=nu,
        rho=rho,
        rho_star=rho_star,
        rho_substar=rho_substar,
        lam_prime=lam_prime,
        Lam=Lam,
        Lam_star=Lam_star,
        Lam_substar=Lam_substar,
    )


def divisor_sum(t: FunctionTable, f: str, x: float):
    """Exact partial sum of f over n <= x (int for the integer functions,
    float for the log-valued ones)."""
    kx = math.floor(x)
    if kx > t.limit:
        raise ValueError(f"x = {x} exceeds table limit {t.limit}")
    if kx < 1:
        return 0
    arr = t.array(f)
    seg = arr[1 : kx + 1]
    if arr.dtype == np.int64:
        return int(seg.sum())
    return float(seg.sum())


@dataclass(frozen=True)
class AsymptoticReport:
    main: float
    residual: float
    normalized: float


def asymptotic_residual(t: FunctionTable, f: str, x: float) -> AsymptoticReport:
    """Residual of the partial sum of f against its smooth main term,
    normalized by the error-term monomial at (D, x) with eps = 0.

    Main terms: lambda -> L(1,chi) x; lambda' -> L x log x + (L' - L) x;
    rho -> L x log x + (L' + (2 gamma - 1) L) x.
    """
    key = _canonical_name(f)
    if key not in ("lam", "lam_prime", "rho"):
        raise ValueError(f"asymptotics available for lambda, lambda_prime, rho; got {f}")
    chi = t.chi
    if key == "lam":
        main = residue_main_term(ResiduePattern(1, (chi,)), x)
        err = ERROR_MONOMIALS["lambda"]
    elif key == "lam_prime":
        L, Ld = l_one(chi), l_one_derivative(chi)
        main = L * x * math.log(x) + (Ld - L) * x
        err = ERROR_MONOMIALS["lambda_prime"]
    else:
        main = residue_main_term(ResiduePattern(2, (chi,)), x)
        err = ERROR_MONOMIALS["rho"]
    total = divisor_sum(t, key, x)
    residual = float(total) - main
    scale = evaluate(err, {"D": float(chi.conductor), "x": float(x)})
    return AsymptoticReport(main=main, residual=residual, normalized=residual / scale)


def lam_prime_summatory(chi: RealCharacter, z: int) -> float:
    """sum_{d <= z} lam'(d) = sum_{k <= z} chi(k) log(floor(z/k)!), blocked
    over constant floor(z/k) with exact character prefix sums; O(sqrt z)."""
    z = int(z)
    if z < 1:
        return 0.0
    parts = []
    k = 1
    while k <= z:
        v = z // k
        k2 = z // v
        s = chi.partial_sum(k2) - chi.partial_sum(k - 1)
        if s:
            parts.append(s * math.lgamma(v + 1))
        k = k2 + 1
    return math.fsum(parts)


@dataclass(frozen=True)
class CountReport:
    """Short-interval counts on (x-y, x].  psi is assembled as
    psi_star + psi_substar, so the split identity holds exactly."""

    x: float
    y: float
    psi: float
    psi_star: float
    psi_substar: float
    pi_count: int
    li_value: float
    main_term: float
    ratio: float

    def __post_init__(self):
        assert self.psi == self.psi_star + self.psi_substar


def _li_window(a: float, b: float) -> float:
    """Integral of 1/log t over [a, b]; quadrature with 1e-9 tolerance for
    a >= 2, else the principal-value li difference (documented offset-free
    convention)."""
    if b <= a:
        return 0.0
    if a >= 2:
        from scipy.integrate import quad

        val, _ = quad(lambda t: 1.0 / math.log(t), a, b, epsabs=1e-9, epsrel=1e-12, limit=200)
        return float(val)
    import mpmath as mp

    return float(mp.li(b) - mp.li(a))


def psi_counts(
    N_limit: int,
    chi: RealCharacter,
    x: float,
    y: float,
    cutoff: Optional[int] = None,
) -> CountReport:
    """psi, psi*, psi_* over (x-y, x], plus prime count and Li window.

    psi comes from a segmented prime-power sieve; psi* from the m <= C
    convolution via O(sqrt z) partial sums of lam'; psi_* is the exact
    complement (Lambda_* = Lambda - Lambda*), and psi is reassembled as
    psi_star + psi_substar (equal to the sieve value up to one rounding).
    """
    if not 0 < y <= x:
        raise ValueError(f"need 0 < y <= x, got x={x}, y={y}")
    if x > N_limit:
        raise ValueError(f"x = {x} exceeds N_limit = {N_limit}")
    C = chi.conductor**2 if cutoff is None else int(cutoff)
    xi, xmy = math.floor(x), math.floor(x - y)

    psi_sieve, pi_cnt = von_mangoldt_window(xmy, xi)

    star_parts = []
    for m in range(1, C + 1):
        v = nu_value(chi, m)
        if v:
            star_parts.append(
                v * (lam_prime_summatory(chi, xi // m) - lam_prime_summatory(chi, xmy // m))
            )
    psi_star = math.fsum(star_parts)
    psi_substar = psi_sieve - psi_star
    psi = psi_star + psi_substar

    li_val = _li_window(x - y, x)
    return CountReport(
        x=float(x),
        y=float(y),
        psi=psi,
        psi_star=psi_star,
        psi_substar=psi_substar,
        pi_count=int(pi_cnt),
        li_value=li_val,
        main_term=float(y),
        ratio=psi / float(y),
    )


def tau_moment_bound(delta_cap: int, A: float) -> float:
    """The exact finite sum of tau(d)^A / d for d <= delta_cap.

    Reported next to (log cap)^(2^A + 1) by the CLI; the comparison is
    informational only, never asserted as a bound proof.
    """
    delta_cap = int(delta_cap)
    if delta_cap < 2:
        raise ValueError(f"delta_cap must be >= 2, got {delta_cap}")
    if A < 0:
        raise ValueError(f"A must be >= 0, got {A}")
    tau = tau_array(delta_cap)
    tmax = float(tau.max())
    if A * math.log(tmax) > math.log(1e300):
        raise OverflowError(f"tau^A overflows float range at A = {A}")
    d = np.arange(1, delta_cap + 1, dtype=np.float64)
    return float(np.sum(tau[1:].astype(np.float64) ** A / d))


# ---------------------------------------------------------------------------
# Exact identity verification at the log-coefficient level.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TableCheckReport:
    limit: int
    discriminant: int
    primes_checked: int
    max_float_deviation: float


def _reference_multiplicative(t: FunctionTable):
    """lam, nu, rho recomputed per n from multiplicativity (independent of
    the strided sieves); exact integer arrays."""
    N = t.limit
    chi = t.chi
    spf = smallest_prime_factor(N)
    lam_ref = np.zeros(N + 1, dtype=np.int64)
    nu_ref = np.zeros(N + 1, dtype=np.int64)
    rho_ref = np.zeros(N + 1, dtype=np.int64)
    lam_ref[1] = nu_ref[1] = rho_ref[1] = 1
    chi_p_cache: Dict[int, int] = {}
    for n in range(2, N + 1):
        m = n
        lam_v = nu_v = rho_v = 1
        while m > 1:
            p = int(spf[m])
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            try:
                cp = chi_p_cache[p]
            except KeyError:
                cp = chi_p_cache[p] = chi(p)
            if cp == 1:
                lam_pk, rho_pk = k + 1, (k + 1) * (k + 2) // 2
            elif cp == 0:
                lam_pk, rho_pk = 1, k + 1
            else:
                lam_pk = 1 - (k % 2)
                rho_pk = (k + 2) // 2
            nu_pk = (-1 - cp) if k == 1 else (cp if k == 2 else 0)
            lam_v *= lam_pk
            nu_v *= nu_pk
            rho_v *= rho_pk
        lam_ref[n], nu_ref[n], rho_ref[n] = lam_v, nu_v, rho_v
    return lam_ref, nu_ref, rho_ref


def verify_table_identities(t: FunctionTable, slack: float = 1e-9) -> TableCheckReport:
    """Exact verification of every convolution identity.

    Integer functions are compared against independent multiplicative
    recomputations; lam' and Lambda are checked prime by prime on their
    integer log-coefficient vectors:

        definition route   a_p(d) = sum_{kl=d} chi(k) v_p(l)
        convolution route  b_p(d) = sum_k lam(d / p^k)
        Lambda route       (a_p strided against nu) == [d is a power of p]

    plus the cutoff splits and 0 <= lam'(d) <= tau(d) log d (float check
    with the stated slack).  Raises IdentityCheckError on any mismatch.
    """
    N, C = t.limit, t.cutoff
    chi = t.chi
    chi_np = chi.value_table(N).astype(np.int64)

    lam_ref, nu_ref, rho_ref = _reference_multiplicative(t)
    for name, got, ref in (
        ("lambda = 1*chi", t.lam, lam_ref),
        ("nu = mu*(mu chi)", t.nu, nu_ref),
        ("rho = 1*lambda", t.rho, rho_ref),
    ):
        if not np.array_equal(got[1:], ref[1:]):
            bad = int(np.flatnonzero(got[1:] != ref[1:])[0]) + 1
            raise IdentityCheckError(
                f"{name} fails first at n={bad}: table {got[bad]}, reference {ref[bad]}"
            )
    if not np.array_equal(t.rho[1:], t.rho_star[1:] + t.rho_substar[1:]):
        raise IdentityCheckError("rho != rho* + rho_* pointwise")
    small = min(C, N)
    if np.any(t.rho_substar[1 : small + 1] != 0):
        raise IdentityCheckError("rho_*(n) != 0 for some n <= cutoff")

    # Per-prime exact coefficient checks and the shared-log float build.
    # Coefficient vectors of log p live on multiples of p, so each prime
    # works on the compressed array indexed by j = n/p (length N//p).
    lam_np = t.lam
    nu_np = t.nu
    lamp_float = np.zeros(N + 1, dtype=np.float64)
    star_float = np.zeros(N + 1, dtype=np.float64)
    sub_float = np.zeros(N + 1, dtype=np.float64)
    primes = primes_up_to(N)
    for p in primes:
        p = int(p)
        top = N // p
        b_c = np.zeros(top + 1, dtype=np.int64)  # b_c[j] = coeff at n = j*p
        stride = 1  # p^(k-1) in compressed coordinates
        while stride <= top:
            b_c[stride::stride] += lam_np[1 : top // stride + 1]
            stride *= p
        a_c = np.zeros(top + 1, dtype=np.int64)
        for j in range(1, top + 1):  # l = j*p runs over multiples of p
            v, m = 1, j
            while m % p == 0:
                m //= p
                v += 1
            a_c[j::j] += v * chi_np[1 : top // j + 1]
        if not np.array_equal(a_c, b_c):
            bad = int(np.flatnonzero(a_c != b_c)[0]) * p
            raise IdentityCheckError(
                f"lam' = lam*Lambda fails at n={bad}, prime {p}: "
                f"definition {a_c[bad // p]}, convolution {b_c[bad // p]}"
            )
        conv_c = np.zeros(top + 1, dtype=np.int64)
        for j in range(1, top + 1):  # d = j*p against all m with nu(m) != 0
            c = int(a_c[j])
            if c:
                conv_c[j::j] += c * nu_np[1 : top // j + 1]
        direct_c = np.zeros(top + 1, dtype=np.int64)
        stride = 1
        while stride <= top:
            direct_c[stride] = 1
            stride *= p
        if not np.array_equal(conv_c, direct_c):
            bad = int(np.flatnonzero(conv_c != direct_c)[0]) * p
            raise IdentityCheckError(
                f"Lambda = lam'*nu fails at n={bad}, prime {p}: "
                f"convolution {conv_c[bad // p]}, direct {direct_c[bad // p]}"
            )
        star_c = np.zeros(top + 1, dtype=np.int64)
        for m in range(1, min(small, top) + 1):
            c = int(nu_np[m])
            if c:
                star_c[m::m] += c * a_c[1 : top // m + 1]
        sub_c = direct_c - star_c  # exact integer complement (m > C part)
        lp = math.log(p)
        lamp_float[p :: p] += lp * a_c[1:]
        star_float[p :: p] += lp * star_c[1:]
        sub_float[p :: p] += lp * sub_c[1:]

    # lam'(1) = 0 and the inequality 0 <= lam' <= tau log with slack.
    tau = tau_array(N)
    n_arr = np.arange(N + 1, dtype=np.float64)
    n_arr[0] = 1.0
    upper = tau * np.log(n_arr)
    if np.any(lamp_float < -slack) or np.any(lamp_float[1:] > upper[1:] + slack):
        bad = int(
            np.flatnonzero((lamp_float < -slack) | (lamp_float > upper + slack))[0]
        )
        raise IdentityCheckError(f"0 <= lam' <= tau log fails at n={bad}")

    devs = [
        float(np.max(np.abs(t.lam_prime - lamp_float))),
        float(np.max(np.abs(t.Lam_star - star_float))),
        float(np.max(np.abs(t.Lam_substar - sub_float))),
    ]
    if max(devs) > slack:
        raise IdentityCheckError(
            f"float tables deviate from exact-coefficient evaluation by {max(devs)}"
        )
    return TableCheckReport(
        limit=N,
        discriminant=chi.discriminant,
        primes_checked=len(primes),
        max_float_deviation=max(devs),
    )
