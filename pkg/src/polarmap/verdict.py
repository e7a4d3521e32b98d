"""Structural homaloidality and its inductive certificate.

A product of linear forms has a birational moving polar map exactly when
the distinct forms number n+1 and are linearly independent, regardless of
multiplicities.  structural_verdict answers by rank alone;
inductive_certificate rederives the same answer by restricting to a
factor hyperplane one dimension at a time, down to the two-points-in-P^1
base case, recording every step so the descent can be replayed.
full_verdict runs both plus the fiber-counting oracle on the moving parts
of F and of its square-free reduction, and treats any disagreement
between the four routes as a hard error.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .arrangement import LinearFormProduct
from .errors import InconsistencyError
from .fields import QQ
from .oracle import (DEFAULT_MAX_DOMAIN, SAMPLED_MAX_DOMAIN, scan_exhaustive,
                     scan_sampled)
from .polar import RationalMap, moving_part, restrict_arrangement
from .poly import Polynomial
from .report import ReportDocument


class CremonaMap:
    """The monomial family X_0^{m_0} * ... * X_n^{m_n}, all m_i >= 1."""

    __slots__ = ("exponents",)

    def __init__(self, exponents):
        exponents = tuple(exponents)
        if len(exponents) < 2:
            raise ValueError("need at least two variables")
        if any(not isinstance(m, int) or m < 1 for m in exponents):
            raise ValueError("exponents must be positive integers")
        object.__setattr__(self, "exponents", exponents)

    def __setattr__(self, name, value):
        raise AttributeError("CremonaMap is immutable")

    @property
    def n(self):
        return len(self.exponents) - 1

    def polynomial(self):
        return Polynomial(QQ, len(self.exponents), {self.exponents: 1})

    def moving_map(self):
        return monomial_moving_part(self.exponents)

    def __repr__(self):
        return f"CremonaMap{self.exponents}"


@dataclass(frozen=True)
class CertificateStep:
    """One descent level: restriction of the (reduced) arrangement along
    the chosen form's hyperplane."""
    index: int
    arrangement: LinearFormProduct
    reduced: bool            # did this level drop multiplicities first


@dataclass(frozen=True)
class Certificate:
    verdict: bool
    chain: tuple              # CertificateStep, length n-1 when accepting
    base_case: dict | None    # accepting terminal: the two forms in P^1
    refutation: dict | None   # {"reason": "rank-deficient" | "r!=n", ...}

    def entries(self):
        """Chain as plain dicts, ready for the report's certificate field."""
        out = []
        for k, step in enumerate(self.chain):
            out.append({"step": k, "index": step.index,
                        "arrangement": str(step.arrangement),
                        "reduced": step.reduced})
        if self.verdict:
            out.append({"base_case": self.base_case})
        else:
            out.append({"refutation": self.refutation})
        return out


def structural_verdict(F):
    """True iff the distinct forms number n+1 and have full rank.

    Multiplicities play no role: F and its square-free reduction get the
    same answer.
    """
    if not isinstance(F, LinearFormProduct):
        raise TypeError("structural_verdict takes a LinearFormProduct")
    return F.r == F.n and F.rank() == F.nvars


def monomial_moving_part(exponents):
    """The moving polar map of X_0^{m_0}...X_n^{m_n} in closed form.

    Component i is m_i * prod_{j != i} X_j; dividing the partials by
    their gcd prod X_j^{m_j - 1} gives exactly this, so it must agree
    with moving_part of the expanded monomial.
    """
    exponents = tuple(exponents)
    nvars = len(exponents)
    if nvars < 2:
        raise ValueError("need at least two variables")
    if any(not isinstance(m, int) or m < 1 for m in exponents):
        raise ValueError("exponents must be positive integers")
    components = []
    for i, m in enumerate(exponents):
        exps = tuple(0 if j == i else 1 for j in range(nvars))
        components.append(Polynomial(QQ, nvars, {exps: Fraction(m)}))
    return RationalMap(components)


def standard_cremona(n):
    """(prod_{j != 0} X_j, ..., prod_{j != n} X_j), the coordinate flip."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    return monomial_moving_part((1,) * (n + 1))


def cremona_involution_check(n):
    """Self-test: the standard map composed with itself, with the common
    divisor stripped, is the identity up to one scalar."""
    c = standard_cremona(n)
    return c.compose(c).with_base_stripped().is_scaled_identity()


def inductive_certificate(F):
    """Replay the descent: reduce, restrict along one form, recurse.

    Each level first checks the two refutation conditions (coefficient
    rank below n+1, then a form count different from n+1), then either
    lands in the P^1 base case of exactly two distinct forms or picks a
    restriction index.  Indices are tried in ascending order and the
    first square-free restriction wins; if none is square-free the first
    index is taken (such an arrangement is already doomed to refutation
    at a lower level, the choice only shapes the witness).
    """
    if not isinstance(F, LinearFormProduct):
        raise TypeError("inductive_certificate takes a LinearFormProduct")
    if F.n < 1:
        raise ValueError("ambient space must be at least P^1")
    chain = []
    current = F
    while True:
        n = current.n
        rank = current.rank()
        if rank < current.nvars:
            refutation = {"reason": "rank-deficient", "rank": rank,
                          "required": current.nvars, "r": current.r, "n": n}
            return Certificate(False, tuple(chain), None, refutation)
        if current.r != n:
            refutation = {"reason": "r!=n", "r": current.r, "n": n}
            return Certificate(False, tuple(chain), None, refutation)
        if n == 1:
            base = {"n": 1, "forms": [list(row) for row in current.forms]}
            return Certificate(True, tuple(chain), base, None)
        reduced = current.reduced()
        dropped = reduced != current
        chosen = None
        restricted = None
        for i in range(reduced.r + 1):
            candidate = restrict_arrangement(reduced, i)
            if candidate.is_squarefree():
                chosen, restricted = i, candidate
                break
        if chosen is None:
            chosen, restricted = 0, restrict_arrangement(reduced, 0)
        chain.append(CertificateStep(chosen, restricted, dropped))
        current = restricted


def replay_certificate(F, certificate):
    """Recompute an accepting chain from scratch; True iff every recorded
    arrangement matches the replayed restriction exactly."""
    current = F
    for step in certificate.chain:
        current = restrict_arrangement(current.reduced(), step.index)
        if current != step.arrangement:
            return False
    return True


def _scan(rational_map, p, mode, targets, seed, max_domain, workers):
    if mode == "exhaustive":
        if max_domain is None:
            max_domain = DEFAULT_MAX_DOMAIN
        return scan_exhaustive(rational_map, p, max_domain=max_domain,
                               workers=workers)
    if mode == "sample":
        if max_domain is None:
            max_domain = SAMPLED_MAX_DOMAIN
        return scan_sampled(rational_map, p, targets=targets, seed=seed,
                            max_domain=max_domain, workers=workers)
    raise ValueError(f"unknown mode {mode!r}")


def full_verdict(F, primes=(101,), mode="exhaustive", targets=64, seed=0,
                 max_domain=None, workers=None, input_text=None):
    """Check homaloidality four ways and insist the answers coincide.

    Routes: structural_verdict, inductive_certificate, and the oracle's
    homaloidal flag on the moving part of F and of its reduction, at
    every listed prime.  A homaloidal F additionally gets the restriction
    cross-check (its first descent restriction must itself be structurally
    homaloidal).  Any mismatch raises InconsistencyError: it means a bug
    or a bad prime, and neither may pass silently.
    """
    if not primes:
        raise ValueError("need at least one prime")
    started = time.monotonic()
    structural = structural_verdict(F)
    certificate = inductive_certificate(F)
    if certificate.verdict != structural:
        raise InconsistencyError(
            f"certificate says {certificate.verdict}, rank criterion says "
            f"{structural} for {F}")
    dec = moving_part(F)
    dec_red = moving_part(F.reduced())
    scans = []
    for p in primes:
        scan = _scan(dec.moving, p, mode, targets, seed, max_domain, workers)
        scan_red = _scan(dec_red.moving, p, mode, targets, seed, max_domain,
                         workers)
        if scan.homaloidal != scan_red.homaloidal:
            raise InconsistencyError(
                f"oracle flags differ between F and F_red at p={p}: "
                f"{scan.homaloidal} vs {scan_red.homaloidal}")
        if scan.homaloidal != structural:
            raise InconsistencyError(
                f"oracle says homaloidal={scan.homaloidal} at p={p}, "
                f"structure says {structural} for {F}")
        scans.append(scan)
    first = scans[0]
    for p, scan in zip(primes[1:], scans[1:]):
        if (scan.degree, scan.dominant, scan.homaloidal) != \
                (first.degree, first.dominant, first.homaloidal):
            raise InconsistencyError(
                f"verdicts disagree between p={primes[0]} and p={p}")
    entries = certificate.entries()
    if structural and F.n >= 2:
        i0 = certificate.chain[0].index
        restriction = restrict_arrangement(F, i0)
        ok = structural_verdict(restriction)
        entries.append({"restriction_check": {
            "index": i0, "arrangement": str(restriction), "verdict": ok}})
        if not ok:
            raise InconsistencyError(
                f"restriction along form {i0} of homaloidal {F} is not "
                "homaloidal")
    if len(primes) > 1:
        entries.append({"prime_stability": {
            "primes": list(primes), "agree": True}})
    millis = int((time.monotonic() - started) * 1000)
    return ReportDocument(
        input=input_text if input_text is not None else str(F),
        n=F.n, field="Fp", p=primes[0],
        seed=seed if mode == "sample" else None, mode=mode,
        fiber_histogram=dict(first.fiber_histogram),
        image_size=first.image_size, dominant=first.dominant,
        degree=first.degree, homaloidal=first.homaloidal,
        certificate=entries, millis=millis)
