"""Dominance and degree of a rational map by fiber counting over P^n(F_p).

Every point of P^n(F_p) is written with its first nonzero coordinate
normalized to 1, enumerated in blocks by the position of that pivot, and
pushed through the map in vectorized chunks.  Exhaustive mode buckets the
whole domain by image point and reads the degree off the fiber-size
histogram; sampled mode picks seeded random targets, then counts their
preimages in one pass over the domain.

Birationality proxy: a map defined over Q that is birational stays
birational mod all but finitely many primes, so a generic fiber of size 1
at two independent primes is strong evidence of degree 1.  Thresholds are
explicit knobs documented on the functions; bad primes surface as errors,
never as silently different answers.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arrangement import LinearFormProduct
from .errors import InconsistencyError, ReductionError, ResourceBoundError
from .fields import PrimeField, is_prime
from .polar import moving_part
from .poly import exact_rank

# exhaustive mode keys every domain point, so its memory grows with the
# image; sampled mode streams in constant memory and can afford more
DEFAULT_MAX_DOMAIN = 200_000_000
SAMPLED_MAX_DOMAIN = 2_000_000_000
_CHUNK = 1 << 20

# An image point counts toward the degree estimate only if its fiber size
# is shared by at least this fraction of the image: special loci (e.g. a
# contracted hyperplane) occupy ~1/p of the image and fall well below it,
# while every Frobenius class of a finite map sits well above it.
_DEGREE_IMAGE_FRACTION = 0.005

# Exhaustive homaloidal knob: at least 90% of non-base domain points must
# sit in fibers of size 1.  Sampled knob: at least 75% of targets (random
# targets land on contracted loci with probability ~(n+1)/p, so the
# exhaustive knob would misfire at p=31).
_EXHAUSTIVE_SIZE1_NUM, _EXHAUSTIVE_SIZE1_DEN = 9, 10
_SAMPLED_SIZE1_NUM, _SAMPLED_SIZE1_DEN = 3, 4


class ProjectivePoint:
    """Point of P^n(F_p), first nonzero coordinate scaled to 1."""

    __slots__ = ("coords", "p")

    def __init__(self, coords, p):
        reduced = [int(c) % p for c in coords]
        pivot = next((i for i, c in enumerate(reduced) if c), None)
        if pivot is None:
            raise ValueError("all coordinates are zero")
        inv = pow(reduced[pivot], -1, p)
        object.__setattr__(self, "coords", tuple(c * inv % p for c in reduced))
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def key(self):
        total = 0
        for c in reversed(self.coords):
            total = total * self.p + c
        return total

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.p == other.p and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"


@dataclass
class DegreeReport:
    p: int
    mode: str                    # "exhaustive" or "sample"
    seed: int | None
    targets: int | None
    domain_size: int
    base_points: int
    image_size: int
    fiber_histogram: dict        # fiber size -> count of image points
    degree: int
    dominant: bool
    homaloidal: bool


def projective_size(n, p):
    return (p ** (n + 1) - 1) // (p - 1)


def resolve_workers(workers=None):
    """Explicit argument, else POLARMAP_WORKERS, else 1."""
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("POLARMAP_WORKERS")
    return max(1, int(env)) if env else 1


def _component_tables(rational_map, p):
    """Reduce the components mod p into (exponent rows, coefficient) tables."""
    fld = PrimeField(p)
    tables = []
    any_terms = False
    for comp in rational_map.components:
        reduced = comp.reduce_mod(fld)
        exps = []
        coeffs = []
        for e, c in sorted(reduced.terms.items()):
            exps.append(e)
            coeffs.append(c)
        any_terms = any_terms or bool(coeffs)
        tables.append((exps, coeffs))
    if not any_terms:
        raise ReductionError(f"every component vanishes mod {p}; pick another prime")
    return tables


def _chunk_points(n, p, pivot, lo, hi):
    """Points lo..hi of the pivot block: coords (0,..,0,1,free digits).

    The block for pivot position k holds p^(n-k) points, indexed by the
    base-p digits of the free coordinates.  int32 is safe throughout the
    scan: the domain bound keeps p < 46341, so products stay below 2^31.
    """
    count = hi - lo
    coords = np.zeros((count, n + 1), dtype=np.int32)
    coords[:, pivot] = 1
    idx = np.arange(lo, hi, dtype=np.int64)
    for slot in range(n, pivot, -1):
        coords[:, slot] = idx % p
        idx //= p
    return coords


def _evaluate_images(tables, coords, p):
    count, nvars = coords.shape
    images = np.zeros((count, len(tables)), dtype=np.int32)
    power_cache = {}

    def power_column(v, e):
        key = (v, e)
        if key not in power_cache:
            if e == 1:
                power_cache[key] = coords[:, v]
            else:
                power_cache[key] = pow_mod_array(coords[:, v], e, p)
        return power_cache[key]

    for j, (exps, coeffs) in enumerate(tables):
        if not coeffs:
            continue
        acc = images[:, j]
        for e, c in zip(exps, coeffs):
            term = None
            for v, k in enumerate(e):
                if k:
                    col = power_column(v, k)
                    term = col if term is None else term * col % p
            if term is None:
                term = np.full(count, c, dtype=np.int32)
            elif c != 1:
                term = term * np.int32(c) % p
            # terms are < p each, so the running sum stays far below 2^31
            acc += term
        np.mod(acc, p, out=acc)
    return images


def pow_mod_array(column, e, p):
    result = np.ones_like(column)
    base = column
    while e:
        if e & 1:
            result = result * base % p
        e >>= 1
        if e:
            base = base * base % p
    return result


_INVERSE_TABLES = {}


def _inverse_table(p):
    table = _INVERSE_TABLES.get(p)
    if table is None:
        table = np.array([0] + [pow(v, p - 2, p) for v in range(1, p)],
                         dtype=np.int32)
        _INVERSE_TABLES[p] = table
    return table


def _normalized_keys(images, p):
    """(keys incl. zeros for base points, base count) for an image block.

    Key encoding: sum of coord_j * p^j after scaling the first nonzero
    coordinate to 1.  Base points (image identically zero) get key 0,
    which no projective point produces (a normalized point has some
    coordinate equal to 1), so callers can drop or ignore them cheaply.
    """
    nvars = images.shape[1]
    pivots = np.argmax(images != 0, axis=1)
    pivot_values = np.take_along_axis(images, pivots[:, None], axis=1)[:, 0]
    base_points = int((pivot_values == 0).sum())
    scale = _inverse_table(p)[pivot_values]
    keys = (images[:, nvars - 1] * scale % p).astype(np.int64)
    for j in range(nvars - 2, -1, -1):
        keys *= p
        keys += images[:, j] * scale % p
    return keys, base_points


def _block_tasks(n, p):
    tasks = []
    for pivot in range(n + 1):
        size = p ** (n - pivot)
        lo = 0
        while lo < size:
            hi = min(lo + _CHUNK, size)
            tasks.append((pivot, lo, hi))
            lo = hi
    return tasks


def _exhaustive_chunk(args):
    tables, n, p, pivot, lo, hi = args
    coords = _chunk_points(n, p, pivot, lo, hi)
    images = _evaluate_images(tables, coords, p)
    keys, base = _normalized_keys(images, p)
    if base:
        keys = keys[keys != 0]
    uniq, counts = np.unique(keys, return_counts=True)
    return uniq, counts, base


def _sampled_chunk(args):
    tables, n, p, pivot, lo, hi, target_keys = args
    coords = _chunk_points(n, p, pivot, lo, hi)
    images = _evaluate_images(tables, coords, p)
    keys, base = _normalized_keys(images, p)
    # target keys are >= 1, so base rows (key 0) never register a hit
    positions = np.searchsorted(target_keys, keys)
    positions[positions == len(target_keys)] = 0
    hits = target_keys[positions] == keys
    counts = np.bincount(positions[hits], minlength=len(target_keys))
    return counts, base


def _run_tasks(fn, args_list, workers):
    if workers <= 1:
        for args in args_list:
            yield fn(args)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, args_list, chunksize=1)


def _check_domain(n, p, max_domain):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    domain = projective_size(n, p)
    if domain > max_domain:
        raise ResourceBoundError(
            f"P^{n}(F_{p}) has {domain} points, over the bound {max_domain}")
    if p ** (n + 1) >= 2 ** 62:
        raise ResourceBoundError("image keys would overflow 64-bit integers")
    if p >= 46341:
        # scan arithmetic runs in int32; products must stay below 2^31
        raise ResourceBoundError(f"prime {p} too large for the 32-bit scan")
    return domain


def _degree_estimate(histogram, image_size, p):
    """Largest fiber size carried by a non-negligible share of the image.

    A finite map of degree d splits its generic fibers into Frobenius
    classes, so every size 1..d shows up on a constant fraction of the
    image; contracted subvarieties instead hit few image points with
    fibers of size at least p-1.  Sizes of p-1 or more are therefore
    never counted as generic, which assumes p-1 exceeds the true degree
    (pick a larger prime otherwise).
    """
    threshold = max(2, -(-image_size * 5 // 1000))
    eligible = [size for size, count in histogram.items()
                if size < p - 1 and count >= threshold]
    if eligible:
        return max(eligible)
    # degenerate histograms: fall back to the mode, smaller size on ties
    best = max(histogram.items(), key=lambda item: (item[1], -item[0]))
    return best[0]


def scan_exhaustive(rational_map, p, max_domain=DEFAULT_MAX_DOMAIN, workers=None):
    """Fiber histogram of the map over every point of P^n(F_p).

    dominant: image covers at least p^n - 5*p^(n-1) points (all integers,
    no rounding).  That bar is calibrated for degree-1 maps, whose image
    misses only base and contracted loci; a finite map of degree d > 1
    hits a constant fraction of rational points and reads as not dominant
    here (use dominance_by_span on its images for the geometric answer).
    homaloidal: dominant, degree estimate 1, and at least 90% of non-base
    domain points sit in size-1 fibers.
    """
    n = rational_map.n
    domain = _check_domain(n, p, max_domain)
    tables = _component_tables(rational_map, p)
    workers = resolve_workers(workers)
    args_list = [(tables, n, p, pivot, lo, hi) for pivot, lo, hi in _block_tasks(n, p)]
    key_parts = []
    count_parts = []
    base_points = 0
    for uniq, counts, base in _run_tasks(_exhaustive_chunk, args_list, workers):
        key_parts.append(uniq)
        count_parts.append(counts)
        base_points += base
    all_keys = np.concatenate(key_parts)
    all_counts = np.concatenate(count_parts)
    final_keys, inverse = np.unique(all_keys, return_inverse=True)
    fiber_sizes = np.zeros(len(final_keys), dtype=np.int64)
    np.add.at(fiber_sizes, inverse, all_counts)
    image_size = int(len(final_keys))
    if image_size == 0:
        raise ReductionError(f"no points survive outside the base locus mod {p}")
    sizes, counts = np.unique(fiber_sizes, return_counts=True)
    histogram = {int(s): int(c) for s, c in zip(sizes, counts)}
    mapped = sum(s * c for s, c in histogram.items())
    if base_points + mapped != domain:
        raise InconsistencyError(
            f"accounting failed: {base_points} base + {mapped} mapped != {domain}")
    degree = _degree_estimate(histogram, image_size, p)
    dominant = image_size >= p ** n - 5 * p ** (n - 1)
    size1 = histogram.get(1, 0)
    homaloidal = (dominant and degree == 1 and
                  _EXHAUSTIVE_SIZE1_DEN * size1 >=
                  _EXHAUSTIVE_SIZE1_NUM * (domain - base_points))
    return DegreeReport(
        p=p, mode="exhaustive", seed=None, targets=None,
        domain_size=domain, base_points=base_points, image_size=image_size,
        fiber_histogram=histogram, degree=degree, dominant=dominant,
        homaloidal=homaloidal)


def _sample_targets(rational_map, p, targets, seed):
    """Seeded random non-base domain points and their image points."""
    fld = PrimeField(p)
    components = [c.reduce_mod(fld) for c in rational_map.components]
    rng = random.Random(seed)
    nvars = rational_map.nvars
    picked = []
    images = []
    attempts = 0
    while len(picked) < targets:
        attempts += 1
        if attempts > 200 * targets:
            raise ReductionError(
                f"could not find {targets} non-base sample points mod {p}")
        coords = [rng.randrange(p) for _ in range(nvars)]
        if not any(coords):
            continue
        value = [c.evaluate(coords) for c in components]
        if not any(value):
            continue
        picked.append(ProjectivePoint(coords, p))
        images.append(ProjectivePoint(value, p))
    return picked, images


def scan_sampled(rational_map, p, targets=64, seed=0,
                 max_domain=SAMPLED_MAX_DOMAIN, workers=None):
    """Fiber sizes of seeded random targets, counted in one domain pass.

    The histogram counts distinct sampled image points by fiber size; the
    degree estimate is the fiber size attained by the most targets
    (smaller size on ties); dominance is the full-rank span test on the
    sampled images; homaloidal additionally requires degree 1 and 75% of
    targets in size-1 fibers.
    """
    n = rational_map.n
    domain = _check_domain(n, p, max_domain)
    if targets < n + 2:
        raise ValueError(f"need at least n+2 = {n + 2} targets for the span test")
    tables = _component_tables(rational_map, p)
    workers = resolve_workers(workers)
    _, image_points = _sample_targets(rational_map, p, targets, seed)
    per_target_keys = np.array([pt.key() for pt in image_points], dtype=np.int64)
    target_keys = np.unique(per_target_keys)
    args_list = [(tables, n, p, pivot, lo, hi, target_keys)
                 for pivot, lo, hi in _block_tasks(n, p)]
    fiber_counts = np.zeros(len(target_keys), dtype=np.int64)
    base_points = 0
    for counts, base in _run_tasks(_sampled_chunk, args_list, workers):
        fiber_counts += counts
        base_points += base
    key_to_size = {int(k): int(c) for k, c in zip(target_keys, fiber_counts)}
    target_sizes = [key_to_size[int(k)] for k in per_target_keys]
    histogram = {}
    for k, c in zip(target_keys, fiber_counts):
        histogram[int(c)] = histogram.get(int(c), 0) + 1
    tally = {}
    for size in target_sizes:
        tally[size] = tally.get(size, 0) + 1
    degree = max(tally.items(), key=lambda item: (item[1], -item[0]))[0]
    dominant = dominance_by_span(image_points, p)
    size1_targets = tally.get(1, 0)
    homaloidal = (dominant and degree == 1 and
                  _SAMPLED_SIZE1_DEN * size1_targets >=
                  _SAMPLED_SIZE1_NUM * targets)
    return DegreeReport(
        p=p, mode="sample", seed=seed, targets=targets,
        domain_size=domain, base_points=base_points,
        image_size=int(len(target_keys)), fiber_histogram=histogram,
        degree=degree, dominant=dominant, homaloidal=homaloidal)


def dominance_by_span(points, p):
    """True iff the given image points span the whole dual space.

    The contrapositive of the cone criterion: an image inside a hyperplane
    has coordinate vectors of deficient rank.  Needs at least n+2 points
    to be meaningful evidence of dominance.
    """
    coord_rows = [list(pt.coords) if isinstance(pt, ProjectivePoint) else list(pt)
                  for pt in points]
    if not coord_rows:
        raise ValueError("no image points given")
    nvars = len(coord_rows[0])
    if len(coord_rows) < nvars + 1:
        raise ValueError(f"need at least n+2 = {nvars + 1} points, got {len(coord_rows)}")
    fld = PrimeField(p)
    return exact_rank(coord_rows, fld) == nvars


def check_contraction(F, i, p, samples=100, seed=0):
    """True iff sampled points of {L_i = 0} all map to the dual point of L_i.

    Points are drawn from the hyperplane avoiding the other factors' zero
    sets, and the map evaluated is the moving part of the polar system of
    F (for square-free F that is the polar map itself; for higher
    multiplicities the raw partials all vanish on the hyperplane and only
    the moving part sees it).
    """
    if not isinstance(F, LinearFormProduct):
        raise TypeError("check_contraction takes a LinearFormProduct")
    if not 0 <= i <= F.r:
        raise IndexError(f"form index {i} out of range")
    fld = PrimeField(p)
    row = [c % p for c in F.forms[i]]
    pivot = next((t for t, c in enumerate(row) if c), None)
    if pivot is None:
        raise ReductionError(f"form {i} vanishes mod {p}; pick another prime")
    dual = ProjectivePoint(F.forms[i], p)
    moving = [c.reduce_mod(fld) for c in moving_part(F).moving.components]
    other_forms = [[c % p for c in F.forms[j]] for j in range(len(F.forms)) if j != i]
    nvars = F.nvars
    inv_pivot = pow(row[pivot], -1, p)
    rng = random.Random(seed)
    found = 0
    attempts = 0
    while found < samples:
        attempts += 1
        if attempts > 200 * samples:
            raise ReductionError(
                f"hyperplane {i} yields no usable sample points mod {p}; "
                "retry with a larger prime")
        free = [rng.randrange(p) for _ in range(nvars - 1)]
        if not any(free):
            continue
        coords = []
        it = iter(free)
        for t in range(nvars):
            coords.append(0 if t == pivot else next(it))
        coords[pivot] = -inv_pivot * sum(row[t] * coords[t] for t in range(nvars)) % p
        if any(sum(f[t] * coords[t] for t in range(nvars)) % p == 0
               for f in other_forms):
            continue
        value = [c.evaluate(coords) for c in moving]
        if not any(value):
            continue
        found += 1
        if ProjectivePoint(value, p) != dual:
            return False
    return True
