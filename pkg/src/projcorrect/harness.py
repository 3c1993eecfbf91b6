"""Ground truth, corruption, differential oracles, and seeded experiments.

Seeding discipline: every randomized task derives its seed from a 64-bit
master seed via `derive_seed(master, index)` (splitmix64 of master plus a
golden-ratio stride; see corrector.py).  Trial i uses
derive_seed(master_seed, i), and within a trial the generator, the
corruption, and the correction draw sub-seeds at indices 0, 1, 2.  Reports
are therefore byte-identical across runs and across thread counts.

`naive_correct_point` is a deliberately unoptimized reference for the
exact corrector: every span and every image line is recomputed from
scratch per examined pair, with no incidence tables and no caching, as an
independent implementation for differential testing.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .bounds import BoundReport, hypotheses
from .corrector import (
    CorrectionOutcome,
    ExactMode,
    Mode,
    SampledMode,
    SemilinearMap,
    _threads,
    correct_map,
    derive_seed,
    preserved_line_fraction_exact,
    reconstruct_semilinear,
)
from .errors import CorrectionCollisionError, NotSemilinearError
from .field import FieldSpec, Frobenius
from .projspace import PointMap, ProjPoint, ProjSpace, proj_space, rank_of

import random

NAIVE_MAX_POINTS = 200


def gen_semilinear(
    space: ProjSpace, seed: int, sigma: Union[str, int, Frobenius] = "random"
) -> SemilinearMap:
    """Uniformly random invertible matrix (rejection on the determinant) with
    the given or random Frobenius exponent; deterministic per seed."""
    rng = random.Random(seed)
    spec = space.field
    w = space.n + 1
    if sigma == "random":
        j = rng.randrange(spec.k)
    elif isinstance(sigma, Frobenius):
        if sigma.spec != spec:
            raise ValueError("Frobenius belongs to a different field")
        j = sigma.exponent
    else:
        j = int(sigma)
        if not 0 <= j < spec.k:
            raise ValueError(f"sigma exponent must lie in [0, {spec.k})")
    while True:
        mat = tuple(tuple(rng.randrange(spec.q) for _ in range(w)) for _ in range(w))
        if rank_of(spec, mat) == w:
            return SemilinearMap(Frobenius(spec, j), mat)


def corrupt_swap(f: PointMap, count: int, seed: int) -> PointMap:
    """Swap the images of `count` disjoint pairs of domain points.

    Injectivity is preserved by construction and exactly 2*count table
    entries change.
    """
    n_pts = f.domain.num_points
    if count < 0:
        raise ValueError("count must be >= 0")
    if 2 * count > n_pts:
        raise ValueError(f"count = {count} exceeds #points/2 = {n_pts // 2}")
    rng = random.Random(seed)
    picks = rng.sample(range(n_pts), 2 * count)
    table = [int(t) for t in f.table]
    for i in range(count):
        a, b = picks[2 * i], picks[2 * i + 1]
        table[a], table[b] = table[b], table[a]
    return PointMap(f.domain, f.codomain, table)


# -- naive differential oracle ---------------------------------------------------------


def _norm(spec: FieldSpec, vec: Sequence[int]) -> tuple[int, ...]:
    for c in vec:
        if c != 0:
            if c == 1:
                return tuple(vec)
            s = spec.inv_code(c)
            return tuple(spec.mul_codes(s, x) for x in vec)
    raise ValueError("zero vector")


def _span_pts(spec: FieldSpec, u: Sequence[int], v: Sequence[int]) -> frozenset:
    """All q+1 normalized points of the span of two independent vectors."""
    pts = {_norm(spec, v)}
    for a in range(spec.q):
        w = tuple(spec.add_codes(x, spec.mul_codes(a, y)) for x, y in zip(u, v))
        pts.add(_norm(spec, w))
    return frozenset(pts)


def naive_correct_point(f: PointMap, x: ProjPoint) -> CorrectionOutcome:
    """Reference corrector: recomputes every line and span from scratch per
    examined pair.  Restricted to tiny spaces; must agree with
    correct_point_exact everywhere."""
    dom, cod = f.domain, f.codomain
    if dom.num_points > NAIVE_MAX_POINTS:
        raise ValueError(f"naive corrector is limited to {NAIVE_MAX_POINTS} points")
    spec = dom.field
    q = spec.q

    def image_of(codes: tuple[int, ...]) -> tuple[int, ...]:
        return cod.points[f.table[dom.index_of_codes(codes)]].codes

    # pointed lines at x, rebuilt from raw spans
    seen_lines = set()
    for y in dom.points:
        if y != x:
            seen_lines.add(_span_pts(spec, x.codes, y.codes))
    pointed = []
    for line_pts in seen_lines:
        others = sorted(t for t in line_pts if t != x.codes)
        for y1 in others:
            for y2 in others:
                if y1 != y2:
                    pointed.append((y1, y2))

    def maps_to_line(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        imgs = [image_of(p) for p in _span_pts(spec, a, b)]
        return set(imgs) <= _span_pts(spec, imgs[0], imgs[1])

    counts: dict[tuple[int, ...], int] = {}
    for y1, y2 in pointed:
        for y3, y4 in pointed:
            if y1 == y3 or y2 == y4:
                continue
            if not maps_to_line(y1, y3) or not maps_to_line(y2, y4):
                continue
            m1 = _span_pts(spec, image_of(y1), image_of(y2))
            m2 = _span_pts(spec, image_of(y3), image_of(y4))
            common = m1 & m2
            if len(common) == 1:
                z = next(iter(common))
                counts[z] = counts.get(z, 0) + 1

    total = len(pointed) ** 2
    assert total == (q ** (dom.n + 1) - q) ** 2
    if counts:
        z_codes, best = max(counts.items(), key=lambda kv: (kv[1], kv[0]))
    else:
        z_codes, best = None, 0
    correctable = 2 * best > total
    return CorrectionOutcome(
        x=x,
        z=ProjPoint(spec, z_codes, _normalized=True) if correctable else None,
        majority_fraction=Fraction(best, total),
        quadruples_examined=total,
    )


# -- experiments ----------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentSpec:
    """A reproducible batch of correction trials."""

    field: FieldSpec
    n: int
    planted_sigma: Union[str, int]     # "random" or an exponent
    corruption_count: int
    mode_kind: str                     # "exact" or "sampled"
    trials: int
    master_seed: int
    samples: int = 200
    threshold: float = 0.6

    def __post_init__(self):
        if self.corruption_count < 0:
            raise ValueError("corruption count must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode_kind not in ("exact", "sampled"):
            raise ValueError("mode must be 'exact' or 'sampled'")

    def to_json_dict(self) -> dict:
        mode: dict = {"kind": self.mode_kind}
        if self.mode_kind == "sampled":
            mode["samples"] = self.samples
            mode["threshold"] = self.threshold
        return {
            "field": self.field.to_json_dict(),
            "n": self.n,
            "planted_sigma": self.planted_sigma,
            "corruption": {"model": "swap_pairs", "count": self.corruption_count},
            "mode": mode,
            "trials": self.trials,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ExperimentSpec":
        corruption = d["corruption"]
        if corruption.get("model", "swap_pairs") != "swap_pairs":
            raise ValueError("only the swap_pairs corruption model is supported")
        mode = d["mode"]
        return cls(
            field=FieldSpec.from_json_dict(d["field"]),
            n=int(d["n"]),
            planted_sigma=d.get("planted_sigma", "random"),
            corruption_count=int(corruption["count"]),
            mode_kind=mode["kind"],
            trials=int(d["trials"]),
            master_seed=int(d["master_seed"]),
            samples=int(mode.get("samples", 200)),
            threshold=float(mode.get("threshold", 0.6)),
        )


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    trial_seed: int
    eps_actual: Fraction
    hypotheses: BoundReport
    recovered: bool
    agreement: Fraction
    reconstruction_ok: bool
    elapsed: float

    def to_json_dict(self, include_timing: bool = False) -> dict:
        d = {
            "trial_index": self.trial_index,
            "trial_seed": self.trial_seed,
            "eps": {"num": self.eps_actual.numerator, "den": self.eps_actual.denominator},
            "bounds": self.hypotheses.to_json_dict(),
            "recovered": self.recovered,
            "agreement": {"num": self.agreement.numerator, "den": self.agreement.denominator},
            "reconstruction_ok": self.reconstruction_ok,
        }
        if include_timing:
            d["elapsed"] = self.elapsed
        return d


def run_trial(spec: ExperimentSpec, trial_index: int) -> TrialResult:
    t0 = time.perf_counter()
    space = proj_space(spec.field, spec.n)
    trial_seed = derive_seed(spec.master_seed, trial_index)
    planted = gen_semilinear(space, derive_seed(trial_seed, 0), spec.planted_sigma)
    base = planted.as_point_map(space)
    corrupted = corrupt_swap(base, spec.corruption_count, derive_seed(trial_seed, 1))
    eps_actual = 1 - preserved_line_fraction_exact(corrupted)
    if spec.mode_kind == "exact":
        mode: Mode = ExactMode()
    else:
        mode = SampledMode(
            samples=spec.samples, threshold=spec.threshold, seed=derive_seed(trial_seed, 2)
        )
    try:
        corrected, report = correct_map(corrupted, mode)
    except CorrectionCollisionError as e:
        corrected, report = None, e.report
    recovered = corrected == base if corrected is not None else False
    if corrected is not None:
        try:
            rec = reconstruct_semilinear(corrected)
            reconstruction_ok = rec.sigma == planted.sigma and rec.matrix == planted.matrix
        except (NotSemilinearError, ValueError):
            reconstruction_ok = False
    else:
        reconstruction_ok = False
    return TrialResult(
        trial_index=trial_index,
        trial_seed=trial_seed,
        eps_actual=eps_actual,
        hypotheses=hypotheses(space.q, space.n, eps_actual),
        recovered=recovered,
        agreement=report.agreement_with_input,
        reconstruction_ok=reconstruction_ok,
        elapsed=time.perf_counter() - t0,
    )


def run_experiment(spec: ExperimentSpec) -> tuple[TrialResult, ...]:
    """All trials, merged by trial index; identical results at any parallelism."""
    workers = _threads()
    indices = range(spec.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return tuple(ex.map(lambda i: run_trial(spec, i), indices))
    return tuple(run_trial(spec, i) for i in indices)


CSV_COLUMNS = [
    "trial_index", "trial_seed", "eps_num", "eps_den", "A_num", "A_den",
    "B_num", "B_den", "hyp1_strict", "hyp1_theorem", "hyp2",
    "recovered", "agreement_num", "agreement_den", "reconstruction_ok",
]


def render_report(
    results: Sequence[TrialResult],
    fmt: str = "json",
    spec: Optional[ExperimentSpec] = None,
    include_timing: bool = False,
) -> str:
    """Schema-stable serialization; excludes wall-clock timing by default so
    equal inputs render byte-identically."""
    if fmt == "json":
        doc: dict = {"results": [r.to_json_dict(include_timing) for r in results]}
        if spec is not None:
            doc["spec"] = spec.to_json_dict()
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in results:
            h = r.hypotheses
            writer.writerow([
                r.trial_index, r.trial_seed,
                r.eps_actual.numerator, r.eps_actual.denominator,
                h.A.numerator, h.A.denominator, h.B.numerator, h.B.denominator,
                int(h.hyp1_strict), int(h.hyp1_theorem), int(h.hyp2),
                int(r.recovered),
                r.agreement.numerator, r.agreement.denominator,
                int(r.reconstruction_ok),
            ])
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(
    results: Sequence[TrialResult],
    fmt: str,
    path: str,
    spec: Optional[ExperimentSpec] = None,
    include_timing: bool = False,
) -> None:
    """Write the rendered report to a file; I/O failures propagate as OSError."""
    text = render_report(results, fmt, spec, include_timing)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
