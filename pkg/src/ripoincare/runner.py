"""Executes one operation per request model and returns a result table.

This is the single compute path shared by the HTTP service handlers; the
CLI reaches it through the service API.  Every summary records the seed
and the grid/resolution metadata of any estimator involved, and row order
is deterministic, so identical requests produce identical tables.
"""
from __future__ import annotations

import math

import numpy as np

from . import certificate as cert
from .gain import ermakoff_test, parse_gain
from .graphs import neighbor_graph
from .indices import zippin_indices
from .models import (
    BallModel,
    CertifyRequest,
    DoublingRequest,
    ErmakoffRequest,
    FunctionModel,
    IndicesRequest,
    NormRequest,
    PoincareRequest,
    RearrangeRequest,
    TableResponse,
)
from .poincare import (
    PoincareSpec,
    default_ball_sweep,
    estimate_poincare_constant,
)
from .rearrangement import decreasing_rearrangement, distribution, localized_rearrangement
from .rispaces import local_norm, norm, parse_ri_spec
from .space import Ball, MetricMeasureSpace, canonical_radii, doubling_sweep

__all__ = [
    "build_space",
    "build_function",
    "run_norm",
    "run_rearrange",
    "run_indices",
    "run_ermakoff",
    "run_doubling",
    "run_poincare",
    "run_certify",
]


def build_space(model) -> MetricMeasureSpace:
    if model.kind == "line_grid":
        return MetricMeasureSpace.line_grid(model.start, model.stop, model.count, model.weight)
    return MetricMeasureSpace(
        np.asarray(model.dist, dtype=float), np.asarray(model.weight, dtype=float)
    )


def _ball(model: BallModel | None, space: MetricMeasureSpace) -> Ball | None:
    if model is None:
        return None
    return Ball(model.center, model.radius, model.closed)


def build_function(
    space: MetricMeasureSpace, model: FunctionModel, rng: np.random.Generator
) -> np.ndarray:
    if model.kind == "coordinate":
        if space.coords is None:
            raise ValueError("coordinate functions need a line-grid space")
        return np.asarray(space.coords, dtype=float)
    if model.kind == "distance":
        if not 0 <= model.origin < space.n:
            raise IndexError(f"origin {model.origin} out of range")
        return space.dist[model.origin].copy()
    if model.kind == "values":
        if model.values is None:
            raise ValueError("function kind 'values' needs a values list")
        vals = np.asarray(model.values, dtype=float)
        if vals.size != space.n:
            raise ValueError("values list must match the point count")
        return vals
    if model.kind == "indicator":
        if model.ball is None:
            raise ValueError("function kind 'indicator' needs a ball")
        from .space import ball_members

        out = np.zeros(space.n)
        out[ball_members(space, _ball(model.ball, space))] = 1.0
        return out
    # random_lipschitz
    graph = neighbor_graph(space)
    from .poincare import _lipschitz_from_seed

    return _lipschitz_from_seed(graph, rng, float(np.max(space.dist)))


def run_norm(req: NormRequest) -> TableResponse:
    space = build_space(req.space)
    rng = np.random.default_rng(req.seed)
    f = build_function(space, req.function, rng)
    ball = _ball(req.ball, space)
    rows = []
    for spec_text in req.specs:
        spec = parse_ri_spec(spec_text)
        global_norm = norm(spec, decreasing_rearrangement(space, f))
        if ball is not None:
            rows.append([spec_text, "local", ball.center, ball.radius,
                         local_norm(space, f, ball, spec)])
        rows.append([spec_text, "global", -1, 0.0, global_norm])
    rows.sort(key=lambda r: (r[0], r[1]))
    return TableResponse(
        columns=["spec", "scope", "center", "radius", "value"],
        rows=rows,
        summary={"seed": req.seed, "points": space.n, "total_mass": space.total_mass},
    )


def run_rearrange(req: RearrangeRequest) -> TableResponse:
    space = build_space(req.space)
    rng = np.random.default_rng(req.seed)
    f = build_function(space, req.function, rng)
    ball = _ball(req.ball, space)
    rows = []
    dist_fn = distribution(space, f)
    for t, v in dist_fn.to_rows():
        rows.append(["distribution", t, v])
    u = (
        localized_rearrangement(space, f, ball)
        if ball is not None
        else decreasing_rearrangement(space, f)
    )
    for t, v in u.to_rows():
        rows.append(["rearrangement", t, v])
    return TableResponse(
        columns=["kind", "breakpoint", "value"],
        rows=rows,
        summary={
            "seed": req.seed,
            "points": space.n,
            "rearrangement_domain_end": u.domain_end,
            "localized": ball is not None,
        },
    )


def run_indices(req: IndicesRequest) -> TableResponse:
    rows = []
    summary: dict = {"resolution": req.resolution, "specs": {}}
    for spec_text in req.specs:
        spec = parse_ri_spec(spec_text)
        est = zippin_indices(spec.fundamental, resolution=req.resolution)
        for s, ratio in zip(est.s_lower, est.ratio_lower):
            rows.append([spec_text, float(s), float(ratio)])
        for s, ratio in zip(est.s_upper, est.ratio_upper):
            rows.append([spec_text, float(s), float(ratio)])
        summary["specs"][spec_text] = {
            "lower": est.lower,
            "upper": est.upper,
            "metadata": est.metadata,
        }
    return TableResponse(columns=["spec", "s", "log_ratio"], rows=rows, summary=summary)


def run_ermakoff(req: ErmakoffRequest) -> TableResponse:
    x_spec = parse_ri_spec(req.x) if req.x else None
    y_spec = parse_ri_spec(req.y) if req.y else None
    gain = parse_gain(req.gain, x_spec, y_spec)
    report = ermakoff_test(gain, k_max=req.k_max)
    rows = [[float(t), float(r)] for t, r in report.trace]
    return TableResponse(
        columns=["t", "ratio"],
        rows=rows,
        summary={
            "gain": gain.name,
            "verdict": report.verdict,
            "estimated_limit": report.estimated_limit,
            "metadata": report.metadata,
        },
    )


def run_doubling(req: DoublingRequest) -> TableResponse:
    space = build_space(req.space)
    radii = canonical_radii(space)
    rows = [list(r) for r in doubling_sweep(space, radii)]
    constant = max(r[4] for r in rows)
    if req.max_rows and len(rows) > req.max_rows:
        rows.sort(key=lambda r: -r[4])
        rows = rows[: req.max_rows]
        rows.sort(key=lambda r: (r[0], r[1]))
    return TableResponse(
        columns=["center", "radius", "mu_ball", "mu_double", "ratio"],
        rows=rows,
        summary={
            "doubling_constant": constant,
            "radii_count": int(radii.size),
            "points": space.n,
        },
    )


def _poincare_setup(req) -> tuple:
    space = build_space(req.space)
    graph = neighbor_graph(space, req.connect_radius)
    x_spec = parse_ri_spec(req.x)
    y_spec = parse_ri_spec(req.y)
    return space, graph, x_spec, y_spec


def run_poincare(req: PoincareRequest) -> TableResponse:
    space, graph, x_spec, y_spec = _poincare_setup(req)
    spec = PoincareSpec(x=x_spec, y=y_spec, sigma=req.sigma)
    rng = np.random.default_rng(req.seed)
    balls = default_ball_sweep(space, req.ball_count, rng)
    est = estimate_poincare_constant(
        space, graph, spec, req.families, balls, rng,
        zero_boundary=req.zero_boundary, safety_factor=req.safety,
    )
    rows = [[tag, center, radius, ratio] for tag, center, radius, ratio in est.rows]
    return TableResponse(
        columns=["family_member", "center", "radius", "ratio"],
        rows=rows,
        summary={
            "seed": req.seed,
            "sigma": req.sigma,
            "families": list(req.families),
            "ball_count": len(balls),
            "estimate": est.supremum,
            "safety_factor": est.safety_factor,
            "constant_hypothesis": est.constant_hypothesis,
        },
    )


def run_certify(req: CertifyRequest) -> TableResponse:
    space, graph, x_spec, y_spec = _poincare_setup(req)
    gain = parse_gain(req.gain, x_spec, y_spec)
    rng = np.random.default_rng(req.seed)

    if req.c is not None:
        c_hyp = req.c
        estimate = None
    else:
        spec = PoincareSpec(x=x_spec, y=y_spec, sigma=req.sigma)
        balls = default_ball_sweep(space, req.ball_count, rng)
        est = estimate_poincare_constant(
            space, graph, spec, req.families, balls, rng, safety_factor=req.safety
        )
        c_hyp = est.constant_hypothesis
        estimate = est.supremum
        if c_hyp <= 0:
            raise ValueError("empirical Poincare estimate vanished; supply c explicitly")

    cfg = cert.CertificateConfig.build(gain, c_hyp, j_max=req.j_max + 1)
    if req.ball is not None:
        balls = [_ball(req.ball, space)]
    else:
        diam = float(np.max(space.dist))
        centers = sorted(
            rng.choice(space.n, size=min(space.n, req.ball_count), replace=False).tolist()
        )
        balls = [Ball(int(ctr), diam * q) for ctr in centers for q in (0.15, 0.3)]

    rows = []
    verdicts: dict[str, int] = {}
    sup_p1 = 0.0
    for ball in balls:
        report = cert.certificate_run(space, x_spec, y_spec, cfg, ball)
        verdicts[report.verdict] = verdicts.get(report.verdict, 0) + 1
        sup_p1 = max(sup_p1, report.p1)
        for j, r_j, mu_bj, p_j, slack in report.rows:
            rows.append([ball.center, ball.radius, j, r_j, mu_bj, p_j, slack])
    verdict = (
        "doubling-consistent"
        if set(verdicts) == {"doubling-consistent"}
        else ("blow-up-detected" if "blow-up-detected" in verdicts else "cap-reached")
    )
    return TableResponse(
        columns=["center", "r", "j", "r_j", "mu_Bj", "P_j", "key_slack"],
        rows=rows,
        summary={
            "seed": req.seed,
            "gain": gain.name,
            "c_hypothesis": c_hyp,
            "empirical_estimate": estimate,
            "safety_factor": req.safety,
            "c1": cfg.c1,
            "big_c": cfg.big_c,
            "d": cfg.d,
            "threshold_e2d": math.exp(2.0) * cfg.d,
            "j_max": req.j_max,
            "sup_p1": sup_p1,
            "verdicts": verdicts,
            "verdict": verdict,
            "ball_count": len(balls),
        },
    )
