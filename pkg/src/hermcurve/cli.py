"""Command line entry point: ``hermcurve verify`` and ``hermcurve dualform``.

Exit codes: 0 every selected check passed, 1 some check failed or was
inconclusive, 2 usage error or inapplicable family/q, 3 enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

from . import linalg
from .embed import (
    AtLeast,
    ChartFailure,
    DualFormError,
    ParametrizedCurve,
    containment_check_symbolic,
    coordinate_series,
    dual_form_from_curve,
    evaluate_map,
    hyperplane_valuation,
    osculating_hyperplane,
    tangent_direction,
)
from .families import (
    BOUNDARY_PLACES,
    FAMILY_IDS,
    FamilyError,
    FamilyInstance,
    construct_family,
    kappa_transform,
    maximality_verdict,
    splitting_check,
    verify_family_identities,
)
from .gf import CapExceeded, FieldElem
from .hermitian import (
    HermitianForm,
    ProjPoint,
    _common,
    diagonalize_congruence,
    find_projection_center,
    project_from_center,
    secant_violations,
    tangent_hyperplane,
    verify_projection_center,
)
from .plane_model import (
    CurvePoint,
    SingularPoint,
    affine_points,
    branch_expansion,
    frobenius_point,
    is_rational,
    is_smooth_at,
    nonrational_sample,
)
from .wronskian import canonical_series, first_order_sums, lemma42_check, lemma45_valuation

SCHEMA_VERSION = 1
MAX_RETRIES = 3

log = logging.getLogger("hermcurve")

CHECK_ANCHORS = {
    "identities": "displayed product identities of the family",
    "containment": "image lies on the Hermitian surface (exact reduction mod F)",
    "maximality": "rational places equal 1 + q^2 + 2qg",
    "lemma41": "tangent hyperplane cuts qP + Fr(P)",
    "lemma42": "Wronskian column reduction identity",
    "lemma45": "v_P(sum f_i D^q f_i^q) is 1 exactly at rational points",
    "osculating": "osculating hyperplane equals tangent hyperplane of the Hermitian surface",
    "rationality": "pi(P) is rational exactly when P is",
    "dualform": "dual coordinates recover a Hermitian matrix of full rank",
    "projection": "projection center off chords and tangents, rational secants",
    "splitting": "surface intersection splits into the family's components",
    "equivalence": "components are projectively equivalent",
    "kappa": "kappa carries the degree q+1 surface to the canonical one",
}
CHECK_ORDER = list(CHECK_ANCHORS)


@dataclass
class CheckResult:
    name: str
    status: str
    payload: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "anchor": CHECK_ANCHORS[self.name], "status": self.status, "payload": self.payload}


def _fe(v: int | FieldElem, ctx=None) -> str:
    return repr(v if isinstance(v, FieldElem) else FieldElem(ctx, v))


def _val_str(v) -> int | str:
    return str(v) if isinstance(v, AtLeast) else v


class Session:
    """One family instance plus its point samples and cached branch data."""

    def __init__(self, inst: FamilyInstance, sample: int, seed: int, truncation: int | None):
        self.inst = inst
        self.q = inst.q
        self.sample = sample
        self.seed = seed
        self.T0 = truncation or 2 * inst.q + 4
        self.T_used = self.T0
        self.form = inst.form
        cg = diagonalize_congruence(self.form)
        self.A_inv = linalg.inverse(self.form.ctx, cg.A)
        rational = [P for P in affine_points(inst.plane, 1) if is_smooth_at(inst.plane, P)]
        if len(rational) > sample:
            rational = sorted(random.Random(seed).sample(rational, sample), key=CurvePoint.key)
        self.rational = rational
        self.nonrational = sample_nonrational(inst.plane, sample, seed, inst.sample_ext)
        self._series: dict[tuple, tuple[int, list]] = {}

    @property
    def branches(self) -> list[CurvePoint]:
        return self.rational + self.nonrational

    def series(self, P: CurvePoint, T: int):
        key = (P.key(), T)
        if key not in self._series:
            b = branch_expansion(self.inst.plane, P, T)
            raw = coordinate_series(self.inst.pc, b)
            self._series[key] = (b, raw, canonical_series(raw, self.A_inv, self.form.ctx))
        return self._series[key]

    def retry(self, fn: Callable[[int], tuple[object, bool]]):
        """Run fn(T) doubling T until it reports resolved; (result, resolved, T)."""
        T = self.T0
        for attempt in range(MAX_RETRIES + 1):
            res, ok = fn(T)
            if ok:
                self.T_used = max(self.T_used, T)
                return res, True, T
            if attempt < MAX_RETRIES:
                T *= 2
        return res, False, T


def sample_nonrational(plane, n: int, seed: int, m: int) -> list[CurvePoint]:
    """n non-rational points, moving up one extension when GF(q^(2m)) runs out.

    A maximal curve is minimal over GF(q^4), so small cases can have no
    non-rational points there at all.
    """
    pts = nonrational_sample(plane, n, seed, m)
    if len(pts) < n:
        pts += nonrational_sample(plane, n - len(pts), seed, m + 1)
    return pts


def _image_from_series(series) -> ProjPoint:
    return ProjPoint.make(series[0].ctx, [s.coeffs[0] for s in series])


# -- individual checks ---------------------------------------------------------------

def check_identities(s: Session) -> CheckResult:
    items = verify_family_identities(s.inst.id, s.q)
    groups: dict[str, bool] = {}
    for it in items:
        groups[it.group] = groups.get(it.group, False) or it.holds
    ok = all(groups.values())
    return CheckResult("identities", "pass" if ok else "fail", {
        "items": [{"name": it.name, "group": it.group, "holds": it.holds,
                   **({} if it.holds else {"residual": it.residual[:200]})} for it in items],
    })


def check_containment(s: Session) -> CheckResult:
    ok = containment_check_symbolic(s.inst.pc, s.form)
    return CheckResult("containment", "pass" if ok else "fail", {"form": s.form.render(), "residue_zero": ok})


def check_maximality(s: Session) -> CheckResult:
    v = maximality_verdict(s.inst.id, s.q, s.inst.i)
    return CheckResult("maximality", "pass" if v.is_maximal else "fail", {
        "affine_count": v.affine_count, "infinite_places": v.infinite_places, "total": v.total,
        "hasse_weil_bound": v.hasse_weil_bound, "genus": v.genus_used,
        "certified": s.inst.key in BOUNDARY_PLACES,
    })


def check_lemma45(s: Session) -> CheckResult:
    q = s.q
    agree = disagree = unresolved = high = 0
    cross_bad = 0
    rows = []
    for P in s.branches:
        rat = is_rational(P, q)

        def run(T):
            b, raw, g = s.series(P, T)
            v = lemma45_valuation(s.inst.pc, b, series=g)
            return (v, g), not isinstance(v, AtLeast) or v.bound >= 2

        (v, g), ok, T = s.retry(run)
        fo = first_order_sums(g, q)
        if isinstance(v, AtLeast):
            if v.bound >= 2:
                high += 1
            else:
                unresolved += 1
        elif v >= 2:
            high += 1
        elif (v == 1) == rat:
            agree += 1
        else:
            disagree += 1
        if fo.s_q1 != 0 or (rat and (fo.s_1q != 0 or fo.n1 == 0)) or (not rat and fo.s_1q == 0):
            cross_bad += 1
        rows.append({"point": repr(P), "rational": rat, "v": _val_str(v)})
    status = "fail" if disagree or high or cross_bad else ("inconclusive" if unresolved else "pass")
    return CheckResult("lemma45", status, {
        "rational_sampled": len(s.rational), "nonrational_sampled": len(s.nonrational),
        "agree": agree, "disagree": disagree, "valuation_ge_2": high, "unresolved": unresolved,
        "first_order_violations": cross_bad, "branches": rows,
    })


def check_lemma41(s: Session) -> CheckResult:
    q = s.q
    good = bad = unresolved = 0
    rows = []
    for P in s.branches:
        rat = is_rational(P, q)

        def run(T):
            b, raw, g = s.series(P, T)
            img = _image_from_series(raw)
            H = tangent_hyperplane(s.form, img)
            v = hyperplane_valuation(s.inst.pc, b, H, raw)
            return (v, H), not isinstance(v, AtLeast)

        (v, H), ok, T = s.retry(run)
        FP = frobenius_point(P, q)
        if rat:
            fr_on = True
        else:
            try:
                fr_img = evaluate_map(s.inst.pc, FP)
            except ChartFailure:
                fr_img = _image_from_series(s.series(FP, s.T0)[1])
            fr_on = H.contains(fr_img)
        want = q + 1 if rat else q
        if not ok:
            unresolved += 1
        elif v == want and fr_on:
            good += 1
        else:
            bad += 1
        rows.append({"point": repr(P), "rational": rat, "v": _val_str(v), "fr_on_H": fr_on})
    status = "fail" if bad else ("inconclusive" if unresolved else "pass")
    return CheckResult("lemma41", status, {"good": good, "bad": bad, "unresolved": unresolved, "branches": rows})


def check_lemma42(s: Session) -> CheckResult:
    passed = failed = inconclusive = 0
    rows = []
    for P in s.branches:
        def run(T):
            b, raw, g = s.series(P, T)
            r = lemma42_check(s.inst.pc, b, series=g)
            return r, r.status != "inconclusive"

        r, ok, T = s.retry(run)
        if r.status == "pass":
            passed += 1
        elif r.status == "fail":
            failed += 1
        else:
            inconclusive += 1
        rows.append({"point": repr(P), "lhs": _val_str(r.lhs), "rhs": _val_str(r.rhs) if r.rhs is not None else None,
                     "status": r.status})
    status = "fail" if failed else ("inconclusive" if inconclusive else "pass")
    payload = {"pass": passed, "fail": failed, "inconclusive": inconclusive, "branches": rows}
    if s.inst.pc.M - 1 >= s.q:
        payload["note"] = "reduced Hasse orders 0..M-1 reach q; column reduction does not apply"
    return CheckResult("lemma42", status, payload)


def check_osculating(s: Session) -> CheckResult:
    equal = differ = degenerate = 0
    rows = []
    for P in s.branches:
        b, raw, g = s.series(P, max(s.T0, s.q + 2))
        img = _image_from_series(raw)
        H = tangent_hyperplane(s.form, img)
        try:
            O = osculating_hyperplane(s.inst.pc, b, raw)
        except DualFormError as exc:
            degenerate += 1
            rows.append({"point": repr(P), "kernel_dimension": exc.dimension})
            continue
        K = _common(O.ctx, H.ctx)
        same = O.embed(K) == H.embed(K)
        equal += same
        differ += not same
        rows.append({"point": repr(P), "equal": same})
    status = "fail" if differ else ("inconclusive" if degenerate else "pass")
    return CheckResult("osculating", status, {"equal": equal, "differ": differ, "degenerate": degenerate,
                                              "branches": rows})


def _fixed(img: ProjPoint, q: int) -> bool:
    return img.frobenius(q * q) == img


def check_rationality(s: Session) -> CheckResult:
    pc = s.inst.raw_pc
    q = s.q
    exceptions = checked = charts = 0
    for P in affine_points(s.inst.plane, 1):
        try:
            img = evaluate_map(pc, P)
        except ChartFailure:
            charts += 1
            continue
        checked += 1
        exceptions += not _fixed(img, q)
    ext = sample_nonrational(s.inst.plane, max(s.sample, 20), s.seed, 2)
    for P in ext:
        try:
            img = evaluate_map(pc, P)
        except ChartFailure:
            charts += 1
            continue
        checked += 1
        exceptions += _fixed(img, q) != is_rational(P, q)
    return CheckResult("rationality", "pass" if exceptions == 0 else "fail", {
        "checked": checked, "exceptions": exceptions, "chart_failures_skipped": charts,
        "coordinates": "raw",
    })


def run_dual(inst: FamilyInstance) -> dict:
    """Solve for the dual form of the instance's coordinates and canonicalize it."""
    pc = inst.pc
    # ex52's kappa coordinates live over GF(q^6); solve on the raw ones instead
    if pc.ctx is not inst.ctx:
        pc = inst.raw_pc
    out: dict = {"coordinates": "raw" if pc is inst.raw_pc else "scaled"}
    try:
        sol = dual_form_from_curve(pc)
    except DualFormError as exc:
        out.update(status="fail", dimension=exc.dimension,
                   family_form_contains_curve=containment_check_symbolic(pc, inst.form)
                   if pc is inst.pc else None)
        return out
    ctx = inst.ctx
    out.update(dimension=sol.dimension, points_used=sol.points_used, hermitian=sol.hermitian, rank=sol.rank,
               C=[" ".join(_fe(v, ctx) for v in row) for row in sol.C], form=sol.form.render())
    ok = sol.hermitian and sol.rank == pc.M + 1
    if sol.hermitian:
        cg = diagonalize_congruence(sol.form)
        out["A"] = [" ".join(_fe(v, ctx) for v in row) for row in cg.A]
        out["diagonalizes_to_identity"] = cg.D == linalg.identity(pc.M + 1)
        ok = ok and out["diagonalizes_to_identity"]
        A_inv = linalg.inverse(ctx, cg.A)
        coords = []
        for row in A_inv:
            acc = pc.coords[0] * 0
            for v, f in zip(row, pc.coords):
                if v:
                    acc = acc + f * FieldElem(ctx, v)
            coords.append(acc)
        canon = containment_check_symbolic(ParametrizedCurve(pc.plane, coords), HermitianForm.canonical(ctx, pc.M, inst.q))
        out["canonical_containment"] = canon
        out["proportional_to_family_form"] = _proportional(sol.form, inst.form)
        ok = ok and canon
    out["status"] = "pass" if ok else "fail"
    return out


def _proportional(a: HermitianForm, b: HermitianForm) -> bool:
    flat_a = [v for row in a.H for v in row]
    flat_b = [v for row in b.H for v in row]
    return linalg.rank(a.ctx, [flat_a, flat_b]) == 1


def check_dualform(s: Session) -> CheckResult:
    d = run_dual(s.inst)
    return CheckResult("dualform", d.pop("status"), d)


def check_projection(s: Session) -> CheckResult:
    inst, q = s.inst, s.q
    if inst.pc.ctx is not inst.ctx:
        return CheckResult("projection", "inconclusive", {"note": "coordinates are not defined over GF(q^2)"})
    imgs, tangents, flagged = [], [], 0
    for P in affine_points(inst.plane, 1):
        if not is_smooth_at(inst.plane, P):
            continue
        b, raw, g = s.series(P, s.T0)
        img = _image_from_series(raw)
        imgs.append(img)
        d = tangent_direction(inst.pc, b)
        if d is None:
            flagged += 1
        else:
            tangents.append((img, d))
    imgs = sorted(set(imgs), key=lambda P: P.coords)
    found = find_projection_center(s.form, imgs, tangents)
    ver = verify_projection_center(s.form, found.center, imgs, tangents)
    proj = project_from_center(s.form, found.center, imgs)
    distinct = len(set(proj.images)) == len(imgs)
    non_imgs = [_image_from_series(s.series(P, s.T0)[1]) for P in s.nonrational]
    secants = secant_violations(q, imgs, non_imgs)
    ok = ver["ok"] and distinct and secants == 0
    return CheckResult("projection", "pass" if ok else "fail", {
        "center": repr(found.center), "scanned": found.candidates_scanned, "verification": ver,
        "rational_images": len(imgs), "projected_distinct": distinct, "tangent_lines": len(tangents),
        "flagged_points": flagged, "secant_violations": secants, "secant_pairs": len(imgs) * len(non_imgs),
    })


def check_splitting(s: Session) -> CheckResult:
    r = splitting_check(s.inst.id, s.q)
    ok = r.images_on_surfaces and r.ext_images_on_surfaces and r.covered
    s._split = r
    return CheckResult("splitting", "pass" if ok else "fail", {
        "intersection_points": r.intersection_size, "component_points": {str(k): v for k, v in r.component_sizes.items()},
        "images_on_surfaces": r.images_on_surfaces, "ext_images_on_surfaces": r.ext_images_on_surfaces,
        "uncovered": r.uncovered, "shared_points": r.overlaps,
    })


def check_equivalence(s: Session) -> CheckResult:
    r = getattr(s, "_split", None) or splitting_check(s.inst.id, s.q)
    ctx = s.inst.ctx
    entries, ok = {}, True
    for i, e in r.equivalences.items():
        e = dict(e)
        if e.get("matrix") is not None:
            e["matrix"] = [" ".join(_fe(v, ctx) for v in row) for row in e["matrix"]]
            ok = ok and e["maps_to"] is not None
        else:
            ok = ok and e.get("equal_counts", False)
        if e.get("diagonal_found") is not None:
            e["diagonal_found"] = [_fe(v, ctx) for v in e["diagonal_found"]]
        entries[str(i)] = e
    return CheckResult("equivalence", "pass" if ok else "fail", {"components": entries})


def check_kappa(s: Session) -> CheckResult:
    if s.inst.id != "ex52":
        return CheckResult("kappa", "inconclusive", {"note": "only defined for ex52"})
    k = kappa_transform(s.q)
    return CheckResult("kappa", "pass" if k.verified and k.identities_hold and k.M3_det_nonzero else "fail", {
        "a": repr(k.a), "mu": repr(k.mu), "mu_in_GFq": k.mu_in_GFq, "identities_hold": k.identities_hold,
        "M3_nonsingular": k.M3_det_nonzero, "lambda_relation": k.lambda_norm_relation,
        "pulled_back_scalar": repr(k.pulled_back_scalar) if k.pulled_back_scalar else None,
    })


CHECKS: dict[str, Callable[[Session], CheckResult]] = {
    "identities": check_identities,
    "containment": check_containment,
    "maximality": check_maximality,
    "lemma41": check_lemma41,
    "lemma42": check_lemma42,
    "lemma45": check_lemma45,
    "osculating": check_osculating,
    "rationality": check_rationality,
    "dualform": check_dualform,
    "projection": check_projection,
    "splitting": check_splitting,
    "equivalence": check_equivalence,
    "kappa": check_kappa,
}


def default_checks(fid: str) -> list[str]:
    names = [n for n in CHECK_ORDER if n != "kappa"]
    if fid == "ex52":
        names.append("kappa")
    return names


def run_checks(inst: FamilyInstance, names: list[str], sample: int = 20, seed: int = 0,
               truncation: int | None = None, timings: bool = False) -> dict:
    s = Session(inst, sample, seed, truncation)
    results, times = [], {}
    for n in names:
        t0 = time.perf_counter()
        try:
            r = CHECKS[n](s)
        except SingularPoint as exc:  # pragma: no cover - samples are filtered for smoothness
            r = CheckResult(n, "inconclusive", {"error": str(exc)})
        times[n] = round(time.perf_counter() - t0, 3)
        log.info("%s: %s", n, r.status)
        results.append(r.as_dict())
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "instance": {
            "family": inst.id, "q": inst.q, "i": inst.i, "field_modulus": inst.ctx.spec(),
            "coordinate_field_modulus": inst.pc.ctx.spec(),
        },
        "seed": seed,
        "sample": sample,
        "truncation": {"initial": s.T0, "max_used": s.T_used},
        "checks": results,
        "summary": {st: sum(r["status"] == st for r in results) for st in ("pass", "fail", "inconclusive")},
    }
    if timings:
        report["timings"] = times
    return report


# -- argument handling -----------------------------------------------------------------

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hermcurve", description="Verify maximal curves embedded in Hermitian surfaces.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("verify", "run the check suite on a family instance"),
                        ("dualform", "recover and canonicalize the Hermitian form of an instance")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--family", required=True, choices=FAMILY_IDS)
        sp.add_argument("--q", required=True, type=int)
        sp.add_argument("--i", type=int, default=None, help="component index (default: first valid)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", default=None, help="write the report here instead of stdout")
        if name == "verify":
            sp.add_argument("--checks", default="all", help="comma separated list or 'all'")
            sp.add_argument("--sample", type=int, default=20)
            sp.add_argument("--truncation", type=int, default=None)
            sp.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    return p


def _parse_checks(text: str, fid: str) -> list[str]:
    if text == "all":
        return default_checks(fid)
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in CHECKS]
    if bad or not names:
        raise UsageError(f"unknown checks: {', '.join(bad) or '(none given)'}; choose from {', '.join(CHECK_ORDER)}")
    return names


def render_text(report: dict) -> str:
    inst = report["instance"]
    lines = [f"{report['command']} {inst['family']} q={inst['q']} i={inst['i']} (GF(q^2) modulus {inst['field_modulus']})"]
    if "checks" in report:
        for c in report["checks"]:
            brief = {k: v for k, v in c["payload"].items() if not isinstance(v, (list, dict))}
            lines.append(f"  {c['status']:<12} {c['name']:<12} {json.dumps(brief, sort_keys=True)}")
        lines.append("  summary " + json.dumps(report["summary"], sort_keys=True))
    else:
        for k, v in report["result"].items():
            if isinstance(v, list):
                lines.append(f"  {k}:")
                lines.extend(f"    {row}" for row in v)
            else:
                lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=False) + "\n" if fmt == "json" else render_text(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        inst = construct_family(args.family, args.q, args.i)
        if args.command == "verify":
            names = _parse_checks(args.checks, args.family)
            if args.sample < 1:
                raise UsageError("--sample must be positive")
            if args.truncation is not None and args.truncation < 2:
                raise UsageError("--truncation must be at least 2")
            report = run_checks(inst, names, args.sample, args.seed, args.truncation, args.timings)
            code = 0 if report["summary"]["pass"] == len(names) else 1
        else:
            result = run_dual(inst)
            report = {
                "schema_version": SCHEMA_VERSION,
                "command": "dualform",
                "instance": {"family": inst.id, "q": inst.q, "i": inst.i, "field_modulus": inst.ctx.spec()},
                "result": result,
            }
            code = 0 if result["status"] == "pass" else 1
    except (FamilyError, UsageError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    _emit(report, args.format, args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
