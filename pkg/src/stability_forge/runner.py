"""Job files in, deterministic stability reports out.

A job names a ring, homogeneous generators, a 1-psg weight and a set of
tasks.  The report is a pure function of the job: keys are sorted, every
rational is a ``"p/q"`` string and nothing depends on the order of tasks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, List, Optional, Sequence

import jsonschema

from .algebra import OnePSG, PolynomialSyntaxError, format_rational, parse_polynomial, parse_rational
from .chow import (
    NonGenericCenterError,
    CenterOnCurveError,
    bidegree_curve,
    double_chow_value,
    double_chow_verdict,
    projection_node_count,
    stability_constants,
)
from .groebner import Budget, BudgetExceeded, Ideal, buchberger, is_multiplicity_free
from .hilbert import (
    DEFAULT_M_CAP,
    RegularityNotReached,
    chow_slope_via_hilbert,
    cm_weight,
    futaki_from_coefficients,
    hilbert_polynomial,
    weight_polynomial,
)
from .hypersurface import (
    DivergentIntegralError,
    HypersurfaceProblem,
    hypersurface_slope,
    lu_integral,
    lu_slope,
    psi_profile,
    refined_futaki,
)

__all__ = [
    "TASKS",
    "JobSpec",
    "JobError",
    "InputError",
    "validate",
    "run",
    "dumps",
    "load_schema",
]

TASKS = ("hilbert", "weights", "futaki", "lu", "chow", "constants", "report")
EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class JobError(Exception):
    """Structured failure: which module, what went wrong, and the offending input."""

    exit_code = EXIT_INPUT

    def __init__(self, module: str, message: str, fragment: Any = None):
        super().__init__(message)
        self.module = module
        self.message = message
        self.fragment = fragment

    def to_json(self) -> Dict[str, Any]:
        return {"error": {"module": self.module, "message": self.message,
                          "fragment": self.fragment, "exit_code": self.exit_code}}


class InputError(JobError):
    exit_code = EXIT_INPUT


class BudgetError(JobError):
    exit_code = EXIT_BUDGET


def load_schema(name: str) -> Dict[str, Any]:
    text = resources.files("stability_forge").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@dataclass
class JobSpec:
    variables: int
    generators: List[str]
    weight: List[int]
    tasks: List[str]
    options: Dict[str, Any] = field(default_factory=dict)
    name: Optional[str] = None
    description: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "JobSpec":
        try:
            jsonschema.validate(data, load_schema("jobspec"))
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise InputError("cli-runner", f"job does not match schema at {where}: {exc.message}",
                             exc.instance) from None
        return cls(
            variables=data["variables"],
            generators=list(data["generators"]),
            weight=list(data["weight"]),
            tasks=list(data["tasks"]),
            options=dict(data.get("options", {})),
            name=data.get("name"),
            description=data.get("description"),
        )

    @classmethod
    def from_json(cls, text: str) -> "JobSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("cli-runner", f"invalid JSON: {exc.msg}", exc.pos) from None
        return cls.from_dict(data)

    def with_options(self, **overrides) -> "JobSpec":
        opts = dict(self.options)
        opts.update({k: v for k, v in overrides.items() if v is not None})
        return JobSpec(self.variables, self.generators, self.weight, self.tasks, opts,
                       self.name, self.description)


def _diag(level, module, message, fragment=None):
    return {"level": level, "module": module, "message": message, "fragment": fragment}


def _vec(v: Sequence) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def validate(job: JobSpec) -> List[Dict[str, Any]]:
    """Cheap checks before any heavy computation.  Never raises."""
    diags = []
    try:
        if not job.tasks:
            diags.append(_diag("error", "cli-runner", "no tasks requested", job.tasks))
        for t in job.tasks:
            if t not in TASKS:
                diags.append(_diag("error", "cli-runner", f"unknown task {t!r}", t))
        if len(job.weight) != job.variables:
            diags.append(_diag("error", "exact-algebra",
                               f"weight has {len(job.weight)} entries, ring has "
                               f"{job.variables} variables", job.weight))
        polys = []
        for i, text in enumerate(job.generators):
            try:
                p = parse_polynomial(text, job.variables)
            except PolynomialSyntaxError as exc:
                diags.append(_diag("error", "exact-algebra",
                                   f"generator at index {i}: {exc}", text))
                continue
            except ValueError as exc:
                diags.append(_diag("error", "exact-algebra", f"generator at index {i}: {exc}", text))
                continue
            if not p.is_homogeneous():
                diags.append(_diag("error", "groebner-engine",
                                   f"non-homogeneous generator at index {i}", text))
            polys.append(p)
        nonzero = [p for p in polys if p]
        if not nonzero and len(polys) == len(job.generators):
            diags.append(_diag("warning", "groebner-engine",
                               "trivial ideal: no nonzero generators (the whole projective space)",
                               job.generators))
        if any(p and p.is_constant() for p in polys):
            diags.append(_diag("error", "groebner-engine",
                               "trivial ideal: a nonzero constant generates the unit ideal",
                               job.generators))
        if len(job.weight) == job.variables and job.weight:
            w = OnePSG(job.weight)
            if not w.is_traceless:
                v, scale, shift = w.normalized()
                if scale == 1:
                    msg = (f"non-traceless weight {_vec(w)}: shifted by "
                           f"{format_rational(-shift)} to {_vec(v)}")
                else:
                    msg = (f"non-traceless weight {_vec(w)}: normalized by "
                           f"{format_rational(-shift)} shift is non-integral: rescaled by "
                           f"{scale} to {_vec(v)}; slope outputs are divided back by {scale}")
                diags.append(_diag("warning", "cli-runner", msg, job.weight))
        if "fd_slope" in job.options:
            try:
                parse_rational(str(job.options["fd_slope"]))
            except ValueError:
                diags.append(_diag("error", "cli-runner", "fd_slope is not a rational literal",
                                   job.options["fd_slope"]))
    except Exception as exc:  # validation must never throw
        diags.append(_diag("error", "cli-runner", f"validation failed: {exc}", None))
    return diags


def _q(x) -> str:
    return format_rational(Fraction(x))


def run(job: JobSpec) -> Dict[str, Any]:
    """Execute the requested tasks; raises :class:`JobError` subclasses on failure."""
    diagnostics = validate(job)
    errors = [d for d in diagnostics if d["level"] == "error"]
    if errors:
        first = errors[0]
        raise InputError(first["module"], first["message"], first["fragment"])
    try:
        return _run(job, diagnostics)
    except BudgetExceeded as exc:
        raise BudgetError("groebner-engine", str(exc), job.generators) from None
    except RegularityNotReached as exc:
        raise BudgetError("hilbert-weights", str(exc), job.generators) from None


def _budget(job: JobSpec) -> Budget:
    base = Budget.from_env()
    return Budget(
        max_pairs=int(job.options.get("max_pairs", base.max_pairs)),
        max_terms=int(job.options.get("max_terms", base.max_terms)),
    )


def _run(job: JobSpec, diagnostics: List[Dict[str, Any]]) -> Dict[str, Any]:
    tasks = set(job.tasks)
    everything = "report" in tasks
    want = {t: everything or t in tasks for t in TASKS}
    m_cap = int(job.options.get("m_cap", DEFAULT_M_CAP))
    budget = _budget(job)
    fd_slope = parse_rational(str(job.options.get("fd_slope", "0")))

    polys = [parse_polynomial(t, job.variables) for t in job.generators]
    ideal = Ideal(polys, job.variables)
    w_raw = OnePSG(job.weight)
    w, scale, shift = w_raw.normalized()

    report: Dict[str, Any] = {
        "job": {
            "name": job.name,
            "variables": job.variables,
            "generators": [str(p) for p in ideal.generators],
            "weight": list(w_raw.weights),
            "normalized_weight": list(w.weights),
            "scale": scale,
            "tasks": sorted(tasks),
        },
        "diagnostics": diagnostics,
    }

    hd = hilbert_polynomial(ideal, m_cap, budget)
    n, d, N = hd.n, hd.d, job.variables - 1

    if want["hilbert"]:
        section = {
            "P": str(hd.P),
            "claimed_from": hd.P.claimed_from,
            "n": n,
            "d": d,
            "b_top": _q(hd.b_top),
            "b_sub": _q(hd.b_sub),
            "mu": _q(hd.mu),
            "groebner_basis": [str(g) for g in buchberger(ideal, budget=budget).elements],
        }
        if n == 1:
            section["arithmetic_genus"] = _q(hd.arithmetic_genus)
        report["hilbert"] = section

    need_weights = any(want[t] for t in ("weights", "futaki", "chow"))
    wp = weight_polynomial(ideal, w, m_cap, budget, hilbert=hd) if need_weights else None

    if want["weights"]:
        report["weightpoly"] = {
            "W": str(_divided(wp.W, scale)),
            "claimed_from": wp.W.claimed_from,
            "a_top": _q(wp.a_top / scale),
            "a_sub": _q(wp.a_sub / scale),
        }

    F1 = None
    if want["futaki"]:
        F1 = futaki_from_coefficients(hd, wp) / scale
        report["F1"] = _q(F1)

    if want["lu"]:
        if len(ideal.generators) == 1 and job.variables >= 3:
            report["hypersurface"] = _hypersurface_section(
                ideal, w, scale, hd, fd_slope, budget, diagnostics, F1)
        elif "lu" in tasks:
            raise InputError("hypersurface-slope",
                             "task 'lu' needs exactly one generator in at least three variables",
                             job.generators)
        else:
            diagnostics.append(_diag("info", "hypersurface-slope",
                                     "not a hypersurface: Lu slope skipped", None))

    chow: Dict[str, Any] = {}
    chow_slope = None
    if want["chow"]:
        chow_slope = chow_slope_via_hilbert(wp, n) / scale
        chow["chow_slope"] = _q(chow_slope)
        if n == 1 and N == 3:
            g = job.options.get("genus")
            if g is None:
                g = hd.arithmetic_genus
                diagnostics.append(_diag(
                    "info", "chow-geometry",
                    "genus taken as the arithmetic genus 1 - P(0); equals the geometric "
                    "genus only for smooth curves", None))
            try:
                bd = bidegree_curve(d, int(g))
                chow["bidegree"] = {"d1": bd.d1, "d2": bd.d2}
            except ValueError as exc:
                diagnostics.append(_diag("warning", "chow-geometry", str(exc), g))
            center = job.options.get("center")
            if center is not None:
                chow["projection"] = _projection(ideal, center, d, m_cap, budget, diagnostics)
    if want["constants"] or want["chow"]:
        if 1 <= n < N:
            bundle = stability_constants(d, n, N, hd.mu)
            chow.update({
                "D": bundle.D,
                "beta": bundle.beta,
                "nu1": _q(bundle.nu1),
                "nu2": _q(bundle.nu2),
                "volume": _q(bundle.volume),
            })
            if chow_slope is not None:
                chow["cm_weight"] = _q(cm_weight(n, bundle.nu1, chow_slope, fd_slope))
        else:
            diagnostics.append(_diag("warning", "chow-geometry",
                                     f"constants need 1 <= n < N (n={n}, N={N})", None))
    if chow:
        report["chow"] = chow

    if want["chow"] and n >= 1:
        value = double_chow_value(d, n, hd.mu, chow_slope, fd_slope)
        report["verdicts"] = {
            "double_chow": double_chow_verdict(d, n, hd.mu, chow_slope, fd_slope).value,
            "value": _q(value),
            "fd_slope": _q(fd_slope),
            "scope": "this 1-psg only; stability needs the inequality for every 1-psg",
        }

    report["diagnostics"] = diagnostics
    return report


def _divided(poly, scale):
    from .hilbert import NumericalPolynomial
    return NumericalPolynomial(tuple(c / scale for c in poly.coefficients), poly.claimed_from)


def _hypersurface_section(ideal, w, scale, hd, fd_slope, budget, diagnostics, F1):
    p = HypersurfaceProblem(ideal.generators[0], w)
    mu_f = Fraction(hypersurface_slope(p), scale)
    integrals = lu = None
    try:
        integrals = [lu_integral(psi_profile(p, i)) / scale for i in range(p.n + 2)]
        lu = lu_slope(p) / scale
    except DivergentIntegralError as exc:
        diagnostics.append(_diag("warning", "hypersurface-slope", str(exc), None))
    free = is_multiplicity_free(p.f, w, budget)
    rf = refined_futaki(p.d, p.n, hd.mu, mu_f, fd_slope)
    section = {
        "mu_lambda_f": _q(mu_f),
        "lu_slope": None if lu is None else _q(lu),
        "psi_integrals": None if integrals is None else [_q(x) for x in integrals],
        "multiplicity_free": free,
        "refined_futaki": _q(rf),
        "mabuchi_coefficient": _q(-rf) if free else None,
    }
    if not free:
        diagnostics.append(_diag("warning", "hypersurface-slope",
                                 "multiple fibers: asymptotic formula not applicable", None))
    if F1 is not None and lu is not None:
        section["calibration_holds"] = bool(free and lu == rf == 4 * F1)
    return section


def _projection(ideal, center, d, m_cap, budget, diagnostics):
    out = {"center": [str(c) for c in center]}
    try:
        out["nodes"] = projection_node_count(ideal, center, d, m_cap, budget)
        out["generic"] = True
    except NonGenericCenterError as exc:
        out["generic"] = False
        out["nodes"] = None
        out["singular_degree"] = exc.singular_degree
        diagnostics.append(_diag("warning", "chow-geometry", str(exc), center))
    except (CenterOnCurveError, ValueError) as exc:
        raise InputError("chow-geometry", str(exc), center) from None
    return out


def dumps(report: Dict[str, Any]) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    jsonschema.validate(report, load_schema("report"))
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
