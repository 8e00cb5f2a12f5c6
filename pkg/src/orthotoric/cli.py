"""Batch scenario runner.

Parses a JSON config describing one model, builds it, runs the selected
residual suites, and emits a deterministic machine-readable report:

    {"schema": 1, "config_hash": <hex>, "suites": [<check>...], "passed": bool}

Exit codes: 0 all suites passed, 1 at least one suite failed, 2 malformed
config, 3 the build rejected the data (positivity/sign).  Reports are
byte-identical across runs of the same effective config; floats serialize
with 17 significant digits.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .ansatz import (AnsatzError, DomainTooLarge, MetricModel,
                     PositivityViolation, SignMismatch, SpectrumSpec,
                     space_form_factor)
from .classify import (ClassSpec, ClassSpecError, build_class_model,
                       check_bf, check_extremal, check_wbf, conf_einstein)
from .geom import curvature_bundle
from .ansatz import build_general
from .poly import FLOAT, Polynomial
from .symfunc import IdentityViolation, identity_suite, random_variable_set
from .verify import (CheckReport, _points, _report, conformal_killing_suite,
                     hamiltonian_suite, jet_suite, kahler_suite,
                     mutation_suite, potential_suite, symmetry_suite)

__all__ = ["ConfigError", "BuildError", "ScenarioConfig", "run", "identities",
           "main"]


class ConfigError(ValueError):
    """The config file is malformed or internally inconsistent."""


class BuildError(RuntimeError):
    """The config is well-formed but describes an inadmissible model."""


SUITE_ORDER = ("kahler", "hamiltonian", "symmetry", "potential", "jet_system",
               "conformal_killing", "mutation")
_SEED_OFFSET = {name: 10 * (i + 1) for i, name in enumerate(SUITE_ORDER)}
_CLASS_MODES = ("extremal", "csc", "wbf", "ke", "bf", "chsc")


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------


def _canon(obj) -> str:
    """Recursive JSON writer with sorted keys and 17-significant-digit floats."""
    if isinstance(obj, dict):
        items = sorted(obj.items())
        inner = ",".join(f"{json.dumps(str(k))}:{_canon(v)}" for k, v in items)
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_canon(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _config_hash(effective: dict) -> str:
    return hashlib.sha256(_canon(effective).encode()).hexdigest()


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def _expect(d: dict, where: str, required=(), optional=()):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(d) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = set(required) - set(d)
    if missing:
        raise ConfigError(f"missing keys in {where}: {sorted(missing)}")


def _num(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{where} must be a number")
    return float(x)


@dataclass
class ScenarioConfig:
    """Validated scenario: spectrum, profiles/class data, run options."""

    name: str
    m: int
    ell: int
    spectrum: SpectrumSpec
    mode: str
    coefficients: tuple
    integration_constants: Optional[tuple]
    factor_params: Tuple[Optional[dict], ...]
    conf_params: Optional[dict]
    count: int
    seed: int
    backend: str
    step: float
    tol_first: Optional[float]
    tol_second: Optional[float]
    checks: Tuple[str, ...]
    scalar_anchor: Optional[dict]
    raw: dict = field(repr=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        _expect(data, "config",
                required=("schema", "m", "ell", "nonconstant_domains", "F",
                          "samples"),
                optional=("name", "constant_roots", "diff", "tolerances",
                          "checks", "scalar_anchor"))
        if data["schema"] != 1:
            raise ConfigError(f"unsupported schema {data['schema']!r}")
        m, ell = data["m"], data["ell"]
        if not isinstance(m, int) or not isinstance(ell, int) or ell < 1:
            raise ConfigError("m and ell must be integers with ell >= 1")

        domains = data["nonconstant_domains"]
        if not isinstance(domains, list) or len(domains) != ell:
            raise ConfigError(f"nonconstant_domains must list {ell} intervals")
        ivs = []
        for i, iv in enumerate(domains):
            if not isinstance(iv, list) or len(iv) != 2:
                raise ConfigError(f"nonconstant_domains[{i}] must be [lo, hi]")
            lo, hi = (_num(x, f"nonconstant_domains[{i}]") for x in iv)
            if not lo < hi:
                raise ConfigError(f"nonconstant_domains[{i}]: need lo < hi")
            ivs.append((lo, hi))
        for i, (a, b) in enumerate(ivs):
            for a2, b2 in ivs[i + 1:]:
                if max(a, a2) < min(b, b2):
                    raise ConfigError(
                        f"intervals ({a}, {b}) and ({a2}, {b2}) overlap")

        croots = data.get("constant_roots", [])
        if not isinstance(croots, list):
            raise ConfigError("constant_roots must be a list")
        constants, factor_params = [], []
        for i, entry in enumerate(croots):
            _expect(entry, f"constant_roots[{i}]",
                    required=("value", "multiplicity"), optional=("factor",))
            v = _num(entry["value"], f"constant_roots[{i}].value")
            mult = entry["multiplicity"]
            if not isinstance(mult, int) or mult < 1:
                raise ConfigError(
                    f"constant_roots[{i}].multiplicity must be a positive int")
            fac = entry.get("factor")
            if fac is not None and fac != "auto":
                _expect(fac, f"constant_roots[{i}].factor",
                        required=("k", "scale"), optional=("halfwidth",))
                fac = {"k": _num(fac["k"], "factor.k"),
                       "scale": _num(fac["scale"], "factor.scale"),
                       "halfwidth": _num(fac.get("halfwidth", 0.45),
                                         "factor.halfwidth")}
            constants.append((v, mult))
            factor_params.append(fac)
        if m != ell + sum(k for _, k in constants):
            raise ConfigError(
                "m must equal ell plus the constant multiplicities")
        try:
            spectrum = SpectrumSpec(ivs, constants)
        except AnsatzError as e:
            raise ConfigError(str(e)) from e

        fconf = data["F"]
        if not isinstance(fconf, dict) or "mode" not in fconf:
            raise ConfigError("F must be an object with a \"mode\"")
        mode = fconf["mode"]
        coefficients: tuple = ()
        int_consts = None
        conf_params = None
        if mode == "explicit":
            _expect(fconf, "F", required=("mode", "coefficients"))
            cf = fconf["coefficients"]
            if not isinstance(cf, list) or len(cf) != ell or \
                    not all(isinstance(row, list) and row for row in cf):
                raise ConfigError(
                    f"explicit F needs {ell} nonempty coefficient lists")
            coefficients = tuple(
                tuple(_num(c, "F.coefficients") for c in row) for row in cf)
            for i, fac in enumerate(factor_params):
                if fac in (None, "auto"):
                    raise ConfigError(
                        f"constant_roots[{i}] needs explicit factor "
                        "parameters when F is explicit")
        elif mode in _CLASS_MODES:
            _expect(fconf, "F", required=("mode", "coefficients"),
                    optional=("integration_constants",))
            cf = fconf["coefficients"]
            if not isinstance(cf, list):
                raise ConfigError("F.coefficients must be a list")
            coefficients = tuple(_num(c, "F.coefficients") for c in cf)
            ic = fconf.get("integration_constants")
            if ic is not None:
                if not isinstance(ic, list) or len(ic) != ell:
                    raise ConfigError(
                        f"integration_constants must list {ell} entries")
                int_consts = tuple(
                    tuple(_num(c, "integration_constants") for c in row)
                    for row in ic)
            for i, fac in enumerate(factor_params):
                if isinstance(fac, dict):
                    raise ConfigError(
                        f"constant_roots[{i}].factor must be \"auto\" (or "
                        "absent) in class mode; targets come from the family")
        elif mode == "conf_einstein":
            _expect(fconf, "F", required=("mode", "p", "q", "a_plus",
                                          "a_minus", "c"))
            conf_params = {k: _num(fconf[k], f"F.{k}")
                           for k in ("p", "q", "a_plus", "a_minus", "c")}
            if ell != 1 or len(constants) != 1 or \
                    constants[0] != (0.0, m - 1):
                raise ConfigError(
                    "conf_einstein needs ell=1 and the single constant root "
                    "0 with multiplicity m-1")
            if not isinstance(factor_params[0], dict):
                raise ConfigError(
                    "conf_einstein needs explicit base factor parameters")
        else:
            raise ConfigError(f"unknown F mode {mode!r}")

        samples = data["samples"]
        _expect(samples, "samples", required=("count", "seed"))
        count, seed = samples["count"], samples["seed"]
        if not isinstance(count, int) or count < 1 or not isinstance(seed, int):
            raise ConfigError("samples.count must be a positive int and "
                              "samples.seed an int")

        diff = data.get("diff", {})
        _expect(diff, "diff", optional=("backend", "step"))
        backend = diff.get("backend", "dual")
        if backend == "fd":
            raise ConfigError(
                "diff.backend \"fd\" is unavailable here: the suites "
                "differentiate nested closures, which needs \"dual\"")
        if backend != "dual":
            raise ConfigError(f"unknown diff.backend {backend!r}")
        step = _num(diff.get("step", 1e-3), "diff.step")
        if step <= 0:
            raise ConfigError("diff.step must be positive")

        tols = data.get("tolerances", {})
        _expect(tols, "tolerances", optional=("first_order", "second_order"))
        tol_first = tols.get("first_order")
        tol_second = tols.get("second_order")
        for nm, t in (("first_order", tol_first), ("second_order", tol_second)):
            if t is not None and (_num(t, f"tolerances.{nm}") <= 0):
                raise ConfigError(f"tolerances.{nm} must be positive")

        checks = data.get("checks")
        if checks is None:
            checks = [s for s in SUITE_ORDER if s != "mutation"]
        if not isinstance(checks, list) or not checks:
            raise ConfigError("checks must be a nonempty list of suite names")
        for nm in checks:
            if nm not in SUITE_ORDER:
                raise ConfigError(
                    f"unknown check {nm!r}; available: {list(SUITE_ORDER)}")

        anchor = data.get("scalar_anchor")
        if anchor is not None:
            _expect(anchor, "scalar_anchor", required=("value",),
                    optional=("tolerance",))
            anchor = {"value": _num(anchor["value"], "scalar_anchor.value"),
                      "tolerance": _num(anchor.get("tolerance", 1e-6),
                                        "scalar_anchor.tolerance")}

        return cls(name=str(data.get("name", "scenario")), m=m, ell=ell,
                   spectrum=spectrum, mode=mode, coefficients=coefficients,
                   integration_constants=int_consts,
                   factor_params=tuple(factor_params),
                   conf_params=conf_params, count=count, seed=seed,
                   backend=backend, step=step, tol_first=tol_first,
                   tol_second=tol_second, checks=tuple(checks),
                   scalar_anchor=anchor, raw=data)


# ---------------------------------------------------------------------------
# build + run
# ---------------------------------------------------------------------------

_BUILD_ERRORS = (PositivityViolation, SignMismatch, DomainTooLarge,
                 AnsatzError, ClassSpecError)


def _build(config: ScenarioConfig):
    """Returns (model, class_spec_or_None, extra_reports)."""
    extra: List[CheckReport] = []
    if config.mode == "conf_einstein":
        fp = config.factor_params[0]
        base = space_form_factor(k=fp["k"], scale=fp["scale"],
                                 m_f=config.m - 1,
                                 halfwidth=fp["halfwidth"])
        cp = config.conf_params
        model, rep = conf_einstein(config.m, cp["p"], cp["q"], cp["a_plus"],
                                   cp["a_minus"], cp["c"], base,
                                   config.spectrum.intervals[0],
                                   n_samples=config.count, seed=config.seed)
        extra.append(rep)
        return model, None, extra
    if config.mode in _CLASS_MODES:
        cs = ClassSpec(config.mode, config.spectrum, config.coefficients,
                       integration_constants=config.integration_constants)
        model, _family = build_class_model(cs, name=config.name)
        return model, cs, extra
    profiles = [Polynomial(list(row), FLOAT) for row in config.coefficients]
    factors = [space_form_factor(k=fp["k"], scale=fp["scale"], m_f=mult,
                                 halfwidth=fp["halfwidth"])
               for fp, (_v, mult) in zip(config.factor_params,
                                         config.spectrum.constants)]
    model = build_general(config.spectrum, profiles, factors=factors,
                          name=config.name)
    return model, None, extra


def _run_suites(model: MetricModel, config: ScenarioConfig,
                cs: Optional[ClassSpec]) -> List[CheckReport]:
    reports: List[CheckReport] = []
    first, second = config.tol_first, config.tol_second
    n, seed = config.count, config.seed
    for name in config.checks:
        s = seed + _SEED_OFFSET[name]
        if name == "kahler":
            kw = {}
            if first is not None:
                kw["tol"] = first
            if second is not None:
                kw["curv_tol"] = second
            reports.append(kahler_suite(model, n_samples=n, seed=s, **kw))
        elif name == "hamiltonian":
            reports.append(hamiltonian_suite(
                model, n_samples=n, seed=s,
                **({"tol": first} if first is not None else {})))
        elif name == "symmetry":
            reports.append(symmetry_suite(
                model, n_samples=n, seed=s,
                **({"tol": first} if first is not None else {})))
        elif name == "potential":
            reports.append(potential_suite(
                model, n_samples=max(1, n // 2), seed=s,
                **({"tol": first} if first is not None else {})))
        elif name == "jet_system":
            kw = {"tol": second} if second is not None else {}
            if cs is not None and cs.kind in ("bf", "chsc"):
                kw["charpoly_profile"] = model.profiles[0]
            reports.append(jet_suite(model, n_samples=n, seed=s, **kw))
        elif name == "conformal_killing":
            reports.append(conformal_killing_suite(
                model, n_samples=n, seed=s,
                **({"tol": second} if second is not None else {})))
        elif name == "mutation":
            reports.append(mutation_suite(model, n_samples=1, seed=s))
    return reports


def _class_reports(model: MetricModel, config: ScenarioConfig,
                   cs: Optional[ClassSpec]) -> List[CheckReport]:
    if cs is None:
        return []
    kind = {"extremal": "extremal", "csc": "extremal", "wbf": "wbf",
            "ke": "wbf", "bf": "bf", "chsc": "bf"}[cs.kind]
    check = {"extremal": check_extremal, "wbf": check_wbf,
             "bf": check_bf}[kind]
    agg = check(model, cs, n_samples=config.count,
                seed=config.seed + 97)
    out = []
    for sub in agg.details:
        out.append(CheckReport(
            name=f"{kind}.{sub.name}", residual_max=sub.residual_max,
            residual_mean=sub.residual_mean, tolerance=sub.tolerance,
            passed=sub.passed, samples=sub.samples, seed=sub.seed))
    return out


def _anchor_report(model: MetricModel, config: ScenarioConfig) -> CheckReport:
    anchor = config.scalar_anchor
    pts = _points(model, config.count, config.seed + 171)
    res = [abs(curvature_bundle(model.g, p, model.J).scal - anchor["value"])
           for p in pts]
    return _report("scalar_curvature_anchor", res, anchor["tolerance"],
                   config.count, config.seed + 171)


def run(config_path: str, out: Optional[str] = None,
        seed: Optional[int] = None, stream=None) -> int:
    """Build the configured model, run its suites, write the report."""
    stream = stream or sys.stdout
    try:
        with open(config_path) as fh:
            data = json.load(fh)
    except OSError as e:
        print(f"config: {e}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as e:
        print(f"config: invalid JSON: {e}", file=sys.stderr)
        return 2
    if seed is not None:
        if isinstance(data, dict) and isinstance(data.get("samples"), dict):
            data["samples"]["seed"] = seed
    try:
        config = ScenarioConfig.from_dict(data)
    except ConfigError as e:
        print(f"config: {e}", file=sys.stderr)
        return 2
    try:
        model, cs, reports = _build(config)
    except _BUILD_ERRORS as e:
        print(f"build: {e}", file=sys.stderr)
        return 3
    reports += _run_suites(model, config, cs)
    reports += _class_reports(model, config, cs)
    if config.scalar_anchor is not None:
        reports.append(_anchor_report(model, config))
    passed = all(r.passed for r in reports)
    doc = {"schema": 1, "config_hash": _config_hash(config.raw),
           "suites": [r.to_json() for r in reports], "passed": passed}
    text = _canon(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# exact identity runner
# ---------------------------------------------------------------------------


def identities(max_m: int = 6, max_k: int = 3, trials: int = 50,
               seed: int = 5, out: Optional[str] = None, stream=None) -> int:
    """Exact contraction/inversion identities on random rational spectra."""
    stream = stream or sys.stdout
    if not 1 <= max_m <= 8:
        print("config: --max-m must lie in 1..8 (cost guard)",
              file=sys.stderr)
        return 2
    if trials < 1 or max_k < 1:
        print("config: --trials and --max-k must be positive",
              file=sys.stderr)
        return 2
    suites, failed = [], False
    for m in range(1, max_m + 1):
        bad = 0
        for t in range(trials):
            rng = random.Random(1_000_000 * seed + 1_000 * m + t)
            v = random_variable_set(m, rng)
            try:
                identity_suite(v, max_k=max_k)
            except IdentityViolation as e:
                bad += 1
                failed = True
                print(f"identities: m={m} trial={t} values={v.values}: {e}",
                      file=sys.stderr)
        suites.append(CheckReport(
            name=f"identities_m{m}", residual_max=float(bad),
            residual_mean=float(bad) / trials, tolerance=0.0,
            passed=bad == 0, samples=trials, seed=seed))
    doc = {"schema": 1,
           "config_hash": _config_hash({"max_m": max_m, "max_k": max_k,
                                        "trials": trials, "seed": seed}),
           "suites": [r.to_json() for r in suites],
           "passed": not failed}
    text = _canon(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="orthotoric",
        description="Momentum-coordinate metric models: batch residual "
                    "suites and exact identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="build a configured model and run "
                                       "its residual suites")
    p_run.add_argument("config", help="path to a scenario JSON file")
    p_run.add_argument("--out", help="write the report here instead of stdout")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override samples.seed from the config")

    p_id = sub.add_parser("identities", help="run the exact rational "
                                             "identity suite")
    p_id.add_argument("--max-m", type=int, default=6)
    p_id.add_argument("--max-k", type=int, default=3)
    p_id.add_argument("--trials", type=int, default=50)
    p_id.add_argument("--seed", type=int, default=5)
    p_id.add_argument("--out", help="write the report here instead of stdout")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, out=args.out, seed=args.seed)
    return identities(max_m=args.max_m, max_k=args.max_k, trials=args.trials,
                      seed=args.seed, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
