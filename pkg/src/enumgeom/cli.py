"""Command line harness: one subcommand per verification pipeline, JSON reports, golden files.

Reports are canonical JSON (sorted keys, compact separators) carrying
``"schema": 1``.  Wall-clock timings go to stderr so that reports are
byte-identical across runs with the same seed.
"""

from __future__ import annotations

import hashlib
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .errors import BoundExceeded, EnumGeomError, GoldenMismatch, InvalidCommand

SCHEMA = 1
DEFAULT_SEED = 20240601
GOLDEN_DIR = Path(__file__).with_name("goldens")


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


def _json(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (list, tuple)):
        return [_json(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _json(v) for k, v in x.items()}
    return x


@dataclass
class RunConfig:
    command: str
    order: int | None = None
    cutoff: int | None = None
    seed: int = DEFAULT_SEED
    threshold: int | None = None
    output: str | None = None
    threads: int = 1
    options: dict = field(default_factory=dict)

    def rng(self, task: str) -> random.Random:
        # one stream per task, so parallel dispatch does not change the points
        return random.Random(f"{self.seed}:{task}")

    def to_json(self):
        return {
            "command": self.command,
            "order": self.order,
            "cutoff": self.cutoff,
            "seed": self.seed,
            "threshold": self.threshold,
            "options": self.options,
        }


@dataclass
class VerdictRecord:
    name: str
    parameters: dict
    verdict: bool
    lhs: object = None
    rhs: object = None
    details: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_json(self):
        lhs, rhs = _json(self.lhs), _json(self.rhs)
        return {
            "name": self.name,
            "parameters": _json(self.parameters),
            "verdict": bool(self.verdict),
            "lhs_digest": digest(lhs),
            "rhs_digest": digest(rhs),
            "lhs": lhs,
            "rhs": rhs,
            "details": _json(self.details),
        }


# ---------------------------------------------------------------------------
# tasks: module-level so they pickle for process-parallel dispatch


def task_nekrasov(order, threshold, seed):
    from .hilbert import nekrasov_check

    v = nekrasov_check(order, threshold=threshold, rng=random.Random(f"{seed}:nekrasov"))
    return VerdictRecord("nekrasov", {"order": order}, v.verdict, v.lhs, v.rhs,
                         {"first_mismatch": v.first_mismatch})


def task_hilb2(order):
    from .hilbert import hilb_c2_closed_form, z_series_hilb_c2

    lhs, rhs = z_series_hilb_c2(order), hilb_c2_closed_form(order)
    m = lhs.first_mismatch(rhs)
    return VerdictRecord("hilb2-series", {"order": order}, m is None, lhs, rhs, {"first_mismatch": m})


def task_star(order):
    from .hilbert import star_closed_form, star_extract

    lhs, rhs = star_extract(order), star_closed_form(order)
    m = lhs.first_mismatch(rhs)
    return VerdictRecord("star-extract", {"order": order}, m is None, lhs, rhs, {"first_mismatch": m})


def task_rigidity(size, trials, seed):
    from .hilbert import rigidity_vanish_check
    from .partitions import enumerate_plane_partitions

    rng = random.Random(f"{seed}:rigidity:{size}")
    pis = enumerate_plane_partitions(size)
    failing = [pi.to_json() for pi in pis if not rigidity_vanish_check(pi, trials, rng)]
    return VerdictRecord("rigidity", {"size": size, "trials": trials}, not failing,
                         details={"checked": len(pis), "failing": failing})


def task_coh_limit(order):
    from .hilbert import cohomological_limit_check

    c = cohomological_limit_check(order)
    return VerdictRecord("coh-limit", {"order": order}, c.verdict, c.limits, c.predicted,
                         {"exponent": c.exponent.to_string()})


def task_macmahon(spec_name, cutoff):
    from .fock import brute_force_sum, or_formula_lhs, or_formula_rhs, refined_target, spec_named

    spec = spec_named(spec_name, cutoff)
    lhs = or_formula_lhs(spec, cutoff)
    if spec_name == "refined":
        rhs = refined_target(cutoff)
        details = {}
        verdict = lhs.equals(rhs)
    else:
        rhs = or_formula_rhs(spec, cutoff)
        brute = brute_force_sum(spec, cutoff)
        details = {"lhs=brute": lhs.equals(brute), "brute=rhs": brute.equals(rhs)}
        verdict = lhs.equals(rhs) and all(details.values())
        if spec_name == "macmahon":
            details["coefficients"] = [int(c.rank()) for c in lhs.coeffs]
    return VerdictRecord("macmahon", {"spec": spec_name, "cutoff": cutoff}, verdict, lhs, rhs, details)


def task_rmatrix(check):
    from . import stable

    if check == "entries":
        r, shown = stable.r_matrix(), stable.displayed_r_matrix()
        return VerdictRecord("rmatrix-entries", {}, r.equals(shown), r, shown,
                             {"stab+": stable.stab_matrix("+").to_json(),
                              "stab-": stable.stab_matrix("-").to_json()})
    if check == "unitarity":
        return VerdictRecord("rmatrix-unitarity", {}, stable.unitarity_check(), stable.r_matrix())
    if check == "yb":
        out = stable.yang_baxter_check()
        return VerdictRecord("rmatrix-yb", {}, out["verdict"], stable.r_matrix(),
                             details={"ordering": out["ordering"]})
    if check == "degree":
        passing = {str(e): stable.degree_axiom_check(e) for e in map(Fraction, ("1/4", "1/2", "3/4"))}
        failing = {str(e): stable.degree_axiom_check(e) for e in map(Fraction, ("0", "1"))}
        ok = all(passing.values()) and not any(failing.values())
        return VerdictRecord("rmatrix-degree", {}, ok, details={"inside": passing, "boundary": failing})
    if check == "diag":
        ok, control = stable.diagonal_decomposition_check(), stable.diagonal_decomposition_check(twist=False)
        return VerdictRecord("rmatrix-diag", {}, ok and not control, stable.opposite_envelope(),
                             stable.stab_matrix("+"), {"identity": ok, "untwisted_control": control})
    raise InvalidCommand(f"unknown rmatrix check {check!r}")


def task_identity(which, order):
    from . import identities as ids

    if which == "qbinomial":
        r = ids.qbinomial_check(order)
        spec0, spec1 = ids.qbinomial_specialization(order, 0), ids.qbinomial_specialization(order, 1)
        details = dict(r.details, **{"m=0": spec0.verdict, "m=1": spec1.verdict})
        ok = r.verdict and spec0.verdict and spec1.verdict
        return VerdictRecord("qbinomial", {"order": order}, ok, r.lhs, r.rhs, details)
    if which == "qbinomial-diff":
        reps = [ids.qbinomial_difference_equation(order, f) for f in ("sum", "product")]
        return VerdictRecord("qbinomial-diff", {"order": order}, all(r.verdict for r in reps),
                             reps[0].lhs, reps[0].rhs, {r.name: r.verdict for r in reps})
    if which == "spinor":
        r = ids.spinor_check()
        return VerdictRecord("spinor", {}, r.verdict, r.lhs, r.rhs, r.details)
    if which == "mtheory":
        r = ids.mtheory_identity_check(1)
        control = ids.mtheory_identity_check(-1)
        details = dict(r.details, branch_flip_control=control.verdict, sanity=ids.plethysm_sanity())
        ok = r.verdict and not control.verdict and details["sanity"]
        return VerdictRecord("mtheory", {}, ok, r.lhs, r.rhs, details)
    raise InvalidCommand(f"unknown identity {which!r}")


def _timed(fn, args):
    start = time.perf_counter()
    rec = fn(*args)
    rec.timing = time.perf_counter() - start
    return rec


def dispatch(tasks, threads: int = 1):
    """Run ``(fn, args)`` tasks; results keep registration order."""
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_timed, fn, args) for fn, args in tasks]
            return [f.result() for f in futures]
    return [_timed(fn, args) for fn, args in tasks]


def build_report(config: RunConfig, records) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "config": config.to_json(),
        "records": [r.to_json() for r in records],
        "verdict": all(r.verdict for r in records),
    }


def run(config: RunConfig, tasks) -> tuple[dict, int]:
    records = dispatch(tasks, config.threads)
    for r in records:
        status = "PASS" if r.verdict else "FAIL"
        click.echo(f"{status} {r.name} {canonical(_json(r.parameters))}")
        click.echo(f"  {r.name}: {r.timing:.2f}s", err=True)
    report = build_report(config, records)
    if config.output:
        Path(config.output).write_text(canonical(report) + "\n")
    return report, 0 if report["verdict"] else 1


# ---------------------------------------------------------------------------
# golden files


def golden_registry():
    """Name -> zero-argument producer of a JSON-able object."""
    from . import identities as ids
    from . import stable
    from .fock import brute_force_sum, or_formula_lhs, spec_named
    from .hilbert import chi_projective_space, hilb_c2_closed_form, nekrasov_rhs, star_closed_form
    from .plethystic import pleth_exp
    from .algebra import LaurentPolynomial, TruncatedSeries, variables

    def macmahon_zt():
        vs = variables("t")
        g = TruncatedSeries("z", 6, [LaurentPolynomial.zero(vs), LaurentPolynomial.var(vs, "t")])
        return pleth_exp(g, 6)

    return {
        "pleth_exp_zt_order6": macmahon_zt,
        "hilb2_closed_form_order3": lambda: hilb_c2_closed_form(3),
        "nekrasov_rhs_order3": lambda: nekrasov_rhs(3),
        "star_closed_form_order4": lambda: star_closed_form(4),
        "macmahon_generic_cutoff4": lambda: or_formula_lhs(spec_named("generic", 4), 4),
        "macmahon_brute_cutoff6": lambda: brute_force_sum(spec_named("macmahon", 6), 6),
        "qbinomial_sum_order6": lambda: ids.qbinomial_sum_form(6),
        "spinor_plus": lambda: ids.spinor_characters()[0],
        "r_matrix": stable.r_matrix,
        "chi_p3_k2": lambda: chi_projective_space(3, 2),
    }


def _first_difference(a: str, b: str) -> str:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return f"byte {i}"
    return f"byte {min(len(a), len(b))}"


def golden_regression(suite: Path, names=None, update: bool = False) -> dict:
    """Recompute registered series and compare canonical JSON byte-exactly."""
    registry = golden_registry()
    names = list(registry) if names is None else names
    suite = Path(suite)
    results = {}
    for name in names:
        if name not in registry:
            raise InvalidCommand(f"no registered series {name!r}")
        text = canonical(_json(registry[name]())) + "\n"
        path = suite / f"{name}.json"
        if update:
            suite.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
            results[name] = "written"
            continue
        if not path.exists():
            raise GoldenMismatch(f"missing golden for {name}", str(path))
        stored = path.read_text()
        if stored != text:
            raise GoldenMismatch(f"golden {name} differs", f"{path}:{_first_difference(stored, text)}")
        results[name] = "match"
    return results


# ---------------------------------------------------------------------------
# click wiring


class _Group(click.Group):
    def resolve_command(self, ctx, args):
        name = args[0] if args else None
        if name is not None and name not in self.commands and not name.startswith("-"):
            raise InvalidCommand(f"unknown command {name!r}")
        return super().resolve_command(ctx, args)


def _common(fn):
    fn = click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)(fn)
    fn = click.option("--emit-json", "emit_json", type=click.Path(dir_okay=False), default=None)(fn)
    fn = click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)(fn)
    return fn


def _finish(config, tasks):
    _, code = run(config, tasks)
    sys.exit(code)


@click.group(cls=_Group)
@click.version_option(__version__)
def cli():
    """Exact verification of K-theoretic enumerative identities."""


@cli.command("pleth")
@click.argument("direction", type=click.Choice(["exp", "log"]))
@click.argument("polynomial")
@click.option("--vars", "names", default="t1,t2,t3,z", show_default=True,
              help="Comma-separated variables of POLYNOMIAL.")
@click.option("--grading", default="z", show_default=True)
@click.option("--order", type=int, default=6, show_default=True)
@_common
def pleth_cmd(direction, polynomial, names, grading, order, seed, emit_json, threads):
    """Plethystic exponential or logarithm of a polynomial graded by GRADING."""
    from .algebra import LaurentPolynomial, TruncatedSeries, variables
    from .plethystic import check_order, pleth_exp, pleth_log

    check_order(order)
    vs = variables(*[n.strip() for n in names.split(",") if n.strip()])
    if grading not in vs.names:
        raise InvalidCommand(f"grading variable {grading!r} is not among {vs.names}")
    coeff_vars = variables(*[n for n in vs.names if n != grading])
    p = LaurentPolynomial.parse(vs, polynomial)
    series = TruncatedSeries.from_laurent(p, grading, order, coeff_vars)
    out = pleth_exp(series, order) if direction == "exp" else pleth_log(series, order).series
    config = RunConfig("pleth", order=order, seed=seed, output=emit_json,
                       options={"direction": direction, "input": p.to_string(), "vars": list(vs.names)})
    report = {"schema": SCHEMA, "version": __version__, "config": config.to_json(),
              "result": out.to_json(), "digest": digest(out.to_json())}
    text = canonical(report)
    if emit_json:
        Path(emit_json).write_text(text + "\n")
    click.echo(text)


@cli.command("nekrasov-check")
@click.option("--order", type=int, default=2, show_default=True)
@click.option("--threshold", type=int, default=None, help="Clearing threshold (terms).")
@_common
def nekrasov_cmd(order, threshold, seed, emit_json, threads):
    """Fixed-point sum over plane partitions against the plethystic closed form."""
    config = RunConfig("nekrasov-check", order=order, seed=seed, threshold=threshold,
                       output=emit_json, threads=threads)
    _finish(config, [(task_nekrasov, (order, threshold, seed))])


@cli.command("hilb2-series")
@click.option("--order", type=int, default=4, show_default=True)
@_common
def hilb2_cmd(order, seed, emit_json, threads):
    """Surface localization series against its plethystic closed form."""
    config = RunConfig("hilb2-series", order=order, seed=seed, output=emit_json, threads=threads)
    _finish(config, [(task_hilb2, (order,))])


@cli.command("star-extract")
@click.option("--order", type=int, default=2, show_default=True)
@_common
def star_cmd(order, seed, emit_json, threads):
    """Extract the point-class-normalized logarithm and compare with its kappa-only closed form."""
    config = RunConfig("star-extract", order=order, seed=seed, output=emit_json, threads=threads)
    _finish(config, [(task_star, (order,))])


@cli.command("rigidity")
@click.option("--max-size", type=int, default=4, show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@_common
def rigidity_cmd(max_size, trials, seed, emit_json, threads):
    """Vanishing of fixed-point weights on t1 t2 = 1 at seeded random points."""
    from .partitions import MAX_PLANE_PARTITION_SIZE

    if not 1 <= max_size <= MAX_PLANE_PARTITION_SIZE:
        raise BoundExceeded(f"max size must lie in [1, {MAX_PLANE_PARTITION_SIZE}]")
    config = RunConfig("rigidity", cutoff=max_size, seed=seed, output=emit_json, threads=threads,
                       options={"trials": trials})
    _finish(config, [(task_rigidity, (n, trials, seed)) for n in range(1, max_size + 1)])


@cli.command("coh-limit")
@click.option("--order", type=int, default=3, show_default=True)
@_common
def coh_cmd(order, seed, emit_json, threads):
    """Cohomological limit of the threefold series and its MacMahon power structure."""
    config = RunConfig("coh-limit", order=order, seed=seed, output=emit_json, threads=threads)
    _finish(config, [(task_coh_limit, (order,))])


@cli.command("macmahon")
@click.option("--cutoff", type=int, default=6, show_default=True)
@click.option("--spec", "spec_name", type=click.Choice(["macmahon", "refined", "generic"]),
              default="macmahon", show_default=True)
@_common
def macmahon_cmd(cutoff, spec_name, seed, emit_json, threads):
    """Transfer-matrix product against brute force and the plethystic side."""
    config = RunConfig("macmahon", cutoff=cutoff, seed=seed, output=emit_json, threads=threads,
                       options={"spec": spec_name})
    _finish(config, [(task_macmahon, (spec_name, cutoff))])


RMATRIX_CHECKS = ("entries", "unitarity", "yb", "degree", "diag")


@cli.command("rmatrix")
@click.option("--check", "checks", type=click.Choice(RMATRIX_CHECKS + ("all",)), multiple=True,
              default=("all",), show_default=True)
@_common
def rmatrix_cmd(checks, seed, emit_json, threads):
    """R-matrix of the cotangent bundle of P^1 and the envelope axioms."""
    chosen = RMATRIX_CHECKS if "all" in checks else tuple(c for c in RMATRIX_CHECKS if c in checks)
    config = RunConfig("rmatrix", seed=seed, output=emit_json, threads=threads,
                       options={"checks": list(chosen)})
    _finish(config, [(task_rmatrix, (c,)) for c in chosen])


IDENTITIES = ("qbinomial", "qbinomial-diff", "spinor", "mtheory")


@cli.command("identities")
@click.argument("which", type=click.Choice(IDENTITIES + ("all",)), default="all")
@click.option("--order", type=int, default=8, show_default=True)
@_common
def identities_cmd(which, order, seed, emit_json, threads):
    """q-binomial and spinor/M-theory character identities."""
    chosen = IDENTITIES if which == "all" else (which,)
    config = RunConfig("identities", order=order, seed=seed, output=emit_json, threads=threads,
                       options={"which": list(chosen)})
    _finish(config, [(task_identity, (w, order)) for w in chosen])


@cli.command("golden")
@click.option("--suite", type=click.Path(file_okay=False), default=str(GOLDEN_DIR), show_default=True)
@click.option("--name", "names", multiple=True, help="Restrict to these registered series.")
@click.option("--update", is_flag=True, help="Rewrite golden files instead of comparing.")
@_common
def golden_cmd(suite, names, update, seed, emit_json, threads):
    """Byte-exact regression of registered series against stored golden files."""
    results = golden_regression(Path(suite), list(names) or None, update)
    for name, status in results.items():
        click.echo(f"{status.upper()} {name}")
    report = {"schema": SCHEMA, "version": __version__, "golden": results}
    if emit_json:
        Path(emit_json).write_text(canonical(report) + "\n")


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="enumgeom", standalone_mode=False)
    except EnumGeomError as exc:
        loc = getattr(exc, "location", None)
        click.echo(f"error: {type(exc).__name__}: {exc}" + (f" [{loc}]" if loc else ""), err=True)
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except click.ClickException as exc:
        exc.show()
        sys.exit(InvalidCommand.exit_code)
    sys.exit(0)


if __name__ == "__main__":
    main()
