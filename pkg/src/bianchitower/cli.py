"""Command-line front end.

Every subcommand reads a RunConfig assembled from (in increasing priority)
defaults, a TOML file given with --config, and command-line flags.  JSON
reports embed the normalized config and the subcommand, so

    bianchitower replay report.json

re-runs the same computation.  Exit codes: 0 all PASS, 1 any FAIL, 2 input
error.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib
import tomli_w

from . import __version__
from .congruence import (
    DEFAULT_CLOSURE_CAP,
    ClosureCapExceeded,
    CongruenceKind,
    coset_count_orbit,
    index_formula,
    psl2_order,
    surjectivity_check,
)
from .matgroup import DEFAULT_ELEMENT_CAP, GroupContext, Mat2, compute_entry_constants
from .presets import PRESETS, preset_covolume, preset_generators
from .quadfield import (
    FieldSpec,
    PrimeIdealData,
    SquareFreeIdeal,
    enumerate_split_primes,
    find_split_prime_ideal,
)
from .spectrum import (
    NoObstruction,
    SelectionStrategy,
    enumerate_geodesics,
    prime_counts,
    select_admissible_prime,
    split_prime_gaps,
)
from .tower import (
    Lemma51Violation,
    build_tower_closed,
    build_tower_noncompact,
    compute_c3,
    lemma51_bound,
    theorem14_bounds,
    verify_lemma51,
)

log = logging.getLogger("bianchitower")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
ALL_KINDS = ("principal", "hecke0", "hecke1")


class ConfigError(ValueError):
    pass


def _norm_entry(e):
    if isinstance(e, bool):
        raise ConfigError(f"bad matrix entry {e!r}")
    if isinstance(e, int):
        return e
    if isinstance(e, (list, tuple)) and len(e) in (2, 3) and all(isinstance(x, int) for x in e):
        return list(e)
    raise ConfigError(f"bad matrix entry {e!r}: use an int, [x, y] or [p, q, r]")


def _norm_matrix(m):
    if isinstance(m, (list, tuple)) and len(m) == 2 and all(isinstance(r, (list, tuple)) and len(r) == 2 for r in m):
        return [[_norm_entry(x) for x in row] for row in m]
    raise ConfigError(f"bad generator {m!r}: use [[a, b], [c, d]]")


@dataclass
class RunConfig:
    preset: str | None = None
    d: int | None = None
    generators: list | None = None
    c_prime: float = 1.0
    systole: float = 1.0
    geodesic_count_exponent: int = 2
    d_index: int = 1
    v0: float | None = None
    eps: float = 0.05
    depth: int = 6
    cutoff: float = 2.0
    levels: int = 1
    strategy: str = "smallest-split"
    kinds: list[str] = field(default_factory=lambda: list(ALL_KINDS))
    primes: list[str] = field(default_factory=list)
    limit: int = 100
    t: float | None = None
    closure_cap: int = DEFAULT_CLOSURE_CAP
    element_cap: int = DEFAULT_ELEMENT_CAP
    threads: int = 1
    output: str | None = None

    def __post_init__(self):
        self.normalize()

    def normalize(self) -> "RunConfig":
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        if self.generators is not None:
            if not isinstance(self.generators, list) or not self.generators:
                raise ConfigError("generator list is empty")
            self.generators = [_norm_matrix(m) for m in self.generators]
            if self.d is None:
                raise ConfigError("explicit generators need the field parameter d")
        try:
            for name in ("c_prime", "systole", "eps", "cutoff"):
                setattr(self, name, float(getattr(self, name)))
            for name in ("depth", "levels", "limit", "d_index", "closure_cap", "element_cap", "threads",
                         "geodesic_count_exponent"):
                setattr(self, name, int(getattr(self, name)))
            if self.d is not None:
                self.d = int(self.d)
            if self.v0 is not None:
                self.v0 = float(self.v0)
            if self.t is not None:
                self.t = float(self.t)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        kinds = []
        for k in self.kinds:
            if k == "all":
                kinds.extend(ALL_KINDS)
            else:
                try:
                    kinds.append(CongruenceKind.parse(str(k)).value)
                except ValueError:
                    raise ConfigError(f"unknown congruence kind {k!r}") from None
        self.kinds = sorted(set(kinds), key=ALL_KINDS.index)
        self.primes = [str(p).strip() for p in self.primes]
        try:
            SelectionStrategy(self.strategy)
        except ValueError:
            raise ConfigError(f"unknown strategy {self.strategy!r}") from None
        if self.depth < 0 or self.levels < 0 or self.threads < 1:
            raise ConfigError("depth, levels must be >= 0 and threads >= 1")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}

    @classmethod
    def from_toml(cls, text: str) -> "RunConfig":
        try:
            return cls.from_dict(tomllib.loads(text))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed TOML: {exc}") from None

    def to_toml(self) -> str:
        return tomli_w.dumps(self.to_dict())

    # -- derived objects

    def field_spec(self) -> FieldSpec:
        if self.preset:
            return preset_generators(self.preset)[0]
        if self.d is None:
            raise ConfigError("need --preset or --d")
        try:
            return FieldSpec(self.d)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def context(self) -> GroupContext:
        if self.generators is not None:
            K = self.field_spec()
            try:
                gens = [Mat2.from_lists(m, K) for m in self.generators]
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            name = "custom"
        elif self.preset:
            K, gens = preset_generators(self.preset)
            name = self.preset
        else:
            raise ConfigError("no group: give --preset or --d with generators")
        try:
            return GroupContext(K, tuple(gens), c_prime=self.c_prime, systole=self.systole,
                                geodesic_count_exponent=self.geodesic_count_exponent, name=name)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def covolume(self) -> float | None:
        if self.v0 is not None:
            return self.v0
        return preset_covolume(self.preset) if self.preset else None

    def prime_ideals(self, K: FieldSpec) -> list[PrimeIdealData]:
        out = []
        for text in self.primes:
            p, _, root = text.partition(":")
            try:
                out.append(find_split_prime_ideal(K, int(p), int(root) if root else None))
            except ValueError as exc:
                raise ConfigError(f"prime {text!r}: {exc}") from None
        return out


# --------------------------------------------------------------------------
# reports


def _ideal_json(P: PrimeIdealData) -> dict:
    return {"p": P.p, "f": P.f, "split_root": P.split_root}


class Report:
    def __init__(self, command: str, cfg: RunConfig):
        self.command = command
        self.cfg = cfg
        self.body: dict = {}
        self.passed = True

    def fail(self):
        self.passed = False

    def as_dict(self) -> dict:
        return {
            "tool": "bianchitower",
            "tool_version": __version__,
            "command": self.command,
            "config": self.cfg.to_dict(),
            "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "status": "PASS" if self.passed else "FAIL",
            "result": self.body,
        }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, CongruenceKind):
        return o.value
    if isinstance(o, PrimeIdealData):
        return _ideal_json(o)
    if isinstance(o, SquareFreeIdeal):
        return [_ideal_json(P) for P in o.factors]
    if dataclasses.is_dataclass(o):
        return dataclasses.asdict(o)
    if isinstance(o, int):
        return int(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


# --------------------------------------------------------------------------
# subcommands


def cmd_primes(cfg: RunConfig, rep: Report) -> str:
    K = cfg.field_spec()
    ps = enumerate_split_primes(K, cfg.limit)
    rep.body = {"split_primes": ps}
    return json.dumps(ps)


def cmd_density(cfg: RunConfig, rep: Report) -> str:
    K = cfg.field_spec()
    pc = prime_counts(K, cfg.limit)
    body = {
        "x": pc.x, "pi": pc.pi_x, "pi_split": pc.pi_split_x, "theta": pc.theta_x,
        "theta_split": pc.theta_split_x, "ratio_pi": pc.pi_split_x / pc.pi_x,
        "ratio_theta": pc.theta_split_x / pc.x, "expected": 1 / K.galois_degree,
    }
    try:
        rows = split_prime_gaps(K, range(1, 16), max(cfg.limit, 10**4))
        body["split_gaps"] = [{"k": r.k, "log_product": r.log_product, "next_prime": r.next_prime,
                               "bound": r.bound, "holds": r.holds} for r in rows]
    except ValueError:
        pass
    rep.body = body
    return _dump(rep.as_dict())


def cmd_enumerate(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    inv = enumerate_geodesics(ctx, cfg.depth, cfg.cutoff, cfg.element_cap)
    rep.body = {"records": inv.count, "product_of_norms_digits": len(str(inv.product_of_norms))}
    return inv.to_csv()


def cmd_select_prime(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    inv = enumerate_geodesics(ctx, cfg.depth, cfg.cutoff, cfg.element_cap)
    strategy = SelectionStrategy(cfg.strategy)
    c3 = None
    if strategy is SelectionStrategy.DIRECT:
        c3 = compute_c3(compute_entry_constants(ctx), ctx).value
    pc = select_admissible_prime(ctx.field, inv, strategy=strategy, c3=c3, length=cfg.cutoff)
    rep.body = {"inventory_records": inv.count, "certificate": pc.as_dict()}
    if pc.within_log_bound is False:
        rep.fail()
    return _dump(rep.as_dict())


def cmd_indices(cfg: RunConfig, rep: Report) -> str:
    K = cfg.field_spec()
    ideals = cfg.prime_ideals(K)
    if not ideals:
        raise ConfigError("indices needs --primes")
    kinds = [CongruenceKind(k) for k in cfg.kinds]
    lines = ["\t".join(["ideal", "norm"] + [k.value for k in kinds])]
    rows = []
    for P in ideals:
        vals = [index_formula(k, P) for k in kinds]
        lines.append("\t".join([str(P), str(P.norm)] + [str(v) for v in vals]))
        rows.append({"ideal": _ideal_json(P), "norm": P.norm, **{k.value: v for k, v in zip(kinds, vals)}})
    if len(ideals) > 1:
        I = SquareFreeIdeal(ideals)
        vals = [index_formula(k, I) for k in kinds]
        lines.append("\t".join(["product", str(I.norm())] + [str(v) for v in vals]))
    rep.body = {"rows": rows}
    return "\n".join(lines)


def cmd_verify_lemma51(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    ideals = cfg.prime_ideals(ctx.field)
    if not ideals:
        raise ConfigError("verify-lemma51 needs --primes")
    I = SquareFreeIdeal(ideals)
    out = []
    for k in cfg.kinds:
        kind = CongruenceKind(k)
        try:
            r = verify_lemma51(ctx, kind, I, cfg.depth, t=cfg.t, cap=cfg.element_cap)
            out.append(dataclasses.asdict(r) | {"kind": kind.value})
        except Lemma51Violation as exc:
            rep.fail()
            b = lemma51_bound(kind, I)
            out.append({"kind": kind.value, "passed": False, "cosh_bound": b.cosh_bound, "witness": str(exc)})
    rep.body = {"ideal": [_ideal_json(P) for P in I.factors], "reports": out}
    return _dump(rep.as_dict())


def cmd_tower_noncompact(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    levels = build_tower_noncompact(ctx, cfg.eps, cfg.levels, cfg.d_index, cfg.covolume(),
                                    closure_cap=cfg.closure_cap)
    if any(not L.certificate.passed for L in levels):
        rep.fail()
    rep.body = {"levels": [L.as_dict() for L in levels]}
    return _dump(rep.as_dict())


def _closed(cfg: RunConfig, ctx: GroupContext):
    strategy = SelectionStrategy(cfg.strategy)
    c3 = compute_c3(compute_entry_constants(ctx), ctx) if strategy is SelectionStrategy.DIRECT else None
    return build_tower_closed(ctx, cfg.eps, cfg.depth, cfg.cutoff, max(cfg.levels, 1), strategy=strategy,
                              c3=c3, cap=cfg.element_cap, closure_cap=cfg.closure_cap)


def cmd_tower_closed(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    levels = _closed(cfg, ctx)
    if any(not L.certificate.passed for L in levels):
        rep.fail()
    rep.body = {"levels": [L.as_dict() for L in levels]}
    return _dump(rep.as_dict())


def cmd_bounds_t14(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    v0 = cfg.covolume()
    if v0 is None:
        raise ConfigError("bounds-t14 needs --v0")
    levels = _closed(cfg, ctx)
    c3 = compute_c3(compute_entry_constants(ctx), ctx)
    reports = [dataclasses.asdict(theorem14_bounds(ctx, L, cfg.eps, c3, v0)) for L in levels]
    if any(not (r["ineq_36"]["holds"] and r["ineq_37"]["holds"]) for r in reports):
        rep.fail()
    rep.body = {"c3": c3.value, "reports": reports}
    return _dump(rep.as_dict())


def cmd_surjectivity(cfg: RunConfig, rep: Report) -> str:
    ctx = cfg.context()
    out = []
    for P in cfg.prime_ideals(ctx.field):
        res = surjectivity_check(ctx, P, cfg.closure_cap)
        orbit = coset_count_orbit(ctx, P)
        out.append({"ideal": _ideal_json(P), "status": res.status.value, "order": res.order,
                    "expected": psl2_order(P.norm), "orbit": orbit})
        if not res.surjective:
            rep.fail()
    rep.body = {"primes": out}
    return _dump(rep.as_dict())


COMMANDS = {
    "primes": cmd_primes,
    "density": cmd_density,
    "enumerate": cmd_enumerate,
    "select-prime": cmd_select_prime,
    "indices": cmd_indices,
    "surjectivity": cmd_surjectivity,
    "verify-lemma51": cmd_verify_lemma51,
    "tower-noncompact": cmd_tower_noncompact,
    "tower-closed": cmd_tower_closed,
    "bounds-t14": cmd_bounds_t14,
}


# --------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="TOML run configuration")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--d", type=int, help="square-free d > 0 for Q(sqrt(-d))")
    p.add_argument("--generators", help="JSON list of [[a, b], [c, d]] matrices")
    p.add_argument("--c-prime", dest="c_prime", type=float)
    p.add_argument("--systole", type=float)
    p.add_argument("--arithmetic", action="store_const", const=1, dest="geodesic_count_exponent",
                   help="use the e^l geodesic count of arithmetic groups")
    p.add_argument("--d-index", dest="d_index", type=int)
    p.add_argument("--v0", type=float, help="base covolume")
    p.add_argument("--eps", type=float)
    p.add_argument("--depth", type=int)
    p.add_argument("--cutoff", type=float)
    p.add_argument("--levels", type=int)
    p.add_argument("--strategy", choices=[s.value for s in SelectionStrategy])
    p.add_argument("--kinds", help="comma list of principal,hecke0,hecke1 or 'all'")
    p.add_argument("--primes", help="comma list of split primes, optionally p:root")
    p.add_argument("--limit", type=int)
    p.add_argument("--t", type=float, help="base point height for verify-lemma51")
    p.add_argument("--closure-cap", dest="closure_cap", type=int)
    p.add_argument("--element-cap", dest="element_cap", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--log-level", default="WARNING")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bianchitower", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_common(sub.add_parser(name))
    rp = sub.add_parser("replay", help="re-run the computation recorded in a JSON report")
    rp.add_argument("report", type=Path)
    rp.add_argument("--output", "-o")
    rp.add_argument("--log-level", default="WARNING")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if ns.config is not None:
        try:
            data = tomllib.loads(ns.config.read_text())
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
    for f in dataclasses.fields(RunConfig):
        v = getattr(ns, f.name, None)
        if v is None:
            continue
        if f.name == "generators":
            try:
                v = json.loads(v)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"--generators is not JSON: {exc}") from None
            data.pop("preset", None)
        elif f.name in ("kinds", "primes"):
            v = [x for x in v.split(",") if x.strip()]
        elif f.name == "preset":
            data.pop("generators", None)
        data[f.name] = v
    return RunConfig.from_dict(data)


def run(command: str, cfg: RunConfig) -> tuple[int, str, Report]:
    rep = Report(command, cfg)
    text = COMMANDS[command](cfg, rep)
    return (EXIT_PASS if rep.passed else EXIT_FAIL), text, rep


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(ns.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.command == "replay":
            try:
                doc = json.loads(ns.report.read_text())
                command, cfg = doc["command"], RunConfig.from_dict(doc["config"])
            except (OSError, KeyError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot replay {ns.report}: {exc}") from None
            if command not in COMMANDS:
                raise ConfigError(f"unknown command {command!r} in report")
        else:
            command, cfg = ns.command, config_from_args(ns)
        code, text, _ = run(command, cfg)
    except (ConfigError, NoObstruction, ClosureCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = ns.output if ns.command == "replay" else ns.output or cfg.output
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
