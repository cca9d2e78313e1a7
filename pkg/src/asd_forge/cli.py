"""Command-line front end: ``asd-forge <subcommand> ...``.

Exit status is 0 iff every non-conjectural check that ran passed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import hyp as H
from .asd import suites as S
from .curves import CurveSpec, cm_certify, count_points
from .fgl import asd_ec_check, ec_formal_log, honda_transfer, mu_extract
from .odekit import gamma15_pipeline, zagier_scan
from .padic import is_prime
from .qforms import REGISTRY, eta_form, expand_named
from .report import render, to_json, write_figures

FORMATS = ("json", "csv", "human")


class ConfigError(ValueError):
    pass


def parse_primes(text: str) -> list[int]:
    """'5..50', '5,7,11' or a mix such as '3,5..13'; only primes are kept."""
    out = set()
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                if lo > hi or lo < 2:
                    raise ValueError
                out.update(q for q in range(lo, hi + 1) if is_prime(q))
            else:
                q = int(part)
                if not is_prime(q):
                    raise ConfigError(f"{q} is not prime")
                out.add(q)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed prime range {part!r}; use forms like 5..50 or 5,7,11") from None
    if not out:
        raise ConfigError(f"prime range {text!r} contains no primes")
    return sorted(out)


@dataclass
class RunConfig:
    suites: list = field(default_factory=lambda: list(S.SUITES))
    primes: dict = field(default_factory=dict)  # suite -> list of primes; missing means defaults
    n_max: int | None = None
    threads: int | None = None
    output: str | None = None
    format: str = "human"
    figures: str | None = None

    def validate(self) -> None:
        for name in self.suites:
            if name not in S.SUITES:
                raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(S.SUITES)}")
        if self.n_max is not None and self.n_max <= 0:
            raise ConfigError("nmax must be positive")
        if self.threads is not None and self.threads <= 0:
            raise ConfigError("threads must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")


def load_config(path) -> RunConfig:
    """TOML with top-level keys suites, primes, nmax, threads, output, format, figures.

    ``primes`` is either a range string for every suite or a table keyed by suite.
    """
    try:
        data = tomllib.loads(Path(path).read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    known = {"suites", "primes", "nmax", "threads", "output", "format", "figures"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
    cfg = RunConfig()
    if "suites" in data:
        cfg.suites = list(data["suites"])
    pr = data.get("primes")
    if isinstance(pr, dict):
        cfg.primes = {k: parse_primes(v) for k, v in pr.items()}
    elif pr is not None:
        cfg.primes = {name: parse_primes(pr) for name in cfg.suites}
    cfg.n_max = data.get("nmax")
    cfg.threads = data.get("threads")
    cfg.output = data.get("output")
    cfg.format = data.get("format", cfg.format)
    cfg.figures = data.get("figures")
    return cfg


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg.validate()
    results = []
    for name in cfg.suites:
        results.append(S.run_suite(name, cfg.primes.get(name), cfg.n_max, cfg.threads))
    text = render(results, cfg.format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        out.write(text)
    if cfg.figures:
        for path in write_figures(results, cfg.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


# -- subcommands -----------------------------------------------------------------

def _emit(payload, fmt: str, human: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, default=str) + "\n")
    else:
        out.write(human.rstrip("\n") + "\n")


def _report_exit(reports) -> int:
    return 0 if all(r.passed for r in reports if not r.conjectural) else 1


def cmd_expand(args) -> int:
    s = expand_named(args.form, args.order)
    pairs = [(Fraction(n, s.ram), s.coeff(n)) for n in range(s.offset, s.prec)]
    if args.format == "csv":
        lines = ["exponent,coefficient"] + [f"{e},{c}" for e, c in pairs]
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    payload = {"form": args.form, "ram": s.ram, "precision": str(Fraction(s.prec, s.ram)),
               "coefficients": [[str(e), str(c)] for e, c in pairs]}
    _emit(payload, args.format, ", ".join(str(c) for _, c in pairs))
    return 0


def cmd_pipeline(args) -> int:
    if args.name != "gamma15":
        raise ConfigError("the only pipeline is gamma15")
    b = gamma15_pipeline(args.order)
    head = {k: [str(b.__dict__[k].coeff(n)) for n in range(b.__dict__[k].offset, b.__dict__[k].offset + 8)]
            for k in ("t", "E1", "E2", "f", "g1", "g2", "h1", "h3")}
    payload = {"order": b.order, "elapsed": round(b.elapsed, 3), "checks": b.checks, "leading": head}
    human = [f"gamma15 pipeline, order {b.order}, {b.elapsed:.2f}s"]
    human += [f"  check {k}: {v}" for k, v in b.checks.items()]
    human += [f"  {k}: {', '.join(v)}, ..." for k, v in head.items()]
    _emit(payload, args.format, "\n".join(human))
    return 0 if all(bool(v) for v in b.checks.values()) else 1


def cmd_zagier(args) -> int:
    r = zagier_scan(args.a, args.b, args.lam, args.order)
    payload = {"a": str(r.a), "b": str(r.b), "lambda": str(r.lam), "order": r.order, "integral": r.integral,
               "first_failure": r.first_failure, "coefficients": [str(c) for c in r.coefficients[:20]]}
    human = f"integral to order {r.order}: {r.integral}" + ("" if r.integral else f" (first failure at n = {r.first_failure})")
    _emit(payload, args.format, human + "\n" + ", ".join(payload["coefficients"]))
    return 0


def cmd_fgl(args) -> int:
    curve = CurveSpec.parse(args.curve)
    p = args.prime
    if args.check == "asd-ec":
        rep = asd_ec_check(curve, p, args.order)
        _emit(rep.to_json(), args.format, rep.line())
        return _report_exit([rep])
    if args.check == "mu":
        mu = mu_extract(ec_formal_log(curve, max(p ** (args.depth + 1), 10)), p, args.depth)
        _emit(mu.to_json(), args.format, f"mu = {[str(x) for x in mu.values]} integral={mu.integral}")
        return 0 if mu.integral else 1
    h = honda_transfer(curve, p, args.depth)
    _emit(h.to_json(), args.format, f"{'PASS' if h.passed else 'FAIL'} Honda transfer {curve} p={p}")
    return 0 if h.passed else 1


HYP_CHECKS = (
    "van-hamme", "cdlns", "cde-coster", "coster-van-hamme", "klmsy", "cor4", "dwork", "dwork-ratio",
    "fermat-cubic", "beukers", "stienstra-beukers", "clausen", "theta",
)


def cmd_hyp(args) -> int:
    p, lam, depth = args.prime, args.lam, args.depth
    name = args.check
    if name in ("clausen", "theta"):
        ok = H.clausen_check(args.a if args.a is not None else Fraction(1, 2)) if name == "clausen" else H.theta_identity_check()
        _emit({"check": name, "pass": ok}, args.format, f"{'PASS' if ok else 'FAIL'} {name}")
        return 0 if ok else 1
    if p is None:
        raise ConfigError(f"--prime is required for {name}")
    if name == "dwork-ratio":
        v = H.dwork_unit_ratio(lam if lam is not None else 2, p)
        _emit({"check": name, "p": p, "value": v.to_json()}, args.format, f"{v.v} mod {p}^{v.ring.N}")
        return 0
    if name == "van-hamme":
        reps = [H.van_hamme_check(p)]
    elif name == "cdlns":
        reps = [H.cdlns_check(lam if lam is not None else Fraction(1, 4), args.a if args.a is not None else 6, p, depth or 0)]
    elif name == "cde-coster":
        reps = [H.cde_coster_check(p, depth or 2)]
    elif name == "coster-van-hamme":
        reps = [H.coster_van_hamme_check(args.a if args.a is not None else 4, args.b if args.b is not None else 2, p, depth or 2)]
    elif name == "klmsy":
        reps = [H.klmsy_check(lam if lam is not None else -1, p, depth or 0)]
    elif name == "cor4":
        reps = [H.cor4_check(p)]
    elif name == "dwork":
        reps = [H.dwork_theorem_check(args.kpow, p, depth or 1)]
    elif name == "fermat-cubic":
        reps = [H.fermat_cubic_check(p, depth or 2)]
    elif name == "beukers":
        reps = [H.beukers_check(p)]
    else:
        ap = int(eta_form("eta4_6", p + 2)[p])
        reps = list(H.stienstra_beukers_check(p, ap))
    payload = [r.to_json() for r in reps]
    _emit(payload if len(payload) > 1 else payload[0], args.format, "\n".join(r.line() for r in reps))
    return _report_exit(reps)


def cmd_curve(args) -> int:
    if args.model == "genus2-x5plus2":
        curve = CurveSpec.genus2()
    elif args.model in ("legendre", "tilde"):
        if args.lam is None:
            raise ConfigError(f"--lambda is required for the {args.model} model")
        curve = CurveSpec(args.model, (args.lam,))
    else:
        if args.a is None or args.b is None:
            raise ConfigError(f"--a and --b are required for the {args.model} model")
        curve = CurveSpec(args.model, (args.a, args.b))
    payload = {}
    lines = []
    if args.prime is not None:
        data = count_points(curve, args.prime)
        payload["frobenius"] = data.to_json()
        lines.append(f"{curve} p={args.prime}: a_p={data.trace} ordinary={data.ordinary}")
        if args.charpoly:
            lines.append(f"charpoly coefficients: {list(data.charpoly)}")
    if args.cm:
        cert = cm_certify(curve)
        payload["cm"] = cert.to_json()
        lines.append(f"CM certified: {cert.certified} (D = {cert.discriminant})")
    _emit(payload, args.format, "\n".join(lines) or str(curve))
    return 0


def _suite_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig(suites=[])
    if getattr(args, "name", None):
        cfg.suites = [args.name]
    elif getattr(args, "name_list", None):
        cfg.suites = [x.strip() for x in args.name_list.split(",") if x.strip()]
    elif not cfg.suites:
        cfg.suites = list(S.SUITES)
    if args.primes:
        pr = parse_primes(args.primes)
        cfg.primes = {n: pr for n in cfg.suites}
    if args.nmax is not None:
        cfg.n_max = args.nmax
    if args.threads is not None:
        cfg.threads = args.threads
    if args.format:
        cfg.format = args.format
    return cfg


def cmd_suite(args) -> int:
    cfg = _suite_config(args)
    if args.json:
        cfg.validate()
        results = [S.run_suite(n, cfg.primes.get(n), cfg.n_max, cfg.threads) for n in cfg.suites]
        Path(args.json).write_text(to_json(results))
        sys.stdout.write(render(results, cfg.format if args.format else "human"))
        return 0 if all(r.passed for r in results) else 1
    if args.output:
        cfg.output = args.output
    return run(cfg)


def cmd_report(args) -> int:
    cfg = _suite_config(args)
    cfg.validate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = [S.run_suite(n, cfg.primes.get(n), cfg.n_max, cfg.threads) for n in cfg.suites]
    stamp = None if args.no_timestamp else datetime.now(timezone.utc).isoformat(timespec="seconds")
    (out / "report.json").write_text(to_json(results, stamp))
    (out / "report.csv").write_text(render(results, "csv"))
    figs = write_figures(results, out)
    sys.stdout.write(render(results, "human"))
    for path in [out / "report.json", out / "report.csv", *figs]:
        print(f"wrote {path}")
    return 0 if all(r.passed for r in results) else 1


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asd-forge", description="Exact checks of ASD-type congruences.")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, default="human"):
        p.add_argument("--format", choices=FORMATS, default=default)
        p.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")

    p = sub.add_parser("expand", help="q-expansion of a named form")
    p.add_argument("--form", required=True, choices=sorted(REGISTRY))
    p.add_argument("--order", type=int, required=True, help="number of integral q-powers")
    fmt(p)
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("pipeline", help="the Gamma^1(5) ODE pipeline")
    p.add_argument("name", choices=["gamma15"])
    p.add_argument("--order", type=int, default=200, help="order in q^(1/5), at least 40")
    fmt(p)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("zagier", help="integrality scan of the Zagier recursion")
    p.add_argument("--a", type=Fraction, required=True)
    p.add_argument("--b", type=Fraction, required=True)
    p.add_argument("--lambda", dest="lam", type=Fraction, required=True)
    p.add_argument("--order", type=int, default=100)
    fmt(p)
    p.set_defaults(fn=cmd_zagier)

    p = sub.add_parser("fgl", help="formal group checks for a curve")
    p.add_argument("--curve", required=True, help="e.g. short-weierstrass:1,0 or legendre:2")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--check", choices=["asd-ec", "mu", "honda"], default="asd-ec")
    p.add_argument("--order", type=int, default=400, help="index bound for asd-ec")
    p.add_argument("--depth", type=int, default=2)
    fmt(p)
    p.set_defaults(fn=cmd_fgl)

    p = sub.add_parser("hyp", help="hypergeometric and binomial supercongruences")
    p.add_argument("--check", required=True, choices=HYP_CHECKS)
    p.add_argument("--prime", type=int)
    p.add_argument("--lambda", dest="lam", type=Fraction)
    p.add_argument("--a", type=Fraction)
    p.add_argument("--b", type=Fraction)
    p.add_argument("--depth", type=int)
    p.add_argument("--kpow", type=int, default=1, choices=[1, 2, 3])
    fmt(p)
    p.set_defaults(fn=cmd_hyp)

    p = sub.add_parser("curve", help="point counts, Frobenius and CM certificates")
    p.add_argument("--model", required=True, choices=["legendre", "tilde", "short-weierstrass", "general-cubic", "genus2-x5plus2"])
    p.add_argument("--lambda", dest="lam", type=Fraction)
    p.add_argument("--a", type=Fraction)
    p.add_argument("--b", type=Fraction)
    p.add_argument("--prime", type=int)
    p.add_argument("--charpoly", action="store_true")
    p.add_argument("--cm", action="store_true", help="attempt a CM certificate")
    fmt(p)
    p.set_defaults(fn=cmd_curve)

    for name, fn, helptext in (("suite", cmd_suite, "run one verification suite"),
                               ("report", cmd_report, "run suites and write JSON, CSV and figures")):
        p = sub.add_parser(name, help=helptext)
        if name == "suite":
            p.add_argument("name", choices=list(S.SUITES))
            p.add_argument("--json", metavar="PATH", help="also write the JSON report here")
            p.add_argument("--output", metavar="PATH")
        else:
            p.add_argument("--suites", dest="name_list", help="comma separated; default all")
            p.add_argument("--out", default="asd_report")
            p.add_argument("--no-timestamp", action="store_true")
        p.add_argument("--primes", help="e.g. 5..50 or 5,7,11")
        p.add_argument("--nmax", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--format", choices=FORMATS)
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"asd-forge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
