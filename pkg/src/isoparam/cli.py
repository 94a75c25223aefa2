"""Command-line front end.

    isoparam construct --m 4 --k 2 --q 0
    isoparam verify --m 9 --k 1 --samples 100
    isoparam witness --case g6m1-plus
    isoparam classify --m 4 --k 2 --q 2 --format text
    isoparam report --out report.json

Exit status: 0 when every check passes, 1 when any check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import suites
from .clifford import constructible_families
from .curvature import expected_nonnegative
from .errors import IsoparamError, ReportError
from .focal import RegistryCase, Side, block_pair_witness, minus_witness, registry_witness
from .homogeneous import ModelCase, model_witness
from .report import FORMATS, Check, Report, emit
from .topology import HOMOGENEOUS_CASES

COMMANDS = ("construct", "verify", "sample", "curvature", "classify", "witness", "report")
SEED_ENV = "FKM_SEED"

MODEL_WITNESSES = {
    "g6m1-plus": ModelCase.G6M1Plus,
    "g6m1-minus": ModelCase.G6M1Minus,
    "g6m2-plus": ModelCase.G6M2Plus,
    "g6m2-minus": ModelCase.G6M2Minus,
    "g4_22-plus": ModelCase.G4_22_Plus,
    "g4_45-plus": ModelCase.G4_45_Plus,
    "g4_45-minus": ModelCase.G4_45_Minus,
}
REGISTRY_WITNESSES = {c.value: c for c in RegistryCase}
FAMILY_WITNESSES = ("block-pair", "minus")  # need --m/--k

NONNEG_SCANS = [(2, 2, None, Side.PLUS), (6, 1, None, Side.PLUS), (4, 2, 2, Side.PLUS), (1, 4, None, Side.MINUS), (1, 8, None, Side.MINUS)]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m: int | None = None
    k: int | None = None
    q: int | None = None
    case: str | None = None
    theta: float | None = None
    seed: int = 0
    restarts: int = 200
    samples: int = 100
    tol: float = 1e-8
    out: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.restarts < 1 or self.samples < 1:
            raise UsageError("restarts and samples must be positive")
        if self.tol <= 0:
            raise UsageError("tol must be positive")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")

    def need_family(self) -> tuple[int, int, int | None]:
        if self.m is None or self.k is None:
            raise UsageError(f"{self.command} needs --m and --k")
        return self.m, self.k, self.q


def _family_system(cfg: RunConfig):
    m, k, q = cfg.need_family()
    return suites.system_for(m, k, q)


def _cmd_construct(cfg: RunConfig, rep: Report) -> None:
    s = _family_system(cfg)
    rep.add(*suites.construct_checks(s))
    rep.facts.append({"family": s.label(), "m": s.m, "k": s.k, "l": s.l, "m1": s.m1, "m2": s.m2, "q": s.q, "signs": list(s.signs)})


def _cmd_verify(cfg: RunConfig, rep: Report) -> None:
    rep.add(*suites.verify_checks(_family_system(cfg), cfg.samples, cfg.seed, cfg.tol))


def _cmd_sample(cfg: RunConfig, rep: Report) -> None:
    rep.add(*suites.sample_checks(_family_system(cfg), cfg.samples, cfg.seed))


def _cmd_curvature(cfg: RunConfig, rep: Report) -> None:
    if cfg.case is not None and cfg.case.startswith("hyp-"):
        g, m1, m2 = suites.parse_hypersurface_case(cfg.case)
        rep.add(*suites.hypersurface_checks(g, m1, m2, cfg.theta))
        if cfg.theta is not None:
            rep.facts.append(suites.principal_curvature_fact(g, m1, m2, cfg.theta))
        return
    if cfg.case is not None:
        case = MODEL_WITNESSES.get(cfg.case, cfg.case)
        try:
            case = ModelCase(case)
        except ValueError:
            raise UsageError(f"unknown curvature case {cfg.case!r}") from None
        rows, certs = suites.curvature_checks_model(case, cfg.restarts, cfg.seed)
    else:
        rows, certs = suites.curvature_checks_otfkm(_family_system(cfg), cfg.restarts, cfg.seed)
    rep.add(*rows)
    rep.certificates.extend(certs)


def _cmd_classify(cfg: RunConfig, rep: Report) -> None:
    if cfg.case is not None:
        if cfg.case not in HOMOGENEOUS_CASES:
            raise UsageError(f"unknown homogeneous case {cfg.case!r}; expected one of {HOMOGENEOUS_CASES}")
        rep.facts.append(suites.classify_facts(case=cfg.case))
        return
    m, k, q = cfg.need_family()
    rep.facts.append(suites.classify_facts(m=m, k=k, q=q))


def _witness_rows(name: str, cert) -> Check:
    exp = cert.expected if cert.expected is not None else "< 0"
    return Check(f"witness {name}", exp, cert.K, "pass" if cert.verified else "fail", {"source": cert.source})


def _cmd_witness(cfg: RunConfig, rep: Report) -> None:
    case = cfg.case
    if case in MODEL_WITNESSES:
        cert = model_witness(MODEL_WITNESSES[case])
    elif case in REGISTRY_WITNESSES:
        cert = registry_witness(REGISTRY_WITNESSES[case])
    elif case in FAMILY_WITNESSES:
        s = _family_system(cfg)
        cert = block_pair_witness(s) if case == "block-pair" else minus_witness(s, suites.subtask_seed(cfg.seed, "minus-witness"))
    else:
        names = sorted(MODEL_WITNESSES) + sorted(REGISTRY_WITNESSES) + list(FAMILY_WITNESSES)
        raise UsageError(f"witness needs --case, one of {names}")
    rep.add(_witness_rows(case, cert))
    rep.certificates.append(cert.to_dict())


def _cmd_report(cfg: RunConfig, rep: Report) -> None:
    frames_per_family = min(cfg.samples, 10)
    for m, k in constructible_families(9, 4):
        for q in suites.sign_patterns(m, k):
            s = suites.system_for(m, k, q)
            rep.add(*suites.construct_checks(s))
            rep.add(*suites.verify_checks(s, cfg.samples, cfg.seed, cfg.tol))
            rep.add(*suites.sample_checks(s, frames_per_family, cfg.seed))
            for _, c in suites.witness_certificates(s, cfg.seed):
                rep.add(_witness_rows(c.source, c))
    for case in RegistryCase:
        rep.add(_witness_rows(case.value, registry_witness(case)))
    for case in ModelCase:
        rows, certs = suites.curvature_checks_model(case, cfg.restarts, cfg.seed)
        rep.add(*rows)
        rep.certificates.extend(certs)
    for m, k, q, side in NONNEG_SCANS:
        s = suites.system_for(m, k, q)
        _, cert = suites.scan_side(s, side, cfg.restarts, cfg.seed)
        rep.add(Check(f"scan_nonneg {cert.source}", ">= -1e-08", cert.K, "pass" if cert.K >= -1e-8 else "fail"))
        rep.certificates.append(cert.to_dict())
    for m, k in constructible_families(9, 2):
        for q in suites.sign_patterns(m, k):
            s = suites.system_for(m, k, q)
            for side in Side:
                if expected_nonnegative(suites.descriptor(s), side.value):
                    continue
                _, cert = suites.scan_side(s, side, cfg.restarts, cfg.seed)
                rep.add(Check(f"scan_negative {cert.source}", "<= -0.3", cert.K, "pass" if cert.K <= -0.3 else "fail"))
    for g, m1, m2 in suites.hypersurface_cases():
        rep.add(*suites.hypersurface_checks(g, m1, m2))
    rep.add(*suites.classification_roundtrip_checks())
    for case in HOMOGENEOUS_CASES:
        rep.facts.append(suites.classify_facts(case=case))


_DISPATCH = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "curvature": _cmd_curvature,
    "classify": _cmd_classify,
    "witness": _cmd_witness,
    "report": _cmd_report,
}


def run(cfg: RunConfig) -> tuple[Report, int]:
    cfg.validate()
    rep = Report(command=cfg.command, config={k: v for k, v in asdict(cfg).items() if k != "out"})
    t0 = time.perf_counter()
    _DISPATCH[cfg.command](cfg, rep)
    rep.wall_clock_seconds = round(time.perf_counter() - t0, 3)
    return rep, rep.exit_code()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, help="Clifford rank m (so m1 = m)")
    common.add_argument("--k", type=int, help="number of irreducible summands, l = k delta(m)")
    common.add_argument("--q", type=int, help="trace invariant when m = 0 mod 4 (default k, the definite family)")
    common.add_argument("--case", help="named model, witness or hypersurface case (e.g. g6m1-plus, 96, hyp-g4-1-2)")
    common.add_argument("--theta", type=float, help="hypersurface parameter in (0, pi/g)")
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--restarts", type=int, default=200)
    common.add_argument("--seed", type=int, default=None, help=f"base seed (falls back to ${SEED_ENV}, then 0)")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    p = argparse.ArgumentParser(prog="isoparam", description="Isoparametric family verification toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def config_from_args(ns: argparse.Namespace, env=None) -> RunConfig:
    env = os.environ if env is None else env
    seed = ns.seed
    if seed is None:
        raw = env.get(SEED_ENV)
        try:
            seed = int(raw) if raw not in (None, "") else 0
        except ValueError:
            raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None
    return RunConfig(
        command=ns.command,
        m=ns.m,
        k=ns.k,
        q=ns.q,
        case=ns.case,
        theta=ns.theta,
        seed=seed,
        restarts=ns.restarts,
        samples=ns.samples,
        tol=ns.tol,
        out=ns.out,
        format=ns.format,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        rep, code = run(cfg)
        text = emit(rep, cfg.format, cfg.out)
    except ReportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, IsoparamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out is None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
