"""Single command line entry point with one subcommand group per module.

Exit codes: 0 success, 1 failed check (the witness is printed as JSON),
2 bad input (unknown files, malformed data, violated preconditions, caps).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path

import numpy as np

from . import acceptance, classical, observables, spectral, stone, vn
from . import jsonio
from . import presheaf as presheaf_mod
from .context import glue_section, is_global_section, section_from_operator
from .errors import (CheckFailure, InputError, ObslatError, PreconditionError,
                     ResourceError)
from .vn import TOL, Tolerances


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    fmt: str = "text"
    tol: Tolerances = TOL
    cap: int | None = None
    seed: int = 7
    dot: str | None = None


def _parse_tol(pairs) -> Tolerances:
    if not pairs:
        return TOL
    allowed = {f.name for f in dc_fields(Tolerances)}
    overrides = {}
    for item in pairs:
        if "=" not in item:
            raise InputError("tolerance overrides look like KEY=VALUE",
                             witness=item)
        key, _, val = item.partition("=")
        if key not in allowed:
            raise InputError("unknown tolerance key",
                             witness={"key": key, "known": sorted(allowed)})
        overrides[key] = int(val) if key == "jacobi_sweeps" else float(val)
    return TOL.scaled(**overrides)


def _config(args) -> RunConfig:
    return RunConfig(
        inputs=[],
        fmt=getattr(args, "format", "text"),
        tol=_parse_tol(getattr(args, "tol", None)),
        cap=getattr(args, "cap", None),
        seed=getattr(args, "seed", 7),
        dot=getattr(args, "dot", None))


def _emit(cfg: RunConfig, payload: dict, lines: list[str]) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _b(flag: bool) -> str:
    return "true" if flag else "false"


def _fmt_val(v: float) -> str:
    return f"{v:g}"


def _write_dot(cfg: RunConfig, text: str, lines: list[str]) -> None:
    if cfg.dot:
        Path(cfg.dot).write_text(text, encoding="utf-8")
        lines.append(f"dot written to {cfg.dot}")


# -- lattice ------------------------------------------------------------------------

def cmd_lattice_check(args, cfg: RunConfig) -> int:
    lat = jsonio.load_lattice(args.input)
    dist, dist_w = lat.is_distributive()
    if lat.ortho is not None:
        omod, omod_w = lat.is_orthomodular()
        boolean = lat.is_boolean()
    else:
        omod, omod_w, boolean = None, None, False
    atomistic = lat.is_atomistic()
    payload = {"elements": lat.n, "distributive": dist,
               "distributive_witness": list(dist_w) if dist_w else None,
               "orthomodular": omod,
               "orthomodular_witness": list(omod_w) if omod_w else None,
               "boolean": boolean, "atomistic": atomistic}
    lines = [f"elements:{lat.n}",
             f"distributive:{_b(dist)}"
             + (f" witness:{','.join(dist_w)}" if dist_w else ""),
             "orthomodular:" + ("n/a" if omod is None else _b(omod))
             + (f" witness:{','.join(omod_w)}" if omod_w else ""),
             f"boolean:{_b(boolean)}",
             f"atomistic:{_b(atomistic)}"]
    _write_dot(cfg, lat.hasse_dot(), lines)
    payload["dot"] = cfg.dot
    _emit(cfg, payload, lines)
    return 0


def cmd_lattice_list(args, cfg: RunConfig) -> int:
    names = sorted(jsonio.standard_lattices())
    _emit(cfg, {"lattices": names}, names)
    return 0


# -- stone --------------------------------------------------------------------------

def _ideal_rows(lat, ideals):
    rows = []
    for j in ideals:
        rows.append({"generator": lat.names[j.generator()],
                     "members": j.names()})
    return rows


def cmd_stone(args, cfg: RunConfig, maximal_only: bool) -> int:
    lat = jsonio.load_lattice(args.lattice)
    ideals = (stone.enumerate_quasipoints(lat) if maximal_only
              else stone.enumerate_dual_ideals(lat))
    rows = _ideal_rows(lat, ideals)
    lines = [f"H({r['generator']}): " + ",".join(r["members"]) for r in rows]
    _write_dot(cfg, stone.inclusion_dot(lat), lines)
    _emit(cfg, {"count": len(rows), "ideals": rows, "dot": cfg.dot}, lines)
    return 0


# -- spectral -----------------------------------------------------------------------

def cmd_spectral_eval(args, cfg: RunConfig) -> int:
    fam = jsonio.load_family(args.family)
    e = fam.value_at(args.at)
    name = fam.lattice.names[e]
    _emit(cfg, {"at": args.at, "element": name},
          [f"E({_fmt_val(args.at)}) = {name}"])
    return 0


def cmd_spectral_restrict(args, cfg: RunConfig) -> int:
    fam = jsonio.load_family(args.family)
    lat = fam.lattice
    sub = spectral.restrict_family(fam, lat.index(args.to))
    pairs = [[lam, lat.names[e]] for lam, e in sub.breakpoints]
    lines = [f"{_fmt_val(lam)}: {name}" for lam, name in pairs]
    if args.out:
        jsonio.save_json(args.out, jsonio.family_to_json(sub))
        lines.append(f"written to {args.out}")
    _emit(cfg, {"breakpoints": pairs, "top": lat.names[sub.top]}, lines)
    return 0


def cmd_spectral_spectrum(args, cfg: RunConfig) -> int:
    fam = jsonio.load_family(args.family)
    sp = list(fam.spectrum())
    _emit(cfg, {"spectrum": sp}, [",".join(_fmt_val(v) for v in sp)])
    return 0


# -- obs ----------------------------------------------------------------------------

def cmd_obs_eval(args, cfg: RunConfig) -> int:
    fam = jsonio.load_family(args.family)
    lat = fam.lattice
    names = jsonio.split_ideal_key(args.ideal)
    ideal = stone.cone(lat, [lat.index(nm) for nm in names])
    value = observables.observable_from_spectral(fam, ideal)
    _emit(cfg, {"ideal": ideal.names(), "value": value},
          [f"f(H({lat.names[ideal.generator()]})) = {_fmt_val(value)}"])
    return 0


def cmd_obs_check(args, cfg: RunConfig) -> int:
    f = jsonio.load_table(args.table)
    ok1, w1 = observables.check_intersection_condition(f)
    ok2, w2 = observables.check_upper_semicontinuous(f)
    payload = {"intersection_condition": ok1, "intersection_witness": w1,
               "upper_semicontinuous": ok2, "usc_witness": w2}
    lines = [f"intersection-condition:{_b(ok1)}"
             + ("" if ok1 else f" witness:{json.dumps(w1, sort_keys=True)}"),
             f"upper-semicontinuous:{_b(ok2)}"
             + ("" if ok2 else f" witness:{json.dumps(w2, sort_keys=True)}")]
    _emit(cfg, payload, lines)
    return 0 if ok1 and ok2 else 1


def cmd_obs_reconstruct(args, cfg: RunConfig) -> int:
    f = jsonio.load_table(args.table)
    fam = observables.reconstruct(f)     # raises CheckFailure on bad tables
    lat = fam.lattice
    pairs = [[lam, lat.names[e]] for lam, e in fam.breakpoints]
    lines = [f"{_fmt_val(lam)}: {name}" for lam, name in pairs]
    if args.out:
        jsonio.save_json(args.out, jsonio.family_to_json(fam))
        lines.append(f"written to {args.out}")
    _emit(cfg, {"breakpoints": pairs, "top": lat.names[fam.top]}, lines)
    return 0


# -- vn -----------------------------------------------------------------------------

def cmd_vn_spectral_family(args, cfg: RunConfig) -> int:
    a = vn.check_hermitian(jsonio.load_matrix(args.matrix), cfg.tol)
    fam = vn.spectral_family_of(a, cfg.tol)
    rows = [{"breakpoint": mu, "rank": vn.rank_of_projection(p)}
            for mu, p in zip(fam.breakpoints, fam.projections)]
    lines = [f"{_fmt_val(r['breakpoint'])}: rank {r['rank']}" for r in rows]
    _emit(cfg, {"dim": fam.dim, "steps": rows}, lines)
    return 0


def cmd_vn_order(args, cfg: RunConfig) -> int:
    a = vn.check_hermitian(jsonio.load_matrix(args.a), cfg.tol)
    b = vn.check_hermitian(jsonio.load_matrix(args.b), cfg.tol)
    ab = vn.spectral_leq(a, b, cfg.tol)
    ba = vn.spectral_leq(b, a, cfg.tol)
    _emit(cfg, {"a_leq_b": ab, "b_leq_a": ba},
          [f"A <= B: {_b(ab)}", f"B <= A: {_b(ba)}"])
    return 0


def _load_algebra(ref, tol: Tolerances):
    gens, dim = jsonio.load_generators(ref)
    return vn.subalgebra(gens, dim=dim, tol=tol)


def _matrix_lines(m: np.ndarray) -> list[str]:
    out = []
    for row in np.asarray(m):
        out.append("  ".join(f"{e.real:+.6f}{e.imag:+.6f}i" for e in row))
    return out


def cmd_vn_restrict(args, cfg: RunConfig) -> int:
    alg = _load_algebra(args.algebra, cfg.tol)
    a = vn.check_hermitian(jsonio.load_matrix(args.op), cfg.tol)
    fn = vn.rho_restrict if args.map == "rho" else vn.sigma_restrict
    out = fn(alg, a, cfg.tol)
    lines = _matrix_lines(out)
    if args.out:
        jsonio.save_json(args.out, jsonio.matrix_to_json(out))
        lines.append(f"written to {args.out}")
    _emit(cfg, {"map": args.map, "matrix": jsonio.matrix_to_json(out)}, lines)
    return 0


def cmd_vn_core(args, cfg: RunConfig) -> int:
    alg = _load_algebra(args.algebra, cfg.tol)
    q = vn.check_projection(jsonio.load_matrix(args.proj), cfg.tol)
    core = vn.core_projection(alg, q, cfg.tol)
    support = vn.support_projection(alg, q, cfg.tol)
    lines = ([f"core rank {vn.rank_of_projection(core)}"]
             + _matrix_lines(core)
             + [f"support rank {vn.rank_of_projection(support)}"])
    _emit(cfg, {"core": jsonio.matrix_to_json(core),
                "support": jsonio.matrix_to_json(support)}, lines)
    return 0


# -- classical ----------------------------------------------------------------------

def cmd_classical_induce(args, cfg: RunConfig) -> int:
    space = jsonio.load_space(args.space)
    values = jsonio.load_point_values(args.fn)
    fam = classical.sigma_from_function(space, values)
    pairs = [[lam, space.set_names(mask)] for lam, mask in fam.breakpoints]
    induced = {p: classical.induced_function(fam, p) for p in space.points}
    lines = [f"{_fmt_val(lam)}: {{{','.join(names)}}}"
             for lam, names in pairs]
    lines += [f"f({p}) = {_fmt_val(v)}" for p, v in induced.items()]
    _emit(cfg, {"breakpoints": pairs, "induced": induced}, lines)
    return 0


def cmd_classical_check(args, cfg: RunConfig) -> int:
    if args.family:
        fam = jsonio.load_top_family(args.family)
        ok, witness, report = classical.is_continuous_family(fam)
        payload = {"continuous": ok, "witness": witness, "report": report}
        lines = [f"continuous:{_b(ok)}"
                 + ("" if ok else
                    f" witness:{json.dumps(witness, sort_keys=True)}")]
        _emit(cfg, payload, lines)
        return 0 if ok else 1
    if not (args.space and args.fn):
        raise InputError("need --family or both --space and --fn")
    space = jsonio.load_space(args.space)
    values = jsonio.load_point_values(args.fn)
    ok, witness = classical.is_continuous_function(space, values)
    lines = [f"continuous:{_b(ok)}"
             + ("" if ok else
                f" witness:{json.dumps(witness, sort_keys=True)}")]
    _emit(cfg, {"continuous": ok, "witness": witness}, lines)
    return 0 if ok else 1


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("grid looks like lo:hi:step", witness=text)
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise InputError("grid looks like lo:hi:step", witness=text)
    return lo, hi, step


def cmd_classical_demo(args, cfg: RunConfig) -> int:
    lo, hi, step = _parse_grid(args.grid)
    demo = classical.demo_family(args.family, lo, hi, step)
    fam = demo["family"]
    ok, witness, _ = classical.is_continuous_family(fam)
    rows = []
    mismatches = 0
    for point, want in demo["targets"].items():
        got = classical.induced_function(fam, point)
        rows.append({"point": point, "target": want, "induced": got})
        if got != want:
            mismatches += 1
    lines = [f"kind:{demo['kind']}  points:{len(fam.space.points)}",
             f"continuous:{_b(ok)}"]
    lines += [f"note: {n}" for n in demo["notes"]]
    lines += [f"f({r['point']}) = {_fmt_val(r['induced'])}"
              + ("" if r["induced"] == r["target"]
                 else f"  (target {_fmt_val(r['target'])})")
              for r in rows]
    lines.append(f"mismatches:{mismatches}")
    _emit(cfg, {"kind": demo["kind"], "continuous": ok,
                "continuity_witness": witness, "notes": demo["notes"],
                "table": rows, "mismatches": mismatches}, lines)
    return 0


# -- context ------------------------------------------------------------------------

def cmd_context_glue(args, cfg: RunConfig) -> int:
    dia = jsonio.load_diagram(args.diagram, tol=cfg.tol)
    _, section = jsonio.load_section(args.sections, tol=cfg.tol, dia=dia)
    ok, witness = is_global_section(dia, section)
    if not ok:
        raise CheckFailure("not a global section", witness=witness)
    report = glue_section(dia, section)
    payload = report.summary()
    payload["pool"] = [{"projection": lab, "value": val}
                       for lab, val in zip(report.pool_labels, report.values)]
    lines = [f"contexts:{len(dia.contexts)}  pool:{len(report.pool_labels)}",
             f"commuting-join law:{_b(report.commuting_ok)}",
             f"joint-increasing law:{_b(report.increasing_ok)}"]
    if report.increasing_witness:
        lines.append("  witness:"
                     + json.dumps(report.increasing_witness, sort_keys=True))
    lines.append(f"operator-extendable:{report.extendable}"
                 + f"  ({report.certificate.get('reason')})")
    _emit(cfg, payload, lines)
    return 0


def cmd_context_from_operator(args, cfg: RunConfig) -> int:
    dia = jsonio.load_diagram(args.diagram, tol=cfg.tol)
    a = jsonio.load_matrix(args.op)
    section = section_from_operator(dia, a)
    data = jsonio.section_to_json(dia, section, diagram_ref=args.diagram)
    lines = []
    for cname in sorted(data["values"]):
        for elem, v in sorted(data["values"][cname].items()):
            lines.append(f"{cname}[{elem}] = {_fmt_val(v)}")
    if args.out:
        jsonio.save_json(args.out, data)
        lines.append(f"written to {args.out}")
    _emit(cfg, {"section": data}, lines)
    return 0


# -- presheaf -----------------------------------------------------------------------

def cmd_presheaf_check(args, cfg: RunConfig) -> int:
    ps, meta = jsonio.load_presheaf(args.input)
    laws_ok, laws_witness = presheaf_mod.check_presheaf(ps)
    work_cap = cfg.cap or presheaf_mod.WORK_CAP
    report = presheaf_mod.check_sheaf_condition(ps, work_cap=work_cap)
    payload = {"kind": meta["kind"], "presheaf_laws": laws_ok,
               "laws_witness": laws_witness, "sheaf": report["ok"],
               "existence_failure": report["existence"],
               "uniqueness_failure": report["uniqueness"]}
    lines = [f"presheaf laws:{_b(laws_ok)}"
             + ("" if laws_ok else
                f" witness:{json.dumps(laws_witness, sort_keys=True)}"),
             f"sheaf condition:{_b(report['ok'])}"]
    for key in ("existence", "uniqueness"):
        if report[key]:
            lines.append(f"  {key} failure:"
                         + json.dumps(report[key], sort_keys=True))
    _emit(cfg, payload, lines)
    return 0 if laws_ok and report["ok"] else 1


def cmd_presheaf_sheafify(args, cfg: RunConfig) -> int:
    ps, meta = jsonio.load_presheaf(args.input)
    sheafified, base, masks = presheaf_mod.sheafify(
        ps, cap=cfg.cap or 4096)
    sizes = {base.names[a]: len(sheafified.values_at(a))
             for a in range(base.n)}
    laws_ok, _ = presheaf_mod.check_presheaf(sheafified)
    payload = {"kind": meta["kind"], "quasipoints": len(masks),
               "section_counts": sizes, "presheaf_laws": laws_ok}
    lines = [f"quasipoints:{len(masks)}",
             f"presheaf laws:{_b(laws_ok)}"]
    lines += [f"|S({name})| = {count}"
              for name, count in sorted(sizes.items())]
    _emit(cfg, payload, lines)
    return 0


# -- suite --------------------------------------------------------------------------

def cmd_suite(args, cfg: RunConfig) -> int:
    results = acceptance.run_all(cfg.seed)
    payload = {"seed": cfg.seed,
               "results": [{"number": r.number, "label": r.label,
                            "passed": r.passed, "detail": r.detail}
                           for r in results]}
    lines = acceptance.format_report(results).split("\n")
    _emit(cfg, payload, lines)
    return 0 if all(r.passed for r in results) else 1


# -- wiring -------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tol", action="append", metavar="KEY=VAL")
    p.add_argument("--cap", type=int)
    p.add_argument("--dot", metavar="OUT")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="obslat",
        description="spectral families, observable functions, and contexts "
                    "on finite lattices")
    groups = top.add_subparsers(dest="group", required=True)

    def leaf(group, name, fn, **kw):
        p = group.add_parser(name, **kw)
        _common(p)
        p.set_defaults(handler=fn)
        return p

    g = groups.add_parser("lattice").add_subparsers(dest="command",
                                                    required=True)
    p = leaf(g, "check", cmd_lattice_check)
    p.add_argument("--input", "-i", required=True)
    leaf(g, "list", cmd_lattice_list)

    g = groups.add_parser("stone").add_subparsers(dest="command",
                                                  required=True)
    p = leaf(g, "quasipoints", lambda a, c: cmd_stone(a, c, True))
    p.add_argument("--lattice", "--input", "-i", required=True)
    p = leaf(g, "dual-ideals", lambda a, c: cmd_stone(a, c, False))
    p.add_argument("--lattice", "--input", "-i", required=True)

    g = groups.add_parser("spectral").add_subparsers(dest="command",
                                                     required=True)
    p = leaf(g, "eval", cmd_spectral_eval)
    p.add_argument("--family", required=True)
    p.add_argument("--at", type=float, required=True)
    p = leaf(g, "restrict", cmd_spectral_restrict)
    p.add_argument("--family", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--out")
    p = leaf(g, "spectrum", cmd_spectral_spectrum)
    p.add_argument("--family", required=True)

    g = groups.add_parser("obs").add_subparsers(dest="command", required=True)
    p = leaf(g, "eval", cmd_obs_eval)
    p.add_argument("--family", required=True)
    p.add_argument("--ideal", required=True)
    p = leaf(g, "check", cmd_obs_check)
    p.add_argument("--table", required=True)
    p = leaf(g, "reconstruct", cmd_obs_reconstruct)
    p.add_argument("--table", required=True)
    p.add_argument("--out")

    g = groups.add_parser("vn").add_subparsers(dest="command", required=True)
    p = leaf(g, "spectral-family", cmd_vn_spectral_family)
    p.add_argument("matrix")
    p = leaf(g, "order", cmd_vn_order)
    p.add_argument("a")
    p.add_argument("b")
    p = leaf(g, "restrict", cmd_vn_restrict)
    p.add_argument("--algebra", required=True)
    p.add_argument("--op", required=True)
    p.add_argument("--map", choices=("rho", "sigma"), required=True)
    p.add_argument("--out")
    p = leaf(g, "core", cmd_vn_core)
    p.add_argument("--algebra", required=True)
    p.add_argument("--proj", required=True)

    g = groups.add_parser("classical").add_subparsers(dest="command",
                                                      required=True)
    p = leaf(g, "induce", cmd_classical_induce)
    p.add_argument("--space", required=True)
    p.add_argument("--fn", required=True)
    p = leaf(g, "check-continuity", cmd_classical_check)
    p.add_argument("--space")
    p.add_argument("--fn")
    p.add_argument("--family")
    p = leaf(g, "demo", cmd_classical_demo)
    p.add_argument("--family", required=True,
                   choices=classical.DEMO_KINDS)
    p.add_argument("--grid", default="-2:2:0.25")

    g = groups.add_parser("context").add_subparsers(dest="command",
                                                    required=True)
    p = leaf(g, "glue", cmd_context_glue)
    p.add_argument("--diagram", required=True)
    p.add_argument("--sections", required=True)
    p = leaf(g, "from-operator", cmd_context_from_operator)
    p.add_argument("--op", required=True)
    p.add_argument("--diagram", required=True)
    p.add_argument("--out")

    g = groups.add_parser("presheaf").add_subparsers(dest="command",
                                                     required=True)
    p = leaf(g, "check", cmd_presheaf_check)
    p.add_argument("--input", "-i", required=True)
    p = leaf(g, "sheafify", cmd_presheaf_sheafify)
    p.add_argument("--input", "-i", required=True)

    p = leaf(groups, "suite", cmd_suite)
    return top


def _merge_grid_flag(argv: list[str]) -> list[str]:
    """Fold `--grid -2:2:0.25` into `--grid=-2:2:0.25`; argparse would
    otherwise read the negative lower bound as an unknown option."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--grid" and i + 1 < len(argv) and \
                argv[i + 1].startswith("-") and ":" in argv[i + 1]:
            out.append("--grid=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_grid_flag(list(argv)))
    try:
        cfg = _config(args)
        return args.handler(args, cfg)
    except CheckFailure as exc:
        print(json.dumps({"error": str(exc), "witness": exc.witness},
                         sort_keys=True), file=sys.stderr)
        return 1
    except (InputError, PreconditionError, ResourceError) as exc:
        print(json.dumps({"error": str(exc), "witness": exc.witness},
                         sort_keys=True), file=sys.stderr)
        return 2
    except ObslatError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
