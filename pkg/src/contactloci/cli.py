"""Command line orchestration.

Subcommands cover the individual pipeline stages (validate, resolve,
separate, weights, e1, hc, mclean, zeta, lefschetz, check-euler) and the
oracles (oracle-count, oracle-chi, verify-fibration); ``report`` runs the
whole pipeline with cross checks.  Exit codes: 0 success or pass, 1 a
check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import covers as covers_mod
from .curves import resolve_plane_curve, resolve_univariate
from .errors import ContactLociError
from .jets import (
    contact_count,
    export_counts_csv,
    interpolate_chi,
    stratified_count,
    verify_chart_fibration,
)
from .lefschetz import cross_check_euler, lefschetz_number, zeta_factorization
from .model import SncConfiguration, validate_configuration
from .polys import SparsePolynomial, parse_polynomial
from .separation import is_m_separating, separate
from .spectral import (
    contributing_set,
    degeneration_analysis,
    e1_page,
    mclean_relabel,
    rational_gap_analysis,
    render_page_table,
    stratum_dimension,
)
from .weights import AMPLE_NOTE, WeightVector, solve_weights, validate_weights

DEFAULT_PRIME_POOL = (3, 5, 7, 11, 13)


def _add_input_options(parser: argparse.ArgumentParser, need_m: bool = False):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly", help="polynomial expression, e.g. 'x^2 + y^3'")
    group.add_argument("--poly-json", help="path to a sparse-monomial JSON document")
    group.add_argument("--config", help="path to a configuration JSON file")
    if need_m:
        parser.add_argument("--m", type=int, required=True, help="contact order m >= 1")


def _add_weight_options(parser: argparse.ArgumentParser):
    parser.add_argument("--weights", help="JSON map divisor id -> weight, overrides the solver")
    parser.add_argument("--scale", type=int, default=1, help="scale factor applied to the weights")


def _add_format_option(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=("table", "json"), default="table")


def _load_poly(args) -> SparsePolynomial:
    if args.poly is not None:
        poly, _ = parse_polynomial(args.poly)
        return poly
    with open(args.poly_json) as handle:
        return SparsePolynomial.from_json_dict(json.load(handle))


def _load_input(args) -> tuple[SncConfiguration, WeightVector | None, str]:
    """Configuration, optional file-supplied weights, and a description."""
    if args.config is not None:
        with open(args.config) as handle:
            data = json.load(handle)
        cfg = SncConfiguration.from_json_dict(data)
        w = None
        if "weights" in data and data["weights"] is not None:
            w = WeightVector.from_json_dict(data["weights"])
        return cfg, w, f"config:{args.config}"
    poly = _load_poly(args)
    if poly.nvars == 1:
        return resolve_univariate(poly), None, poly.render(("x",))
    cfg, _ = resolve_plane_curve(poly)
    return cfg, None, poly.render()


def _prepare_pipeline(args, m: int):
    """Resolve, separate at m, and choose weights; shared by e1/hc/report."""
    cfg, file_weights, desc = _load_input(args)
    if cfg.ambient_dim == 2:
        sep, records = separate(cfg, m)
    else:
        if not is_m_separating(cfg, m):
            raise ContactLociError(
                f"configuration is not {m}-separating and separation is only "
                "implemented for curves"
            )
        sep, records = cfg, []
    override = getattr(args, "weights", None)
    if override:
        w = WeightVector.from_json_dict(json.loads(override))
    elif file_weights is not None:
        w = file_weights
    else:
        w = solve_weights(sep)
    scale = getattr(args, "scale", 1)
    if scale != 1:
        w = w.scaled(scale)
    if not validate_weights(sep, w):
        raise ContactLociError("the weight vector fails the ampleness constraints")
    return cfg, sep, records, w, desc


def _emit(args, data: dict, table: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(table)


def _hc_table(hc) -> str:
    lines = []
    for s in hc.statuses:
        if s.kind == "exact":
            group = f"Z^{s.rank}" if s.rank != 1 else "Z"
            if s.rank == 0:
                group = "0"
            for t in s.torsion:
                group += f" + Z/{t}"
            suffix = " (graded)" if s.graded_only else ""
            lines.append(f"H_c^{s.degree} = {group}{suffix}")
        elif s.kind == "rational_exact":
            lines.append(f"H_c^{s.degree}: rational rank {s.rank} (integral undetermined)")
        else:
            lines.append(f"H_c^{s.degree}: rational rank in [{s.lo}, {s.hi}]")
    lines.append(f"euler characteristic: {hc.euler}")
    lines.append(
        "degeneration: integral page forced"
        if hc.integral_forced
        else (
            "degeneration: rational window forced"
            if hc.rational_window_forced
            else "degeneration: differentials possible"
        )
    )
    return "\n".join(lines)


def _config_table(cfg: SncConfiguration) -> str:
    lines = [f"ambient_dim {cfg.ambient_dim}, center {cfg.sigma_label}"]
    for d in cfg.divisors:
        bits = [f"m={d.mult}", f"nu={d.disc}"]
        if d.self_int is not None:
            bits.append(f"self={d.self_int}")
        bits.append("exceptional" if d.exceptional else "strict")
        if d.over_sigma:
            bits.append("over-sigma")
        lines.append(f"  {d.label} (id {d.id}): " + ", ".join(bits))
    for c in cfg.cells:
        labels = " . ".join(cfg.divisor(i).label for i in c.ids)
        lines.append(f"  cell {labels}: {c.count} point(s)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommand implementations

def _cmd_validate(args) -> int:
    cfg, _, _ = _load_input(args)
    issues = validate_configuration(cfg)
    data = {"valid": not issues, "issues": [str(i) for i in issues]}
    table = "valid" if not issues else "\n".join(str(i) for i in issues)
    _emit(args, data, table)
    return 0 if not issues else 1


def _cmd_resolve(args) -> int:
    poly = _load_poly(args)
    if poly.nvars == 1:
        cfg = resolve_univariate(poly)
        data = {"configuration": cfg.to_json_dict(), "blowups": []}
        _emit(args, data, _config_table(cfg))
        return 0
    cfg, log = resolve_plane_curve(poly)
    data = {
        "configuration": cfg.to_json_dict(),
        "factors": [{"label": f"D{j + 1}", "poly": text, "mult": e} for j, text, e in log.factors],
        "blowups": [
            {
                "new": f"E{rec.new_index + 1}",
                "site": rec.site,
                "axes": [f"E{i + 1}" for i in rec.axis_indices],
                "strict_mults": [[f"D{j + 1}", mu] for j, mu in rec.strict_mults],
                "mult": rec.mult,
                "disc": rec.disc,
            }
            for rec in log.blowups
        ],
    }
    table = _config_table(cfg) + f"\n{len(log.blowups)} blowup(s)"
    _emit(args, data, table)
    return 0


def _cmd_separate(args) -> int:
    cfg, _, _ = _load_input(args)
    sep, records = separate(cfg, args.m)
    data = {
        "configuration": sep.to_json_dict(),
        "subdivisions": [r.to_json_dict() for r in records],
    }
    table = _config_table(sep) + f"\n{len(records)} subdivision(s)"
    _emit(args, data, table)
    return 0


def _cmd_weights(args) -> int:
    if args.m is not None:
        _, sep, _, w, _ = _prepare_pipeline(args, args.m)
    else:
        cfg, file_weights, _ = _load_input(args)
        sep = cfg
        w = file_weights or solve_weights(cfg)
        if args.scale != 1:
            w = w.scaled(args.scale)
    data = {"weights": w.to_json_dict(), "note": AMPLE_NOTE}
    labels = {d.id: d.label for d in sep.divisors}
    table = "\n".join(f"w[{labels[i]}] = {value}" for i, value in w.entries)
    _emit(args, data, table + f"\n({AMPLE_NOTE})")
    return 0


def _cmd_e1(args) -> int:
    _, sep, _, w, _ = _prepare_pipeline(args, args.m)
    page = e1_page(sep, w, args.m)
    data = {"page": page.to_json_dict(), "euler": page.euler_characteristic()}
    table = render_page_table(page, sep) + f"\neuler characteristic: {page.euler_characteristic()}"
    _emit(args, data, table)
    return 0


def _cmd_hc(args) -> int:
    _, sep, _, w, _ = _prepare_pipeline(args, args.m)
    page = e1_page(sep, w, args.m)
    hc = degeneration_analysis(page)
    data = {"hc": hc.to_json_dict()}
    table = _hc_table(hc)
    if args.gap_analysis:
        gap = rational_gap_analysis(page)
        data["gap_analysis"] = gap
        table += (
            f"\ngap analysis (scale {gap['scale']}): rational ranks "
            f"{gap['rational_ranks']} [{gap['note']}]"
        )
    _emit(args, data, table)
    return 0


def _cmd_mclean(args) -> int:
    _, sep, _, w, _ = _prepare_pipeline(args, args.m)
    page = mclean_relabel(e1_page(sep, w, args.m))
    data = {"page": page.to_json_dict(), "total_shift": page.total_shift}
    table = render_page_table(page, sep) + f"\ntotal degree shift: {page.total_shift}"
    _emit(args, data, table)
    return 0


def _cmd_zeta(args) -> int:
    cfg, _, _ = _load_input(args)
    zeta = zeta_factorization(cfg)
    _emit(args, {"zeta": zeta.to_json_dict(), "rendered": zeta.render()}, zeta.render())
    return 0


def _cmd_lefschetz(args) -> int:
    cfg, _, _ = _load_input(args)
    value = lefschetz_number(cfg, args.m)
    _emit(args, {"m": args.m, "lefschetz": value}, f"Lambda(phi^{args.m}) = {value}")
    return 0


def _cmd_check_euler(args) -> int:
    cfg, sep, _, w, _ = _prepare_pipeline(args, args.m)
    check = cross_check_euler(sep, w, args.m, lefschetz_cfg=cfg)
    verdict = "PASS" if check.passed else "FAIL"
    table = (
        f"page euler = {check.page_euler}, lefschetz = {check.lefschetz}: {verdict}"
    )
    _emit(args, check.to_json_dict(), table)
    return 0 if check.passed else 1


def _pool(args) -> list[int]:
    if args.primes:
        return [int(p) for p in args.primes.split(",")]
    pool = list(DEFAULT_PRIME_POOL)
    if getattr(args, "congruence", None):
        r, mod = (int(x) for x in args.congruence.split(","))
        pool = [q for q in pool if q % mod == r % mod]
    return pool


def _cmd_oracle_count(args) -> int:
    poly = _load_poly(args)
    level = args.level if args.level is not None else args.m
    if args.strata:
        report = stratified_count(poly, args.m, level, args.q, node_cap=args.node_cap)
    else:
        report = contact_count(
            poly, args.m, level, args.q, workers=args.workers, node_cap=args.node_cap
        )
    table = f"count = {report.total} (m={args.m}, level={level}, q={args.q})"
    for orders, n in report.strata:
        table += f"\n  ord {tuple(orders)}: {n}"
    _emit(args, report.to_json_dict(), table)
    return 0


def _cmd_oracle_chi(args) -> int:
    poly = _load_poly(args)
    level = args.level if args.level is not None else args.m
    counts = []
    for q in _pool(args):
        counts.append((q, contact_count(poly, args.m, level, q, node_cap=args.node_cap).total))
    fit = interpolate_chi(counts, args.expected_dim)
    if args.csv:
        export_counts_csv(args.csv, counts)
    data = {"counts": [[q, n] for q, n in counts], "fit": fit.to_json_dict()}
    table = "\n".join([f"q={q}: {n}" for q, n in counts])
    table += f"\nfit: {fit.render()}"
    table += f"\nchi estimate at q=1: {fit.chi}" if fit.conclusive else f"\n{fit.message}"
    _emit(args, data, table)
    return 0 if fit.conclusive else 1


def _cmd_verify_fibration(args) -> int:
    report = verify_chart_fibration(
        args.m, args.level, args.q, args.d, args.nu, node_cap=args.node_cap
    )
    verdict = "PASS" if report.passed else "FAIL"
    table = (
        f"fibers over {report.n_images} images: histogram {dict(report.fiber_histogram)}, "
        f"expected {report.expected_fiber}: {verdict}"
    )
    _emit(args, report.to_json_dict(), table)
    return 0 if report.passed else 1


def build_report(args, m: int) -> dict:
    cfg, sep, records, w, desc = _prepare_pipeline(args, m)
    cset = contributing_set(sep, w, m)
    cover_data = covers_mod.covers_for(sep, cset.ids())
    page = e1_page(sep, w, m, cover_data)
    hc = degeneration_analysis(page)
    zeta = zeta_factorization(cfg)
    check = cross_check_euler(sep, w, m, cover_data, lefschetz_cfg=cfg)

    oracle = None
    oracle_pass = True
    if getattr(args, "primes", None) or getattr(args, "congruence", None):
        if args.config is not None:
            raise ContactLociError("the jet oracle needs a polynomial input, not a configuration")
        poly = _load_poly(args)
        level = args.level if args.level is not None else m
        counts = [
            (q, contact_count(poly, m, level, q, node_cap=args.node_cap).total)
            for q in _pool(args)
        ]
        dims = [stratum_dimension(sep, i, m, jet_level=level) for i in cset.ids()]
        expected_dim = max(dims) if dims else None
        fit = interpolate_chi(counts, expected_dim)
        chi_match = fit.conclusive and fit.chi == check.lefschetz
        if any(n for _, n in counts):
            degree_match = fit.conclusive and fit.degree == expected_dim
        else:
            degree_match = not cset.members  # an empty S_m must mean an empty locus
        oracle_pass = chi_match and degree_match
        oracle = {
            "level": level,
            "counts": [[q, n] for q, n in counts],
            "fit": fit.to_json_dict(),
            "expected_dim": expected_dim,
            "chi_match": chi_match,
            "degree_match": degree_match,
        }

    verdict = check.passed and oracle_pass
    return {
        "input": desc,
        "m": m,
        "configuration": sep.to_json_dict(),
        "subdivisions": [r.to_json_dict() for r in records],
        "weights": w.to_json_dict(),
        "weights_note": AMPLE_NOTE,
        "contributing": cset.to_json_dict(),
        "covers": [cover_data[i].to_json_dict() for i in sorted(cover_data)],
        "page": page.to_json_dict(),
        "hc": hc.to_json_dict(),
        "zeta": {"factors": zeta.to_json_dict(), "rendered": zeta.render()},
        "lefschetz": check.lefschetz,
        "euler_cross_check": check.to_json_dict(),
        "oracle": oracle,
        "verdict": "PASS" if verdict else "FAIL",
    }


def _cmd_report(args) -> int:
    data = build_report(args, args.m)
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        hc = data["hc"]
        lines = [f"input: {data['input']}  m={data['m']}"]
        lines.append(f"weights: {data['weights']} ({data['weights_note']})")
        lines.append(f"zeta: {data['zeta']['rendered']}")
        lines.append(f"lefschetz: Lambda = {data['lefschetz']}")
        for s in hc["statuses"]:
            if s["kind"] == "exact":
                group = "0" if s["rank"] == 0 else ("Z" if s["rank"] == 1 else f"Z^{s['rank']}")
                lines.append(f"H_c^{s['degree']} = {group}")
            else:
                lines.append(f"H_c^{s['degree']}: rank in [{s['lo']}, {s['hi']}] ({s['kind']})")
        lines.append(f"euler: {hc['euler']}")
        check = data["euler_cross_check"]
        lines.append(
            f"euler cross check: page {check['page_euler']} vs lefschetz "
            f"{check['lefschetz']}: {'PASS' if check['passed'] else 'FAIL'}"
        )
        if data["oracle"]:
            fit = data["oracle"]["fit"]
            lines.append(f"oracle counts: {data['oracle']['counts']}")
            lines.append(
                f"oracle fit: {fit['fit']} (chi {fit['chi']}, "
                f"match {data['oracle']['chi_match']})"
            )
        lines.append(f"verdict: {data['verdict']}")
        print("\n".join(lines))
    return 0 if data["verdict"] == "PASS" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contactloci",
        description="contact locus pages, Euler oracles and jet counts from log resolutions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a configuration against the structural invariants")
    _add_input_options(p)
    _add_format_option(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("resolve", help="resolve a plane curve germ by point blowups")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly")
    group.add_argument("--poly-json")
    _add_format_option(p)
    p.set_defaults(func=_cmd_resolve, config=None)

    p = sub.add_parser("separate", help="make a configuration m-separating")
    _add_input_options(p, need_m=True)
    _add_format_option(p)
    p.set_defaults(func=_cmd_separate)

    p = sub.add_parser("weights", help="solve for a relatively ample weight vector")
    _add_input_options(p)
    p.add_argument("--m", type=int, default=None, help="separate at m before solving")
    _add_weight_options(p)
    _add_format_option(p)
    p.set_defaults(func=_cmd_weights)

    helps = {
        "e1": "assemble the first page for the m-th contact locus",
        "hc": "exact values and rank bounds for H_c",
        "mclean": "the page in the Floer-style total grading",
    }
    for name, func, extra in (
        ("e1", _cmd_e1, None),
        ("hc", _cmd_hc, "gap"),
        ("mclean", _cmd_mclean, None),
    ):
        p = sub.add_parser(name, help=helps[name])
        _add_input_options(p, need_m=True)
        _add_weight_options(p)
        _add_format_option(p)
        if extra == "gap":
            p.add_argument("--gap-analysis", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("zeta", help="monodromy zeta function from the resolution data")
    _add_input_options(p)
    _add_format_option(p)
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("lefschetz", help="Lefschetz number of the m-th monodromy iterate")
    _add_input_options(p, need_m=True)
    _add_format_option(p)
    p.set_defaults(func=_cmd_lefschetz)

    p = sub.add_parser("check-euler", help="two-path Euler characteristic cross check")
    _add_input_options(p, need_m=True)
    _add_weight_options(p)
    _add_format_option(p)
    p.set_defaults(func=_cmd_check_euler)

    p = sub.add_parser("oracle-count", help="exact finite-field jet count")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly")
    group.add_argument("--poly-json")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--strata", action="store_true", help="stratify by vanishing orders")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--node-cap", type=int, default=None)
    _add_format_option(p)
    p.set_defaults(func=_cmd_oracle_count, config=None)

    p = sub.add_parser("oracle-chi", help="polynomial fit of counts and chi at q = 1")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly")
    group.add_argument("--poly-json")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--primes", help="comma separated primes, default pool 3,5,7,11,13")
    p.add_argument("--congruence", help="filter the default pool: 'r,mod'")
    p.add_argument("--expected-dim", type=int, default=None)
    p.add_argument("--csv", help="write (q, count) samples to this file")
    p.add_argument("--node-cap", type=int, default=None)
    _add_format_option(p)
    p.set_defaults(func=_cmd_oracle_chi, config=None)

    p = sub.add_parser("verify-fibration", help="check the blowup chart fibration on jets")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--level", "--l", dest="level", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--nu", type=int, default=2)
    p.add_argument("--node-cap", type=int, default=None)
    _add_format_option(p)
    p.set_defaults(func=_cmd_verify_fibration)

    p = sub.add_parser("report", help="full pipeline with cross checks")
    _add_input_options(p, need_m=True)
    _add_weight_options(p)
    p.add_argument("--primes", help="comma separated primes for the oracle")
    p.add_argument("--congruence", help="filter the default pool: 'r,mod'")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--node-cap", type=int, default=None)
    _add_format_option(p)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContactLociError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
