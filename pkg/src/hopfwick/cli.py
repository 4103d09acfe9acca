"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 validation error (bad input, or a
law check that fails), 3 enumeration guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra import EMPTY, LinComb, Multiset, parse_helem, render_latex, render_text
from .checks import (
    all_passed,
    check_corolla_embedding,
    check_forest_laws,
    check_polynomial_laws,
    check_tree_laws,
)
from .cumulants import MomentSpec, cumulants, moment_functional, moments_from_cumulants, wick, wick_inverse, wick_product
from .distributions import DistributionSpec, SampleTable, moments_from_distribution, moments_from_samples
from .errors import EnumerationGuardError, ValidationError
from .hopf import Functional
from .trees import (
    TreeCharacter,
    centering_character,
    deformed_tree_product,
    extraction_contraction,
    parse_tree,
    tree_product,
)

DEFAULT_DEGREE = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _letters(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", type=Path, help="MomentSpec JSON file")
    p.add_argument("--dist", help='independent laws, e.g. "a=gaussian(0,1); b=poisson(1/2)"')
    p.add_argument("--samples", type=Path, help="CSV of samples with a header row of letters")
    p.add_argument("--max-degree", type=int, help="truncation degree")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "latex", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hopfwick", description="Exact moments, cumulants and Wick polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cumulants", help="cumulants of a moment source")
    _add_source(p)
    _add_format(p)

    p = sub.add_parser("moments", help="moments of a source, or of a cumulant table")
    _add_source(p)
    p.add_argument("--kappa", type=Path, help="cumulant functional JSON; exp-star gives the moments")
    p.add_argument("--alphabet", help="comma-separated letters for --kappa")
    _add_format(p)

    for name, helptext in (("wick", "Wick polynomial of an expression"),
                           ("wick-inverse", "inverse Wick map of an expression")):
        p = sub.add_parser(name, help=helptext)
        _add_source(p)
        p.add_argument("--expr", required=True, help='polynomial, e.g. "a^4" or "a b - 1/2"')
        _add_format(p)

    p = sub.add_parser("deform-mul", help="deformed product of two or more expressions")
    _add_source(p)
    p.add_argument("--expr", action="append", required=True, help="repeat for each factor")
    _add_format(p)

    p = sub.add_parser("hopf-check", help="check the bialgebra laws on H and on forests")
    p.add_argument("--alphabet", default="a,b,c")
    p.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE)
    p.add_argument("--forest-alphabet", default="a,b")
    p.add_argument("--forest-degree", type=int, default=DEFAULT_DEGREE)
    _add_format(p)

    tree = sub.add_parser("tree", help="decorated rooted trees")
    tsub = tree.add_subparsers(dest="tree_command", required=True)
    p = tsub.add_parser("coprod", help="extraction-contraction coproduct of a tree")
    p.add_argument("--tree", required=True)
    _add_format(p)
    p = tsub.add_parser("prod", help="root-merging product, deformed when --character is given")
    p.add_argument("--tree", action="append", required=True, help="repeat for each factor")
    p.add_argument("--character", type=Path, help="tree character JSON")
    _add_format(p)
    p = tsub.add_parser("center", help="centering character of a tree character")
    p.add_argument("--character", type=Path, required=True, help="tree character JSON")
    _add_format(p)
    p = tsub.add_parser("check", help="coproduct laws on trees and the corolla embedding")
    p.add_argument("--max-edges", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--corolla-degree", type=int, default=5)
    _add_format(p)
    return parser


# --- inputs -------------------------------------------------------------------


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def _moment_spec(args, default_degree: int) -> MomentSpec:
    sources = [s for s in ("spec", "dist", "samples") if getattr(args, s) is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --spec, --dist, --samples")
    deg = args.max_degree
    if deg is not None and deg < 1:
        raise ValidationError("--max-degree must be positive")
    if args.spec is not None:
        spec = MomentSpec.from_json(_read_json(args.spec))
        if deg is not None and deg != spec.max_degree:
            if deg > spec.max_degree:
                raise ValidationError(f"spec is truncated at degree {spec.max_degree}, asked for {deg}")
            kept = {A: v for A, v in spec.values.items() if A.degree <= deg}
            spec = MomentSpec(spec.alphabet, deg, kept)
        return spec
    deg = deg if deg is not None else default_degree
    if args.dist is not None:
        return moments_from_distribution(DistributionSpec.parse(args.dist), deg)
    try:
        text = args.samples.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {args.samples}: {exc.strerror}") from None
    return moments_from_samples(SampleTable.from_csv(text), deg)


def _tree_character(path: Path) -> TreeCharacter:
    char, _ = TreeCharacter.from_json(_read_json(path))
    return char


# --- rendering ------------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def render_polynomial(x: LinComb, fmt: str) -> str:
    if fmt == "json":
        return _dump({"terms": {str(k): str(c) for k, c in x.sorted_items()}})
    if fmt == "latex":
        return render_latex(x)
    return render_text(x)


def render_functional(lam: Functional, alphabet, symbol: str, fmt: str) -> str:
    data = lam.to_json(alphabet)
    if fmt == "json":
        return _dump(data)
    lines = []
    for key, value in data["values"].items():
        A = Multiset.parse(key)
        if fmt == "latex":
            v = render_latex(LinComb.basis(EMPTY, Fraction(value)))
            lines.append(f"\\{symbol}({A.latex() or '1'}) = {v}")
        else:
            lines.append(f"{symbol}({key}) = {value}")
    return "\n".join(lines)


def render_tree_tensor(x: LinComb, fmt: str) -> str:
    items = sorted(x.items(), key=lambda kv: (kv[0][0].edges, str(kv[0][0]), str(kv[0][1])))
    if fmt == "json":
        return _dump({"terms": [{"left": str(l), "right": str(r), "coeff": str(c)} for (l, r), c in items]})
    op = " \\otimes " if fmt == "latex" else " ⊗ "
    lines = []
    for (left, right), c in items:
        prefix = "" if c == 1 else f"{c} "
        lines.append(f"{prefix}{left}{op}{right}")
    return "\n".join(lines)


def render_trees(x: LinComb, fmt: str) -> str:
    items = sorted(x.items(), key=lambda kv: (-kv[0].edges, kv[0].encoding))
    if fmt == "json":
        return _dump({"terms": {str(t): str(c) for t, c in items}})
    if not items:
        return "0"
    chunks = []
    for i, (t, c) in enumerate(items):
        mag = -c if c < 0 else c
        body = t.encoding if mag == 1 else f"{mag} {t.encoding}"
        if i == 0:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(chunks)


def render_checks(checks, fmt: str) -> str:
    if fmt == "json":
        return _dump({"checks": [{"name": c.name, "passed": c.passed, "checked": c.checked,
                                  "witness": c.witness} for c in checks]})
    return "\n".join(c.line() for c in checks)


# --- commands ---------------------------------------------------------------------


def _expr_degree(exprs: Sequence[LinComb]) -> int:
    return max(1, sum(max(e.degree, 0) for e in exprs))


def cmd_cumulants(args) -> str:
    spec = _moment_spec(args, DEFAULT_DEGREE)
    kappa = cumulants(moment_functional(spec))
    return render_functional(kappa, spec.alphabet, "kappa", args.format)


def cmd_moments(args) -> str:
    if args.kappa is not None:
        if any(getattr(args, s) is not None for s in ("spec", "dist", "samples")):
            raise UsageError("--kappa cannot be combined with a moment source")
        kappa = Functional.from_json(_read_json(args.kappa))
        if args.alphabet:
            alphabet = _letters(args.alphabet)
        else:
            found = set()
            for key in _read_json(args.kappa)["values"]:
                found.update(Multiset.parse(key).letters)
            alphabet = tuple(sorted(found))
        mu = moments_from_cumulants(kappa)
        return render_functional(mu, alphabet, "mu", args.format)
    spec = _moment_spec(args, DEFAULT_DEGREE)
    return render_functional(moment_functional(spec), spec.alphabet, "mu", args.format)


def cmd_wick(args) -> str:
    x = parse_helem(args.expr)
    mu = moment_functional(_moment_spec(args, _expr_degree([x])))
    result = wick(mu, x) if args.command == "wick" else wick_inverse(mu, x)
    return render_polynomial(result, args.format)


def cmd_deform_mul(args) -> str:
    if len(args.expr) < 2:
        raise UsageError("deform-mul needs at least two --expr")
    xs = [parse_helem(e) for e in args.expr]
    mu = moment_functional(_moment_spec(args, _expr_degree(xs)))
    return render_polynomial(wick_product(mu, *xs), args.format)


def cmd_hopf_check(args) -> tuple[str, bool]:
    checks = check_polynomial_laws(_letters(args.alphabet), args.max_degree)
    checks += check_forest_laws(_letters(args.forest_alphabet), args.forest_degree)
    return render_checks(checks, args.format), all_passed(checks)


def cmd_tree(args) -> tuple[str, bool]:
    if args.tree_command == "coprod":
        return render_tree_tensor(extraction_contraction(parse_tree(args.tree)), args.format), True
    if args.tree_command == "prod":
        trees = [parse_tree(t) for t in args.tree]
        if args.character is None:
            out = trees[0]
            for t in trees[1:]:
                out = tree_product(out, t)
            return render_trees(LinComb.basis(out), args.format), True
        lam = _tree_character(args.character)
        acc = LinComb.basis(trees[0])
        for t in trees[1:]:
            acc = deformed_tree_product(lam, acc, t)
        return render_trees(acc, args.format), True
    if args.tree_command == "center":
        data = _read_json(args.character)
        mu, d = TreeCharacter.from_json(data)
        if mu.max_edges is None:
            raise ValidationError("character JSON needs a numeric max_edges")
        lam = centering_character(mu)
        if args.format == "json":
            return _dump(lam.to_json(d)), True
        lines = [f"lambda({t}) = {v}" for t, v in lam.table(d).items()]
        return "\n".join(lines), True
    checks = check_tree_laws(args.max_edges, args.d)
    letters = [f"x{i}" for i in range(1, args.d + 1)]
    checks += check_corolla_embedding(letters, args.corolla_degree)
    return render_checks(checks, args.format), all_passed(checks)


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Run a command; returns ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "tree":
            out, ok = cmd_tree(args)
        elif args.command == "hopf-check":
            out, ok = cmd_hopf_check(args)
        else:
            handler = {
                "cumulants": cmd_cumulants,
                "moments": cmd_moments,
                "wick": cmd_wick,
                "wick-inverse": cmd_wick,
                "deform-mul": cmd_deform_mul,
            }[args.command]
            out, ok = handler(args), True
    except UsageError as exc:
        return 1, "", f"{parser.format_usage()}{exc}\n"
    except EnumerationGuardError as exc:
        return 3, "", f"guard: {exc}\n"
    except ValidationError as exc:
        return 2, "", f"error: {exc}\n"
    text = out + "\n"
    return (0, text, "") if ok else (2, text, "error: a law check failed\n")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, out, err = run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
