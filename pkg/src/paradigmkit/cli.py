"""Command-line front end: ``python -m paradigmkit <command> ...``.

Exit codes: 0 success / property holds, 1 property false, 2 parse or
validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import generators
from .bisim import branching_quotient, equivalent, oracle_equivalent
from .lts import AutFormatError, export_aut, export_dot, export_names, import_aut, stats
from .model import validate_model
from .modelfile import ModelSyntaxError, ModelValidationError, parse_model, print_model
from .reduction import (
    ReductionError,
    default_hidden,
    instance_inert_report,
    quotient_detailed,
    reduced_dg,
    reduced_system,
    verify_detailed_preservation,
    verify_reduction,
)
from .translate import (
    TranslationError,
    std_as_lts,
    translate_component,
    translate_component_dg,
    translate_conductor,
    translate_system,
)

OK, FALSE, INVALID, IO_ERROR = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _load(args):
    if getattr(args, "model", None):
        try:
            with open(args.model) as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {args.model}: {exc.strerror}", IO_ERROR)
        return parse_model(text)
    return generators.client_server(args.clients, args.variant)


def _write(args, text, lts=None):
    if not args.output or args.output == "-":
        sys.stdout.write(text)
        return
    try:
        with open(args.output, "w") as fh:
            fh.write(text)
        if lts is not None and lts.names is not None and args.format == "aut":
            with open(args.output + ".names", "w") as fh:
                fh.write(export_names(lts))
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc.strerror}", IO_ERROR)


def _render(args, lts):
    return export_aut(lts) if args.format == "aut" else export_dot(lts)


def _instance(model, args):
    if args.instance:
        return args.instance
    parts = model.participants
    if not parts:
        raise CliError("model has no participant instance", INVALID)
    return parts[0].name


def _action_set(text):
    return frozenset(a.strip() for a in text.split(",") if a.strip())


def cmd_validate(args):
    model = _load(args)
    rep = validate_model(model)
    print(rep)
    return OK if rep.ok else INVALID


def cmd_generate(args):
    _write(args, print_model(generators.client_server(args.clients, args.variant)))
    return OK


def cmd_translate(args):
    model = _load(args)
    what = args.what
    if what == "system":
        if args.reduced:
            hidden = None
            if args.inert_set is not None:
                g = _action_set(args.inert_set)
                hidden = {i.name: g for i in model.participants}
            lts = reduced_system(model, hidden)
        else:
            lts = translate_system(model)
    else:
        inst_name = _instance(model, args)
        inst = model.instance(inst_name)
        if what == "conductor":
            lts = translate_conductor(model.std(inst.std), inst.name)
        elif what == "dg":
            if args.reduced:
                g = (_action_set(args.inert_set) if args.inert_set is not None
                     else default_hidden(model)[inst_name])
                lts = reduced_dg(model, inst_name, g)
            else:
                lts = translate_component_dg(model, inst_name)
        else:
            comp = translate_component(model, inst)
            lts = comp.detailed if what == "detailed" else comp.globals[args.role]
    _write(args, _render(args, lts), lts)
    return OK


def cmd_inert(args):
    model = _load(args)
    rep = instance_inert_report(model, _instance(model, args))
    print(rep)
    return OK


def cmd_quotient(args):
    if args.aut:
        lts = _read_aut(args.aut)
        q, _ = branching_quotient(lts)
        _write(args, _render(args, q), q)
        return OK
    model = _load(args)
    inst = model.instance(_instance(model, args))
    std = model.std(inst.std)
    g = _action_set(args.inert_set) if args.inert_set is not None else default_hidden(model)[inst.name]
    rc = quotient_detailed(std, g)
    for block in rc.std.states:
        print(f"{block} = {{{', '.join(rc.members[block])}}}")
    lts = std_as_lts(rc.std)
    if args.output:
        _write(args, _render(args, lts), lts)
    else:
        for s, a, t in rc.std.transitions:
            print(f"{s} -{a}-> {t}")
    return OK


def _read_aut(path):
    try:
        with open(path) as fh:
            return import_aut(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", IO_ERROR)


def cmd_equiv(args):
    a, b = _read_aut(args.first), _read_aut(args.second)
    if args.oracle:
        try:
            same = oracle_equivalent(a, b)
        except ValueError as exc:
            raise CliError(str(exc), INVALID)
        print("branching bisimilar" if same else "not branching bisimilar")
        return OK if same else FALSE
    verdict = equivalent(a, b)
    print(verdict)
    return OK if verdict else FALSE


def cmd_lemma1(args):
    model = _load(args)
    inst = _instance(model, args)
    g = _action_set(args.inert_set) if args.inert_set is not None else default_hidden(model)[inst]
    check = verify_reduction(model, inst, g)
    print(f"{inst}, hidden {{{', '.join(sorted(g))}}}: reduced {check.left.n_states} states, "
          f"original {check.right.n_states} states; {check.verdict}")
    return OK if check else FALSE


def cmd_lemma2(args):
    model = _load(args)
    inst = _instance(model, args)
    check = verify_detailed_preservation(model, inst)
    print(f"{inst}: {check.verdict}")
    return OK if check else FALSE


def cmd_reduce_system(args):
    model = _load(args)
    hidden = None
    if args.inert_set is not None:
        g = _action_set(args.inert_set)
        hidden = {i.name: g for i in model.participants}
    lts = reduced_system(model, hidden, check=not args.no_check)
    _write(args, _render(args, lts), lts)
    return OK


def bench_rows(clients_max, reduced=False, full_max=6, clients_min=2, variant="basic"):
    """Rows ``(n, full_states, full_trans, red_states, red_trans, seconds)``."""
    rows = []
    for n in range(clients_min, clients_max + 1):
        model = generators.client_server(n, variant)
        t0 = time.perf_counter()
        full = stats(translate_system(model, names=False)) if n <= full_max else None
        red = stats(reduced_system(model, names=False)) if reduced else None
        rows.append((
            n,
            full.states if full else None,
            full.transitions if full else None,
            red.states if red else None,
            red.transitions if red else None,
            time.perf_counter() - t0,
        ))
    return rows


def format_bench(rows, reduced=False):
    def cell(v):
        return "--" if v is None else str(v)

    head = f"{'n':>3} | {'states':>8} {'transitions':>12}"
    if reduced:
        head += f" | {'red.states':>10} {'red.trans':>10}"
    lines = [head, "-" * len(head)]
    for n, fs, ft, rs, rt, _ in rows:
        line = f"{n:>3} | {cell(fs):>8} {cell(ft):>12}"
        if reduced:
            line += f" | {cell(rs):>10} {cell(rt):>10}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def cmd_bench(args):
    rows = bench_rows(args.clients_max, args.reduced, args.full_max, args.clients_min, args.variant)
    sys.stdout.write(format_bench(rows, args.reduced))
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="paradigmkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def model_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("model", nargs="?", help="model file (default: built-in generator)")
        sp.add_argument("--clients", type=int, default=2, help="clients for the built-in model")
        sp.add_argument("--variant", choices=generators.VARIANTS, default="basic")
        sp.add_argument("--instance", help="participant to work on (default: first)")
        sp.add_argument("-o", "--output", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("aut", "dot"), default="aut")
        sp.set_defaults(func=func)
        return sp

    model_cmd("validate", cmd_validate, "validate a model")
    model_cmd("generate", cmd_generate, "print a built-in model as a model file")
    sp = model_cmd("translate", cmd_translate, "translate to an LTS")
    sp.add_argument("--what", choices=("detailed", "global", "dg", "conductor", "system"),
                    default="system")
    sp.add_argument("--role", type=int, default=0, help="role index for --what global")
    sp.add_argument("--reduced", action="store_true", help="use reduced components")
    sp.add_argument("--inert-set", help="comma-separated actions to abstract from")
    model_cmd("inert", cmd_inert, "list globally inert transitions")
    sp = model_cmd("quotient", cmd_quotient, "quotient a detailed STD (or an .aut file)")
    sp.add_argument("--inert-set")
    sp.add_argument("--aut", help="minimize this .aut file instead")
    sp = sub.add_parser("equiv", help="branching bisimilarity of two .aut files")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--oracle", action="store_true", help="use the naive reference checker")
    sp.set_defaults(func=cmd_equiv)
    sp = model_cmd("lemma1", cmd_lemma1, "check a reduction against the original component")
    sp.add_argument("--inert-set")
    model_cmd("lemma2", cmd_lemma2, "check that a role removes no detailed behaviour")
    sp = model_cmd("reduce-system", cmd_reduce_system, "compose the reduced system")
    sp.add_argument("--inert-set")
    sp.add_argument("--no-check", action="store_true", help="skip the soundness check")
    sp = sub.add_parser("bench", help="state-space sizes for growing client counts")
    sp.add_argument("--clients-max", type=int, required=True)
    sp.add_argument("--clients-min", type=int, default=2)
    sp.add_argument("--full-max", type=int, default=6, help="largest n for the unreduced system")
    sp.add_argument("--reduced", action="store_true", help="add reduced-system columns")
    sp.add_argument("--variant", choices=generators.VARIANTS, default="basic")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ModelSyntaxError, ModelValidationError, TranslationError, ReductionError,
            AutFormatError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
