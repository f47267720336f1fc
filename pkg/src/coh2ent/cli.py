"""Command-line interface.

Exit codes: 0 success, 1 input or validation error, 2 numerical or property
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import matrixfile, repro
from .coherence import block_coherence, is_povm_incoherent, povm_coherence
from .convert import convert
from .errors import Coh2EntError, DimensionMismatch, MatrixFileError, ValidationError
from .measure import block_dephase
from .naimark import (
    canonical_extension,
    embed_state,
    fourier_family_extension,
    minimal_rank_one_extension,
    verify_extension,
)

METHODS = ("canonical", "minimal", "fourier")
EXAMPLES = ("example1", "trine", "four-element", "fig2")


def _bits(x: float) -> str:
    return f"{x + 0.0:.7f}"


def _probs(p) -> str:
    return "[" + ", ".join(f"{v + 0.0:.7f}" for v in p) + "]"


def cmd_coherence(args) -> int:
    rho = matrixfile.load_state(args.state)
    if args.projective:
        p, _ = matrixfile.load_measurement(args.projective)
        value = block_coherence(rho, p)
        probs = [np.trace(pi @ rho.mat).real for pi in p]
        free = np.max(np.abs(block_dephase(rho, p).mat - rho.mat)) < 1e-9
        print(f"C_r = {_bits(value)} bits")
        print(f"p = {_probs(probs)}")
        print(f"block-incoherent: {'yes' if free else 'no'}")
        return 0
    povm = matrixfile.load_povm(args.povm)
    report = povm_coherence(rho, povm)
    print(f"C_r = {_bits(report.value)} bits")
    print(f"p = {_probs(report.probabilities)}")
    print(f"POVM-incoherent: {'yes' if is_povm_incoherent(rho, povm) else 'no'}")
    return 0


def _fourier_for(povm):
    d = povm.outcomes
    family, ext = fourier_family_extension(d)
    if povm.dim != 2 or max(np.max(np.abs(e - f)) for e, f in zip(povm, family)) > 1e-9:
        raise ValidationError(f"method 'fourier' applies only to the {d}-outcome Fourier qubit family")
    return ext


def cmd_naimark(args) -> int:
    povm = matrixfile.load_povm(args.povm)
    unitary = None
    if args.method == "canonical":
        ext, kraus = canonical_extension(povm)
        unitary = kraus.unitary()
    elif args.method == "minimal":
        ext = minimal_rank_one_extension(povm)
    else:
        ext = _fourier_for(povm)
    report = verify_extension(povm, ext, trials=args.trials, seed=args.seed)
    if args.out:
        matrixfile.write_document(args.out, matrixfile.extension_document(ext, unitary))
        print(f"wrote {args.out}")
    print(f"method = {args.method}, Naimark dim = {ext.dim}, outcomes = {ext.outcomes}")
    print(f"max probability deviation = {report.max_deviation:.3e} over {report.trials} states (seed {report.seed})")
    print(f"verification: {'pass' if report.passed else 'FAIL'}")
    return 0 if report.passed else 2


def cmd_convert(args) -> int:
    rho = matrixfile.load_state(args.state)
    p, ext = matrixfile.load_measurement(args.projective)
    if ext is not None and rho.dim == ext.source_dim and rho.dim != p.dim:
        rho = embed_state(rho, ext)
    if rho.dim != p.dim:
        raise DimensionMismatch(f"state of dim {rho.dim} vs measurement of dim {p.dim}")
    result = convert(rho, p, args.target_dim)
    print(f"dims = {result.dims[0]} x {result.dims[1]}")
    print(f"C_r = {_bits(result.coherence_input)} bits")
    print(f"E_r = {_bits(result.rel_ent_entanglement)} bits")
    print(f"negativity = {_bits(result.negativity)}")
    if args.out:
        matrixfile.write_document(args.out, matrixfile.matrix_document("state", result.output_state.mat))
        print(f"wrote {args.out}")
    return 0


def _emit_csv(rows, out) -> None:
    if out:
        Path(out).write_text(repro.rows_to_csv(rows))
        print(f"wrote {out}")


def cmd_repro(args) -> int:
    name = args.example
    if name == "example1":
        rows = repro.example1_rows()
        print("a      k  C_r(E)     H[a,1-a]   E_r(S:A)   N(S:A)     S0 purity")
        for r in rows:
            print(f"{r.a:<6g} {r.k}  {_bits(r.coherence)}  {_bits(r.binary_entropy)}  "
                  f"{_bits(r.rel_ent_entanglement)}  {_bits(r.negativity)}  {_bits(r.system_purity)}")
        ok = all(abs(r.system_purity - 1) < 1e-9 and abs(r.coherence - r.binary_entropy) < 1e-8
                 for r in rows)
    elif name == "trine":
        rows = repro.trine_rows()
        print("embed (rho ⊕ 0) into C^3, convert against the Fourier extension, d_A = 3")
        for r in rows:
            print(f"{r.label}: C_r = {_bits(r.coherence)}  E_r = {_bits(r.rel_ent_entanglement)}  "
                  f"N = {_bits(r.negativity)}")
        ok = all(abs(r.rel_ent_entanglement - np.log2(3)) < 1e-8 for r in rows)
    elif name == "four-element":
        rows = repro.four_element_rows()
        print("t        ancilla  C_r(E_a)   E_r(S:A)")
        for r in rows:
            print(f"{r.t:<8.5f} {r.ancilla}        {_bits(r.coherence)}  {_bits(r.rel_ent_entanglement)}")
        ok = all(abs(r.coherence - r.rel_ent_entanglement) < 1e-8 for r in rows)
    else:
        rows = repro.fig2_rows(args.grid)
        peaks = [r for r in rows if abs(r.entanglement_selected - 2) < 1e-9]
        print(f"{len(rows)} rows over t in [0, pi); selected entanglement reaches 2 at "
              f"t = {', '.join(f'{r.t:.5f}' for r in peaks)}")
        ok = all(abs(r.entanglement_selected - max(r.coherence_E0, r.coherence_E1)) < 1e-8 for r in rows)
    _emit_csv(rows, args.out)
    print("check: " + ("pass" if ok else "FAIL"))
    return 0 if ok else 2


def cmd_sweep(args) -> int:
    report = repro.run_sweep(args.dim, args.trials, args.seed)
    print(f"dim = {report.dim}, trials = {report.trials}, seed = {report.seed}")
    print(f"pass {report.passed}/{report.trials} (coherent inputs: {report.coherent})")
    if report.trials:
        print(f"worst |E_r bound - C_r| = {report.worst_deviation:.3e}")
        if report.coherent:
            print(f"smallest negativity on a coherent input = {report.min_positive_negativity:.3e}")
    if report.failures:
        f = report.failures[0]
        print(f"first failure: seed {f.seed} trial {f.trial} ranks {list(f.ranks)}: {f.reason}",
              file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coh2ent",
        description="Block and POVM-based coherence, Naimark extensions and conversion to entanglement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", help="relative-entropy coherence of a state")
    p.add_argument("--state", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--povm")
    group.add_argument("--projective")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("naimark", help="build and verify a Naimark extension")
    p.add_argument("--povm", required=True)
    p.add_argument("--method", choices=METHODS, default="canonical")
    p.add_argument("--out")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_naimark)

    p = sub.add_parser("convert", help="convert block coherence into entanglement")
    p.add_argument("--state", required=True)
    p.add_argument("--projective", required=True,
                   help="projective measurement file or Naimark extension bundle")
    p.add_argument("--target-dim", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("repro", help="reproduce a worked example")
    p.add_argument("example")
    p.add_argument("--out")
    p.add_argument("--grid", type=int, default=repro.DEFAULT_GRID)
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("sweep", help="randomized coherence/entanglement property sweep")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "repro" and args.example not in EXAMPLES:
        print(f"error: unknown example {args.example!r}; choose from {', '.join(EXAMPLES)}",
              file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except Coh2EntError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {MatrixFileError.__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
