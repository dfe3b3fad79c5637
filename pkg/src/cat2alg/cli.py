"""Command line front end.

Each subcommand reads one or more JSON files and prints a report: JSON by
default, or aligned text with ``--pretty``.  Exit status is 0 when every check
passes, 1 when a check fails (the report carries a witness) and 2 on input
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Callable

import numpy as np

from . import __version__
from . import io
from .errors import Cat2AlgError, InputError, ValidationError
from .exactlin import qzeros

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Report:
    def __init__(self, command: str, digest: str):
        self.command = command
        self.digest = digest
        self.checks = []
        self.values = {}

    def check(self, name: str, ok: bool, witness=None):
        entry = {"name": name, "ok": bool(ok)}
        if not ok and witness is not None:
            entry["witness"] = io.to_json_value(witness)
        self.checks.append(entry)
        return ok

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def as_dict(self) -> dict:
        return {"command": self.command, "input_sha256": self.digest, "ok": self.ok,
                "checks": self.checks, "values": io.to_json_value(self.values)}

    def render_text(self) -> str:
        lines = [f"command: {self.command}", f"input sha256: {self.digest}",
                 f"verdict: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{'pass' if c['ok'] else 'FAIL'}] {c['name']}"
            if "witness" in c:
                line += f"  witness={json.dumps(c['witness'])}"
            lines.append(line)
        for k, v in io.to_json_value(self.values).items():
            lines.append(f"  {k} = {json.dumps(v)}")
        return "\n".join(lines)


def _digest(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        try:
            with open(p, "rb") as fh:
                h.update(fh.read())
        except OSError:
            raise InputError(f"cannot read {p}")
    return h.hexdigest()


# ---------------------------------------------------------------------------
# subcommands

def cmd_check_2group(args, rep: Report):
    G = io.read_2group(io.load(args.files[0]))
    pent = G.check_pentagon()
    rep.check("pentagon", pent.ok, pent.violations[:5])
    rep.values.update(pi0_order=G.n, pi1=G.pi1)
    if pent.ok:
        coh = G.coherence_report()
        for key, bad in coh.items():
            rep.check(key, not bad, bad[:5])
        rep.values["i_x"] = [list(G.element(G.sigma(x)[2])) for x in range(G.n)]


def cmd_tricomm(args, rep: Report):
    G = io.read_2group(io.load(args.files[0]))
    pent = G.check_pentagon()
    if not rep.check("pentagon", pent.ok, pent.violations[:5]):
        return
    triples = args.triple or [[x, y, z] for x in range(G.n) for y in range(G.n) for z in range(G.n)]
    out = []
    for x, y, z in triples:
        if not all(0 <= v < G.n for v in (x, y, z)):
            raise InputError(f"triple {(x, y, z)} out of range")
        try:
            t = G.tricomm(x, y, z)
        except AssertionError as exc:
            rep.check(f"route independence at {(x, y, z)}", False, str(exc))
            continue
        rep.check(f"tricomm{(x, y, z)}", t.obj == 0 and t.self_iso == 0,
                  {"object": t.obj, "self_iso": t.self_iso})
        out.append({"triple": [x, y, z], "label": list(G.element(t.label))})
    rep.values["tricomm"] = out if args.triple else len(out)


def cmd_kernel_2group(args, rep: Report):
    from .twogroup import kernel
    data = io.load(args.files[0])
    G, H = io.read_2group(io._need(data, "source")), io.read_2group(io._need(data, "target"))
    F = io.read_hom(io._need(data, "hom"), G, H)
    try:
        K = kernel(F, G, H)
    except ValidationError as exc:
        rep.check("homomorphism", False, {"message": str(exc), "at": exc.witness})
        return
    rep.check("homomorphism", True)
    rep.values.update(pi0_order=K.pi0.n, pi0_abelian=K.pi0.is_abelian(), pi0_table=K.pi0.table,
                      pi1=K.pi1, coker_f1=K.coker_f1, ker_f0=K.ker_f0)


def cmd_pi(args, rep: Report):
    from .picard import ch_pi
    K = io.read_complex(io.load(args.files[0]))
    p = ch_pi(K)
    rep.values.update(ring=K.ring, pi0=p.pi0, pi1=p.pi1)


def _two_complexes(args):
    if len(args.files) == 2:
        return io.read_complex(io.load(args.files[0])), io.read_complex(io.load(args.files[1]))
    data = io.load(args.files[0])
    return io.read_complex(io._need(data, "K")), io.read_complex(io._need(data, "L"))


def cmd_hom_flat(args, rep: Report):
    from .picard import homology, hom_flat
    K, L = _two_complexes(args)
    H = hom_flat(K, L)
    hm1, h0 = homology(H.complex)
    rep.values.update(dims=[H.complex.n1, H.complex.n0], homology={"-1": hm1, "0": h0})


def cmd_tensor_flat(args, rep: Report):
    from .picard import homology, tensor_flat
    K, L = _two_complexes(args)
    T = tensor_flat(K, L)
    hm1, h0 = homology(T)
    rep.values.update(dims=[T.n1, T.n0], homology={"-1": hm1, "0": h0})


def _report_identities(rep: Report, R):
    by_id = {}
    for v in R.violations:
        by_id.setdefault(v.identity, []).append(v)
    for name in R.checked:
        bad = by_id.get(name, [])
        rep.check(name, not bad, [{"at": list(v.witness), "residual": v.residual} for v in bad[:3]])


def cmd_check_l2(args, rep: Report):
    from .linf2 import check_identities, cohomology
    L = io.read_l2(io.load(args.files[0]))
    R = check_identities(L)
    _report_identities(rep, R)
    rep.values["dims"] = [L.n1, L.n0]
    if R.ok:
        rep.values["homology"] = list(cohomology(L).dims)


def cmd_skewsym(args, rep: Report):
    from .linf2 import check_identities
    from .skewsym import check_pseudo, skew_symmetrize
    P = io.read_pseudo(io.load(args.files[0]))
    R = check_pseudo(P)
    _report_identities(rep, R)
    if R.ok:
        L = skew_symmetrize(P, check=False)
        _report_identities(rep, check_identities(L))
        rep.values["algebra"] = io.write_l2(L)


def cmd_perturb(args, rep: Report):
    from .corpus import random_symmetric
    from .skewsym import check_pseudo, perturb, skew_symmetrize
    data = io.load(args.files[0])
    L = io.read_l2(io._need(data, "algebra") if "algebra" in data else data)
    if "q" in data:
        q = io.sparse_tensor(data["q"], (L.n0, L.n0, L.n1), "q")
    else:
        q = random_symmetric(np.random.default_rng(args.seed), L.n0, L.n1)
    P = perturb(L, q)
    rep.check("pseudo identities", check_pseudo(P).ok)
    rep.check("roundtrip", skew_symmetrize(P, check=False) == L)
    rep.values["pseudo"] = io.write_pseudo(P)


def cmd_hochschild(args, rep: Report):
    from .hochschild.cohomology import bracket_descends, gl_of_modcat, hochschild_summary
    from .linf2 import check_identities
    A = io.read_algebra(io.load(args.files[0]))
    s = hochschild_summary(A)
    rep.check("hh1 agrees with bar complex", s["hh1"] == s["ext1"], [s["hh1"], s["ext1"]])
    rep.check("gl identities", check_identities(gl_of_modcat(A)).ok)
    rep.check("gl homology", s["gl_homology"] == [s["hh0"], s["hh1"]], s["gl_homology"])
    rep.check("bracket descends", bracket_descends(A))
    rep.values.update(s)


def _derivations_from(data, A):
    from .hochschild.cohomology import derivations
    if "derivations" in data:
        return [io.read_derivation(D, A.dim) for D in data["derivations"]]
    if "derivation" in data:
        return [io.read_derivation(data["derivation"], A.dim)]
    return derivations(A)


def cmd_pi_map(args, rep: Report):
    from .hochschild.cohomology import ext1_bimodule, is_derivation
    from .hochschild.extensions import inner_element, is_split, pi_map
    data = io.load(args.files[0])
    A = io.read_algebra(io._need(data, "algebra"))
    ext = ext1_bimodule(A)
    classes = []
    for k, D in enumerate(_derivations_from(data, A)):
        if not rep.check(f"D{k} is a derivation", is_derivation(A, D)):
            continue
        X, c = pi_map(A, D, ext)
        zero = not any(c)
        rep.check(f"D{k}: class zero iff split", zero == is_split(X))
        rep.check(f"D{k}: class zero iff inner", zero == (inner_element(A, D) is not None))
        classes.append(c)
    rep.values.update(ext1_dim=ext.dim, classes=classes)


def cmd_baer(args, rep: Report):
    from .hochschild.cohomology import ext1_bimodule, is_derivation
    from .hochschild.extensions import baer_sum, classify, inverse_extension, is_split, pi_map
    data = io.load(args.files[0])
    A = io.read_algebra(io._need(data, "algebra"))
    ders = _derivations_from(data, A)
    if len(ders) < 2:
        ders = ders + ders
    D1, D2 = ders[0], ders[1]
    for k, D in enumerate((D1, D2)):
        if not rep.check(f"D{k} is a derivation", is_derivation(A, D)):
            return
    ext = ext1_bimodule(A)
    X, c1 = pi_map(A, D1, ext)
    Y, c2 = pi_map(A, D2, ext)
    S = baer_sum(X, Y)
    cs = classify(S, ext)
    rep.check("class of Baer sum is the sum of classes", all(a == b + c for a, b, c in zip(cs, c1, c2)),
              {"sum": cs, "expected": [b + c for b, c in zip(c1, c2)]})
    rep.check("E + (-E) splits", is_split(baer_sum(X, inverse_extension(X))))
    rep.values.update(class1=c1, class2=c2, class_sum=cs, dim_E=S.E.dim)


def cmd_goodness(args, rep: Report):
    from .corpus import random_module
    from .hochschild.squares import check_square, condition_e_square, goodness_square
    data = io.load(args.files[0])
    A = io.read_algebra(io._need(data, "algebra"))
    which = data.get("square", "goodness")
    base = {"goodness": goodness_square, "condition-E": condition_e_square}.get(which)
    if base is None:
        raise InputError(f"unknown square {which!r}")
    sq = base().over(A)
    B = sq.p.source
    rng = np.random.default_rng(args.seed)
    if "modules" in data:
        mods = [io.read_module(m, B) for m in data["modules"]]
    else:
        mods = [random_module(rng, B, data.get("max_dim", 4)) for _ in range(args.cases)]
    for k, M in enumerate(mods):
        r = check_square(sq, M, rng)
        rep.check(f"module {k}: unit", r["unit"], r["dims"])
        rep.check(f"module {k}: counit", r["counit_X"] and r["counit_Y"], r["dims"])
    rep.values.update(square=which, modules=len(mods))


def cmd_dual_comm(args, rep: Report):
    from .hochschild.squares import dual_number_commutator
    data = io.load(args.files[0])
    A = io.read_algebra(io._need(data, "algebra") if "algebra" in data else data)
    ders = _derivations_from(data, A)
    coeffs = []
    for a, D in enumerate(ders):
        for b, Dp in enumerate(ders):
            try:
                prod = dual_number_commutator(A, D, Dp)
                ok = True
            except (AssertionError, ValidationError) as exc:
                ok, prod = False, str(exc)
            rep.check(f"pair ({a},{b})", ok, prod if not ok else None)
            if ok:
                coeffs.append({"pair": [a, b], "e1e2": prod.get((1, 1), qzeros(A.dim, A.dim))})
    rep.values["coefficients"] = coeffs


COMMANDS: dict[str, tuple[Callable, int, str]] = {
    "check-2group": (cmd_check_2group, 1, "pentagon and coherence checks for a skeletal 2-group"),
    "tricomm": (cmd_tricomm, 1, "canonical isomorphism of the triple commutator"),
    "kernel-2group": (cmd_kernel_2group, 1, "kernel of a 2-group homomorphism"),
    "pi": (cmd_pi, 1, "pi0 and pi1 of a two-term complex"),
    "hom-flat": (cmd_hom_flat, 2, "truncated Hom complex over Q"),
    "tensor-flat": (cmd_tensor_flat, 2, "truncated tensor complex over Q"),
    "check-l2": (cmd_check_l2, 1, "identity checker for 2-term L-infinity data"),
    "skewsym": (cmd_skewsym, 1, "skew-symmetrize pseudo data"),
    "perturb": (cmd_perturb, 1, "pseudo data from an algebra and a symmetric q"),
    "hochschild": (cmd_hochschild, 1, "center, HH^1 and the Lie 2-algebra of an algebra"),
    "pi-map": (cmd_pi_map, 1, "extension classes of derivations"),
    "baer": (cmd_baer, 1, "Baer sum of two extensions"),
    "goodness": (cmd_goodness, 1, "unit/counit checks for the fiber square"),
    "dual-comm": (cmd_dual_comm, 1, "dual-number commutators of derivations"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cat2alg", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cat2alg {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    for name, (_, nfiles, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("files", nargs="+" if nfiles == 2 else 1, metavar="FILE")
        s.add_argument("--pretty", action="store_true", help="human-readable text output")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--cases", type=int, default=100)
        if name == "tricomm":
            s.add_argument("--triple", type=int, nargs=3, action="append")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    fn, nfiles, _ = COMMANDS[args.command]
    if len(args.files) > nfiles:
        print(f"error: {args.command} takes at most {nfiles} file(s)", file=sys.stderr)
        return EXIT_INPUT
    try:
        rep = Report(args.command, _digest(args.files))
        fn(args, rep)
    except (InputError, Cat2AlgError) as exc:
        err = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ValidationError) and exc.witness is not None:
            err["witness"] = io.to_json_value(exc.witness)
        print(json.dumps(err, sort_keys=True) if not args.pretty else f"error: {exc}", file=sys.stdout)
        return EXIT_INPUT
    if args.pretty:
        print(rep.render_text())
    else:
        print(json.dumps(rep.as_dict(), sort_keys=True))
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
