"""Command-line entry point: ``ttk <command> [options]``.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error, 3 capability limit.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import formats, gallery
from .decomposition import find_nontrivial_homogeneous
from .galaxy import CapabilityError, find_galaxy_ordering, is_galaxy_ordering
from .iso import (
    MAX_CATALOG_N,
    are_isomorphic,
    canonical_form,
    contains_induced,
    enumerate_up_to_iso,
)
from .msequence import (
    Inconclusive,
    MSequenceError,
    ProperDigraph,
    SequentialEmbedding,
    StrongPairCert,
    embed_digraph,
    is_strong,
    match_family,
    plant_gadgets,
    sequential_embed,
    strengthen,
    validate_msequence,
)
from .product import IndexedTournament, ProductError, eh_extension_check, product
from .tournament import TournamentError, complement, density, tr_exact

CATALOG_VERSION = 1


@dataclass
class CommandOutcome:
    code: int
    report: str
    artifacts: list[str] = field(default_factory=list)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit the process
        raise UsageError(message)


def _vertices(text: str) -> list[int]:
    try:
        return [int(t) - 1 for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad vertex list {text!r}") from None


def _fmt_set(vs) -> str:
    return "{" + ",".join(str(v + 1) for v in sorted(vs)) + "}"


def _write(path: str | None, text: str, out: CommandOutcome) -> None:
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
        out.artifacts.append(path)


def cache_dir(args) -> Path:
    return Path(args.cache_dir or os.environ.get("TTK_CACHE_DIR") or ".ttk-cache")


def load_catalog(n: int, root: Path) -> tuple[list, Path]:
    """Catalog for ``n`` from the cache, building and storing it when absent."""
    path = root / f"catalog-v{CATALOG_VERSION}-n{n}.cat"
    if path.exists():
        try:
            m, forms = formats.parse_cat(path.read_text(encoding="utf-8"))
            if m == n:
                return forms, path
        except formats.FormatError:
            pass
    forms = enumerate_up_to_iso(n)
    root.mkdir(parents=True, exist_ok=True)
    path.write_text(formats.dump_cat(n, forms), encoding="utf-8")
    return forms, path


# commands -------------------------------------------------------------------------------


def cmd_enum(args) -> CommandOutcome:
    if not 0 <= args.n <= MAX_CATALOG_N:
        raise CapabilityError(f"catalogs are limited to n <= {MAX_CATALOG_N}")
    forms, path = load_catalog(args.n, cache_dir(args))
    out = CommandOutcome(0, f"n={args.n} classes={len(forms)}\ncatalog {path}\n", [str(path)])
    if args.out:
        _write(args.out, formats.dump_cat(args.n, forms), out)
    return out


def cmd_canon(args) -> CommandOutcome:
    if args.catalog:
        n, forms = formats.parse_cat(Path(args.catalog).read_text(encoding="utf-8"))
        bad = [f.hex for f in forms if canonical_form(f.decode()) != f]
        verdict = "roundtrip-ok" if not bad else "roundtrip-failed"
        lines = [f"{verdict} {len(forms) - len(bad)}/{len(forms)}"] + [f"mismatch {b}" for b in bad]
        return CommandOutcome(0 if not bad else 1, "\n".join(lines) + "\n")
    T, _ = formats.read_trn(args.input)
    form = canonical_form(T)
    return CommandOutcome(0, f"{form.hex or formats.EMPTY_CODE}\nn={T.n}\n")


def cmd_iso(args) -> CommandOutcome:
    A, _ = formats.read_trn(args.a)
    B, _ = formats.read_trn(args.b)
    m = are_isomorphic(A, B)
    if m is None:
        return CommandOutcome(1, "not-isomorphic\n")
    pairs = " ".join(f"{a + 1}->{m[a] + 1}" for a in sorted(m))
    return CommandOutcome(0, f"isomorphic\nmap {pairs}\n")


def cmd_contains(args) -> CommandOutcome:
    H, _ = formats.read_trn(args.pattern)
    T, _ = formats.read_trn(args.host)
    m = contains_induced(H, T)
    if m is None:
        return CommandOutcome(1, "absent\n")
    pairs = " ".join(f"{a + 1}->{m[a] + 1}" for a in sorted(m))
    return CommandOutcome(0, f"present\nmap {pairs}\n")


def cmd_tr(args) -> CommandOutcome:
    T, _ = formats.read_trn(args.input)
    if T.n > 40:
        raise CapabilityError("exact tr is limited to n <= 40")
    size, witness = tr_exact(T)
    shown = " ".join(str(v + 1) for v in witness)
    return CommandOutcome(0, f"tr={size}\nwitness {shown}\n")


def cmd_density(args) -> CommandOutcome:
    T, _ = formats.read_trn(args.input)
    X, Y = _vertices(args.x), _vertices(args.y)
    d = density(T, X, Y)
    return CommandOutcome(0, f"d={d.numerator}/{d.denominator}\n")


def cmd_prime(args) -> CommandOutcome:
    T, _ = formats.read_trn(args.input)
    cert = find_nontrivial_homogeneous(T)
    if cert is None:
        return CommandOutcome(0, "prime\n")
    return CommandOutcome(1, f"not-prime\nhomogeneous {_fmt_set(cert.members)}\n")


def cmd_galaxy(args) -> CommandOutcome:
    T, order = formats.read_trn(args.input)
    if args.order:
        order = tuple(_vertices(args.order))
        cert = is_galaxy_ordering(T, order)
    elif args.declared:
        cert = is_galaxy_ordering(T, order)
    else:
        cert = find_galaxy_ordering(T)
    if cert is None:
        return CommandOutcome(1, "not-a-galaxy\n")
    lines = ["galaxy", "order " + " ".join(str(v + 1) for v in cert.order)]
    for s in cert.stars:
        lines.append(f"star {s.side} center={s.center + 1} leaves="
                     + ",".join(str(p + 1) for p in s.leaves))
    if cert.singletons:
        lines.append("singletons " + " ".join(str(p + 1) for p in cert.singletons))
    lines.append(f"regular={'yes' if cert.regular else 'no'}")
    return CommandOutcome(0, "\n".join(lines) + "\n")


def cmd_complement(args) -> CommandOutcome:
    T, _ = formats.read_trn(args.input)
    text = formats.dump_trn(complement(T))
    out = CommandOutcome(0, text if not args.out else f"wrote {args.out}\n")
    _write(args.out, text, out)
    return out


def _indexed(trn: str, idx: str) -> IndexedTournament:
    T, _ = formats.read_trn(trn)
    return IndexedTournament(T, formats.parse_idx(Path(idx).read_text(encoding="utf-8"), T.n))


def cmd_product(args) -> CommandOutcome:
    P = product(_indexed(args.a, args.a_idx), _indexed(args.b, args.b_idx))
    trn, idx = formats.dump_indexed(P)
    out = CommandOutcome(0, f"n={P.n}\n" + (trn if not args.out else ""))
    if args.out:
        _write(args.out, trn, out)
        _write(str(Path(args.out).with_suffix(".idx")), idx, out)
    return out


def cmd_extension(args) -> CommandOutcome:
    family = [formats.read_trn(p)[0] for p in args.family]
    if not (len(args.f1) == len(args.f2) == len(family)):
        raise UsageError("need one --f1 and one --f2 index file per family member")

    def fmaps(paths: Sequence[str]) -> list[dict[int, int]]:
        maps = []
        for p, H in zip(paths, family):
            idx = formats.parse_idx(Path(p).read_text(encoding="utf-8"), H.n)
            maps.append(dict(enumerate(idx)))
        return maps

    s1 = formats.parse_shp(Path(args.s1).read_text(encoding="utf-8"))
    s2 = formats.parse_shp(Path(args.s2).read_text(encoding="utf-8"))
    rep = eh_extension_check((fmaps(args.f1), s1), (fmaps(args.f2), s2), family)
    if rep.accepted:
        beta = " ".join(f"{s}:{','.join(map(str, sorted(b)))}" for s, b in sorted(rep.beta.items()))
        return CommandOutcome(0, f"extends\nwitness {' '.join(map(str, rep.witness))}\nbeta {beta}\n")
    return CommandOutcome(1, f"does-not-extend\nviolated {rep.violated}\ndetail {rep.detail}\n")


def cmd_mseq_check(args) -> CommandOutcome:
    chi = formats.read_mseq(args.input)
    rep = validate_msequence(chi)
    lines = ["valid" if rep.ok else "invalid"] + rep.lines()
    code = 0 if rep.ok else 1
    if args.strong and rep.ok:
        bad = is_strong(chi)
        lines.append("strong" if not bad else f"not-strong {len(bad)} vertex conditions fail")
        lines += [f"vertex {v + 1} against cell {j} ({kind})" for v, j, kind in bad]
        code = 0 if not bad else 1
    return CommandOutcome(code, "\n".join(lines) + "\n")


def cmd_mseq_strengthen(args) -> CommandOutcome:
    chi = formats.read_mseq(args.input)
    res = strengthen(chi)
    lines = ["strengthened", f"C={res.C}", f"lambda_hat={res.lam_hat}", f"c'={res.c_new}",
             f"lambda'={res.lam_new}", "removed " + " ".join(map(str, res.removed))]
    lines += [f"diagnostic {d}" for d in res.diagnostics]
    out = CommandOutcome(0, "\n".join(lines) + "\n")
    if args.out:
        host = os.path.relpath(Path(args.input).parent / _host_ref(args.input),
                               Path(args.out).resolve().parent)
        _write(args.out, formats.dump_mseq(res.sequence, host), out)
    return out


def _host_ref(mseq_path: str) -> str:
    for line in Path(mseq_path).read_text(encoding="utf-8").splitlines():
        if line.startswith("host "):
            return line[5:].strip()
    raise UsageError("m-sequence file has no host line")


GADGETS = {
    "rp": (gallery.RP_SHAPE, gallery.rp_gadgets, gallery.rp_family),
    "alpha": (gallery.ALPHA_SHAPE, gallery.alpha_gadgets, gallery.alpha_family),
}


def _parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for tok in text.replace(",", " ").split():
        a, sep, b = tok.partition(">")
        if not sep:
            raise UsageError(f"edge {tok!r} must look like 'p>q'")
        edges.append((int(a), int(b)))
    return edges


def _describe(result) -> tuple[int, list[str]]:
    if isinstance(result, StrongPairCert):
        return 0, ["strong-pair", f"A {_fmt_set(result.A)}", f"B {_fmt_set(result.B)}",
                   f"direction {result.direction} c={result.c} mode={result.mode}"]
    if isinstance(result, Inconclusive):
        return 1, ["inconclusive", result.reason]
    if isinstance(result, SequentialEmbedding):
        cells = result.by_cell()
        return 0, ["embedding"] + [f"cell {p} vertex {cells[p] + 1}" for p in sorted(cells)]
    return 0, ["embedding"] + [f"cell {p} vertex {v + 1}"
                               for p, v in sorted(zip(result.digraph.phi, result.vertices))]


def cmd_embed(args) -> CommandOutcome:
    if args.planted:
        shape, gad, fam = GADGETS[args.planted]
        gadgets = gad()
        complete = tuple(int(x) for x in args.complete.split(",")) if args.complete else None
        chi = plant_gadgets(shape, gadgets, args.cell_size, args.seed, complete)
    else:
        if not args.input:
            raise UsageError("embed needs --in or --planted")
        chi = formats.read_mseq(args.input)
        fam = None
        if args.gadgets:
            shape, gad, fam = GADGETS[args.gadgets]
            gadgets = gad()
        elif args.edges:
            gadgets = [ProperDigraph.from_cells(_parse_edges(args.edges), name="D")]
        else:
            raise UsageError("embed needs --gadgets or --edges with --in")
    result = sequential_embed(gadgets, chi) if len(gadgets) > 1 else \
        embed_digraph(gadgets[0], strengthen(chi).sequence)
    code, lines = _describe(result)
    if isinstance(result, SequentialEmbedding) and fam is not None:
        hit = match_family(result.by_cell(), chi.host, fam())
        if hit is not None:
            lines.append(f"induces family member {hit[0] + 1} at cells "
                         + ",".join(map(str, hit[1].cells)))
    out = CommandOutcome(code, "\n".join(lines) + "\n")
    if args.save:
        host_path = Path(args.save).with_suffix(".trn")
        _write(str(host_path), formats.dump_trn(chi.host), out)
        _write(args.save, formats.dump_mseq(chi, host_path.name), out)
    return out


def _build_params(pairs: Sequence[str]) -> dict:
    params: dict = {}
    for item in pairs:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} must look like key=value")
        if key == "G":
            params["G"], order = formats.read_trn(val)
            params.setdefault("order", order)
        elif key == "order":
            params["order"] = tuple(_vertices(val))
        else:
            params[key] = val
    return params


def cmd_build(args) -> CommandOutcome:
    nb = gallery.build_named(args.name, **_build_params(args.param))
    trn = formats.dump_trn(nb.tournament)
    out = CommandOutcome(0, f"{nb.name} n={nb.tournament.n}\n" + ("" if args.out else trn))
    if args.out:
        _write(args.out, trn, out)
        if nb.indexed is not None:
            _write(str(Path(args.out).with_suffix(".idx")), formats.dump_idx(nb.indexed.index), out)
    return out


def cmd_verify(args) -> CommandOutcome:
    ids = [args.claim] if args.claim else sorted(gallery.CLAIMS)
    report_dir = Path(args.out) if args.out else cache_dir(args) / "reports"
    lines, code, paths = [], 0, []
    for cid in ids:
        rep = gallery.verify_claim(cid)
        path = report_dir / f"claim-{rep.claim}.txt"
        report_dir.mkdir(parents=True, exist_ok=True)
        path.write_text(rep.text(), encoding="utf-8")
        paths.append(str(path))
        lines.append(rep.line(str(path)))
        lines.append(f"  {rep.summary}")
        if rep.verdict != "confirmed":
            lines += [f"  {e}" for e in rep.evidence if e.startswith(("offending", "t="))][:20]
            code = 1
    return CommandOutcome(code, "\n".join(lines) + "\n", paths)


def cmd_epsilon(args) -> CommandOutcome:
    if args.pattern in gallery.NAMES:
        H = gallery.build_named(args.pattern).tournament
    else:
        H, _ = formats.read_trn(args.pattern)
    rep = gallery.epsilon_experiment(H, args.n, args.samples, args.seed)
    return CommandOutcome(0 if not rep.failures else 1, "\n".join(rep.lines()) + "\n")


# parser ----------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def common(suppress: bool) -> argparse.ArgumentParser:
        c = _Parser(add_help=False)
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        c.add_argument("--cache-dir", help="catalog cache (default $TTK_CACHE_DIR or ./.ttk-cache)",
                       **kw)
        c.add_argument("--jobs", type=int, help="worker cap; commands currently run sequentially",
                       **({"default": 1} | kw))
        c.add_argument("--seed", type=int, help="seed for randomized commands",
                       **({"default": 0} | kw))
        return c

    p = _Parser(prog="ttk", description="Tournament toolkit", parents=[common(False)])
    shared = common(True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, parents=[shared])
        sp.set_defaults(fn=fn)
        return sp

    sp = add("enum", cmd_enum, "isomorphism classes on n vertices")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp = add("canon", cmd_canon, "canonical form of a tournament, or catalog round-trip")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--in", dest="input")
    g.add_argument("--catalog")
    sp = add("iso", cmd_iso, "isomorphism test")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp = add("contains", cmd_contains, "induced containment")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--host", required=True)
    sp = add("tr", cmd_tr, "largest transitive subtournament")
    sp.add_argument("--in", dest="input", required=True)
    sp = add("density", cmd_density, "directed density d(X,Y)")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--x", required=True, help="1-indexed vertices, comma separated")
    sp.add_argument("--y", required=True)
    sp = add("prime", cmd_prime, "primality")
    sp.add_argument("--in", dest="input", required=True)
    sp = add("galaxy", cmd_galaxy, "galaxy recognition")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--order", help="check this ordering (1-indexed) instead of searching")
    sp.add_argument("--declared", action="store_true", help="check the file's own order line")
    sp = add("complement", cmd_complement, "reverse every edge")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")
    sp = add("product", cmd_product, "product of two indexed tournaments")
    sp.add_argument("--a", required=True)
    sp.add_argument("--a-idx", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--b-idx", required=True)
    sp.add_argument("--out")
    sp = add("extension-check", cmd_extension, "EH-extension check")
    sp.add_argument("--family", nargs="+", required=True)
    sp.add_argument("--f1", nargs="+", required=True)
    sp.add_argument("--s1", required=True)
    sp.add_argument("--f2", nargs="+", required=True)
    sp.add_argument("--s2", required=True)
    sp = add("mseq-check", cmd_mseq_check, "validate an m-sequence")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--strong", action="store_true")
    sp = add("mseq-strengthen", cmd_mseq_strengthen, "filter to a strong m-sequence")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")
    sp = add("embed", cmd_embed, "gadget embedding or strong pair")
    sp.add_argument("--in", dest="input")
    sp.add_argument("--gadgets", choices=sorted(GADGETS))
    sp.add_argument("--edges", help="single digraph on cells, e.g. '5>1,9>3'")
    sp.add_argument("--planted", choices=sorted(GADGETS), help="generate a planted host")
    sp.add_argument("--cell-size", type=int, default=4)
    sp.add_argument("--complete", help="'g,e': leave edge e of gadget g unplanted (0-indexed)")
    sp.add_argument("--save", help="write the planted m-sequence (.mseq plus .trn)")
    sp = add("build", cmd_build, "build a named tournament")
    sp.add_argument("--name", required=True, choices=gallery.NAMES)
    sp.add_argument("--param", nargs="*", default=[], help="key=value; G=<file.trn> for galaxies")
    sp.add_argument("--out")
    sp = add("verify-paper", cmd_verify, "run the claim registry")
    sp.add_argument("--claim", choices=sorted(gallery.CLAIMS))
    sp.add_argument("--out", help="report directory")
    sp = add("epsilon", cmd_epsilon, "exploratory tr-growth experiment")
    sp.add_argument("--pattern", required=True, help="named tournament or .trn file")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--samples", type=int, default=3)
    return p


def run(argv: Sequence[str]) -> CommandOutcome:
    try:
        args = build_parser().parse_args(list(argv))
        return args.fn(args)
    except UsageError as exc:
        return CommandOutcome(2, f"usage error: {exc}\n")
    except CapabilityError as exc:
        return CommandOutcome(3, f"capability error: {exc}\n")
    except (formats.FormatError, TournamentError, ProductError, MSequenceError,
            gallery.GalleryError, OSError, ValueError) as exc:
        return CommandOutcome(2, f"error: {exc}\n")


def main(argv: Sequence[str] | None = None) -> int:
    out = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if out.code in (0, 1) else sys.stderr
    stream.write(out.report)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
