"""
quiltforge command line.

    quiltforge seeds [--sizes 7,11,13,15,21] -o seeds.json
    quiltforge quilt --seed seeds.json --name 13a -o quilt.json
    quiltforge verify --pair 13a(5) [--bc neumann|dirichlet|twisted] [--k 4] [--count 15]
                      [--tol 1e-8] [--mode fem|graph]
    quiltforge signature --pair 7(3)
    quiltforge render --pair 21(7) -o svg/
    quiltforge catalog --all -o out/

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys

from . import catalog as cat
from .quilt import QuiltError, enumerate_quilt
from .render import StyleConfig, emit_svg, layout_diagram, segment_census
from .seeds import CATALOG_SIZES, catalog_quilts, seeds_from_json, seeds_json
from .spectral import BOUNDARY_CONDITIONS, BoundaryConditionError, verify_isospectrality
from .surface import build_diagram, conway_signature, glue_surface
from .transplant import DEFAULT_RNG_SEED, TransplantablePair, check_transplantable

log = logging.getLogger("quiltforge")

_LABEL = re.compile(r"^(\d+)([a-z]?)\((\d+)\)$")


class UsageError(Exception):
    pass


def _sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")
    bad = [s for s in sizes if s not in CATALOG_SIZES]
    if bad:
        raise argparse.ArgumentTypeError(f"sizes must come from {CATALOG_SIZES}, got {bad}")
    return sizes


def _write_json(obj, path):
    text = json.dumps(obj, indent=1, ensure_ascii=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w") as f:
        f.write(text)


def resolve_pair(target: str, rng_seed: int, catalog_path: str | None = None) -> tuple[str, TransplantablePair]:
    """A label such as ``13a(5)`` or a JSON file holding left/right (and maybe an intertwiner)."""
    m = _LABEL.match(target.replace(" ", ""))
    if m:
        if catalog_path:
            with open(catalog_path) as f:
                pair = cat.find_pair(json.load(f), target)
            if pair is None:
                raise UsageError(f"label {target} not in {catalog_path}")
            return target, pair
        size = int(m.group(1))
        if size not in CATALOG_SIZES:
            raise UsageError(f"no catalog quilts of size {size}")
        name = m.group(1) + m.group(2)
        for q in catalog_quilts([size], rng_seed):
            if q.name == name:
                i = int(m.group(3))
                try:
                    q.label(i)
                except IndexError as e:
                    raise UsageError(str(e))
                return target, q.certificates[i - 1]
        raise UsageError(f"unknown quilt {name}")
    if not os.path.exists(target):
        raise UsageError(f"{target!r} is neither a pair label nor a file")
    with open(target) as f:
        data = json.load(f)
    from .perm import InvolutionTriple

    left = InvolutionTriple.from_json(data["left"])
    right = InvolutionTriple.from_json(data["right"])
    if "intertwiner" in data:
        return os.path.basename(target), TransplantablePair.from_json(data)
    v = check_transplantable(left, right, seed=rng_seed)
    if not v.transplantable:
        raise UsageError(f"pair in {target} is not transplantable ({v.kind})")
    return os.path.basename(target), v.pair


def cmd_seeds(args) -> int:
    quilts = catalog_quilts(args.sizes, args.rng_seed)
    _write_json(seeds_json(quilts), args.output)
    for q in quilts:
        log.info("%s: %d classes", q.name, len(q))
    return 0


def cmd_quilt(args) -> int:
    with open(args.seed) as f:
        seeds = seeds_from_json(json.load(f))
    if args.name not in seeds:
        raise UsageError(f"no seed named {args.name} in {args.seed}")
    try:
        q = enumerate_quilt(seeds[args.name], max_classes=args.max_classes, name=args.name,
                            rng_seed=args.rng_seed)
    except QuiltError as e:
        log.error("%s", e)
        return 1
    _write_json(q.to_json(), args.output)
    return 0


def cmd_verify(args) -> int:
    label, pair = resolve_pair(args.pair, args.rng_seed, args.catalog)
    ok = pair.verify()
    out = {"label": label, "certificate": ok}
    try:
        r = verify_isospectrality(pair, args.bc, args.k, args.count, args.tol, args.mode)
    except BoundaryConditionError as e:
        log.error("%s", e)
        out["spectral"] = {"rejected": str(e)}
        _write_json(out, args.output)
        return 1
    out["spectral"] = r.to_json()
    _write_json(out, args.output)
    return 0 if ok and r.passed else 1


def cmd_signature(args) -> int:
    label, pair = resolve_pair(args.pair, args.rng_seed, args.catalog)
    out = {"label": label}
    for side, t in (("left", pair.left), ("right", pair.right)):
        out[side] = conway_signature(glue_surface(build_diagram(t))).to_json()
    _write_json(out, args.output)
    return 0


def cmd_render(args) -> int:
    label, pair = resolve_pair(args.pair, args.rng_seed, args.catalog)
    style = StyleConfig()
    if args.style:
        with open(args.style) as f:
            style = StyleConfig.from_json(f.read())
    os.makedirs(args.output, exist_ok=True)
    status = 0
    for side, t in (("L", pair.left), ("R", pair.right)):
        d = build_diagram(t)
        lay = layout_diagram(d)
        if not lay.complete:
            status = 1
        svg = emit_svg(lay, d, style)
        path = os.path.join(args.output, f"{label}{side}.svg")
        with open(path, "w") as f:
            f.write(svg)
        log.info("%s: %s", path, segment_census(svg))
    return status


def cmd_catalog(args) -> int:
    sizes = CATALOG_SIZES if args.all or not args.sizes else args.sizes
    cfg = cat.CatalogConfig(sizes=tuple(sizes), rng_seed=args.rng_seed,
                            spectral=not args.no_spectral, render=not args.no_render)
    c = cat.run_catalog(cfg)
    c.write(args.output)
    for f in c.failures:
        log.error("%s: %s", f["label"], f["problem"])
    return 0 if c.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiltforge",
                                description="Transplantable pairs, quilts and their checks.")
    p.add_argument("--rng-seed", type=lambda s: int(s, 0), default=DEFAULT_RNG_SEED)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seeds", help="construct one seed pair per catalog quilt")
    s.add_argument("--sizes", type=_sizes, default=CATALOG_SIZES)
    s.add_argument("-o", "--output", default="seeds.json")
    s.set_defaults(func=cmd_seeds)

    s = sub.add_parser("quilt", help="enumerate the quilt of a seed")
    s.add_argument("--seed", required=True, help="seeds.json")
    s.add_argument("--name", required=True)
    s.add_argument("--max-classes", type=int, default=64)
    s.add_argument("-o", "--output", default="quilt.json")
    s.set_defaults(func=cmd_quilt)

    def pair_args(s):
        s.add_argument("--pair", required=True, help="label like 13a(5) or a pair JSON file")
        s.add_argument("--catalog", help="catalog.json to look labels up in")

    s = sub.add_parser("verify", help="certificates and spectra of one pair")
    pair_args(s)
    s.add_argument("--bc", choices=BOUNDARY_CONDITIONS, default="neumann")
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--count", type=int, default=15)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--mode", choices=("fem", "graph"), default="fem")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("signature", help="orbifold signatures of one pair")
    pair_args(s)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_signature)

    s = sub.add_parser("render", help="SVG diagrams of one pair")
    pair_args(s)
    s.add_argument("--style", help="StyleConfig JSON")
    s.add_argument("-o", "--output", default=".")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("catalog", help="the whole pipeline")
    s.add_argument("--all", action="store_true")
    s.add_argument("--sizes", type=_sizes)
    s.add_argument("--no-spectral", action="store_true")
    s.add_argument("--no-render", action="store_true")
    s.add_argument("-o", "--output", default="out")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, KeyError, json.JSONDecodeError) as e:
        print(f"quiltforge: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
