"""
End-to-end pipeline: seeds -> quilts -> certificates, signatures, spectra, pictures.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .perm import InvolutionTriple
from .quilt import Quilt
from .render import StyleConfig, emit_svg, layout_diagram
from .seeds import CATALOG_SIZES, catalog_quilts, seeds_json
from .spectral import BoundaryConditionError, assemble_laplacian, verify_isospectrality
from .surface import (build_diagram, conway_signature, glue_surface, is_treelike,
                      isometric_by_generator_permutation)
from .transplant import DEFAULT_RNG_SEED, TransplantablePair, intertwines

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalogConfig:
    sizes: tuple[int, ...] = CATALOG_SIZES
    rng_seed: int = DEFAULT_RNG_SEED
    spectral: bool = True
    graph_k: int = 2
    graph_count: int = 20
    fem_k: int = 4
    fem_count: int = 15
    tol: float = 1e-8
    render: bool = True
    style: StyleConfig = field(default_factory=StyleConfig)


@dataclass
class Catalog:
    quilts: list[Quilt]
    entries: list[dict]
    failures: list[dict]
    svgs: dict[str, str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"quilts": [{"name": q.name, "classes": len(q),
                            "labels": [q.label(i + 1) for i in range(len(q))]}
                           for q in self.quilts],
                "pairs": self.entries, "failures": self.failures}

    def write(self, outdir: str) -> None:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "catalog.json"), "w") as f:
            json.dump(self.to_json(), f, indent=1, ensure_ascii=False)
            f.write("\n")
        with open(os.path.join(outdir, "seeds.json"), "w") as f:
            json.dump(seeds_json(self.quilts), f, indent=1)
            f.write("\n")
        if self.svgs:
            os.makedirs(os.path.join(outdir, "svg"), exist_ok=True)
            for name, svg in sorted(self.svgs.items()):
                with open(os.path.join(outdir, "svg", name), "w") as f:
                    f.write(svg)


def member_summary(t: InvolutionTriple) -> dict:
    d = build_diagram(t)
    s = glue_surface(d)
    return {"triple": t.to_json(), "treelike": is_treelike(d), "orientable": s.orientable,
            "eulerCharacteristic": s.euler_characteristic,
            "signature": conway_signature(s).to_json()}


def spectral_checks(cert: TransplantablePair, cfg: CatalogConfig) -> tuple[list[dict], list[str]]:
    """Reports plus a list of failure messages."""
    reports, fails = [], []
    orientable = glue_surface(build_diagram(cert.left)).orientable
    runs = [("neumann", "graph", cfg.graph_k, cfg.graph_count),
            ("neumann", "fem", cfg.fem_k, cfg.fem_count),
            ("dirichlet" if orientable else "twisted", "graph", cfg.graph_k, cfg.graph_count)]
    for bc, mode, k, count in runs:
        r = verify_isospectrality(cert, bc, k, count, cfg.tol, mode)
        reports.append(r.to_json())
        if not r.passed:
            fails.append(f"{bc}/{mode} deviation {r.max_rel_deviation:.3g}")
    if not orientable:
        try:
            assemble_laplacian(build_diagram(cert.left), cfg.graph_k, "dirichlet")
            fails.append("plain Dirichlet accepted on a nonorientable diagram")
        except BoundaryConditionError:
            pass
    return reports, fails


def run_catalog(cfg: CatalogConfig = CatalogConfig()) -> Catalog:
    bad = sorted(set(cfg.sizes) - set(CATALOG_SIZES))
    if bad:
        raise ValueError(f"sizes not in the catalog: {bad}")
    quilts = catalog_quilts(cfg.sizes, cfg.rng_seed)
    entries, failures, svgs = [], [], {}
    for q in quilts:
        for i, (cls, cert) in enumerate(zip(q.classes, q.certificates), 1):
            lab = q.label(i)
            problems = []
            if not (intertwines(cert.intertwiner, cert.left, cert.right)
                    and cert.intertwiner.det() != 0):
                problems.append("intertwiner certificate invalid")
            left, right = member_summary(cert.left), member_summary(cert.right)
            entry = {"label": lab, "n": cert.left.n, "left": left, "right": right,
                     "intertwiner": cert.intertwiner.to_json(),
                     "nonisomorphic": cert.nonisomorphic,
                     "treelike": left["treelike"] and right["treelike"],
                     "orientable": left["orientable"],
                     "isometricByRolePermutation":
                         isometric_by_generator_permutation((cert.left, cert.right)),
                     "scale": [1] * cert.left.n}
            if cfg.spectral:
                entry["spectra"], fails = spectral_checks(cert, cfg)
                problems += fails
            if cfg.render:
                for side, t in (("L", cert.left), ("R", cert.right)):
                    d = build_diagram(t)
                    svgs[f"{lab}{side}.svg"] = emit_svg(layout_diagram(d), d, cfg.style)
            entries.append(entry)
            failures += [{"label": lab, "problem": p} for p in problems]
    return Catalog(quilts, entries, failures, svgs)


def verify_catalog_json(data: dict) -> list[dict]:
    """
    Re-check every pair of a written catalog from its stored certificates:
    intertwining identities, nonzero determinant, no point isomorphism.
    """
    failures = []
    for e in data["pairs"]:
        cert = TransplantablePair.from_json({"left": e["left"]["triple"],
                                             "right": e["right"]["triple"],
                                             "intertwiner": e["intertwiner"]})
        if not cert.verify():
            failures.append({"label": e["label"], "problem": "certificate does not verify"})
    return failures


def find_pair(data: dict, label: str) -> Optional[TransplantablePair]:
    for e in data["pairs"]:
        if e["label"] == label:
            return TransplantablePair.from_json({"left": e["left"]["triple"],
                                                 "right": e["right"]["triple"],
                                                 "intertwiner": e["intertwiner"]})
    return None


def quilt_pairs(quilts: Sequence[Quilt]) -> list[tuple[str, TransplantablePair]]:
    return [(q.label(i + 1), cert) for q in quilts for i, cert in enumerate(q.certificates)]
