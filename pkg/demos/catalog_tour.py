"""
A walk through the whole catalog: every quilt, every pair class, the
orbifold symbols of both members, and two SVG pictures.

    python3 demos/catalog_tour.py [outdir]
"""
import os
import sys

from quiltforge.render import emit_svg, layout_diagram
from quiltforge.seeds import catalog_quilts
from quiltforge.surface import (build_diagram, conway_signature, glue_surface, is_treelike,
                                isometric_by_generator_permutation)

outdir = sys.argv[1] if len(sys.argv) > 1 else "tour_svg"
quilts = catalog_quilts()
print(f"{sum(len(q) for q in quilts)} pair classes in {len(quilts)} quilts\n")
for q in quilts:
    print(f"quilt {q.name}")
    for i, cert in enumerate(q.certificates, 1):
        syms = [conway_signature(glue_surface(build_diagram(t))).symbol
                for t in (cert.left, cert.right)]
        flags = []
        if is_treelike(build_diagram(cert.left)):
            flags.append("treelike")
        if isometric_by_generator_permutation((cert.left, cert.right)):
            flags.append("isometric")
        print(f"  {q.label(i):8s} {syms[0]:22s} {syms[1]:22s} {' '.join(flags)}")

os.makedirs(outdir, exist_ok=True)
for name, idx in (("7", 1), ("21", 1)):
    cert = next(q for q in quilts if q.name == name).certificates[idx - 1]
    for side, t in (("L", cert.left), ("R", cert.right)):
        d = build_diagram(t)
        path = os.path.join(outdir, f"{name}({idx}){side}.svg")
        with open(path, "w") as f:
            f.write(emit_svg(layout_diagram(d), d))
        print("wrote", path)
