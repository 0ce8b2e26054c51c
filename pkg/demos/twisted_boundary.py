"""
Boundary conditions on gluings with odd cycles.

Neumann isospectrality holds for every transplantable pair.  Plain
Dirichlet needs an orientable gluing; on a nonorientable one the sign flip
across orientation-reversing edges has no global meaning, and the tool
refuses.  Passing to the orientation double cover and keeping the part
that is odd under the deck swap gives a Dirichlet problem that transplants.

    python3 demos/twisted_boundary.py
"""
from quiltforge.seeds import catalog_quilts
from quiltforge.spectral import BoundaryConditionError, assemble_laplacian, verify_isospectrality
from quiltforge.surface import build_diagram, glue_surface

quilt = catalog_quilts([21])[0]
for i, cert in enumerate(quilt.certificates, 1):
    s = glue_surface(build_diagram(cert.left))
    if not s.orientable:
        break
label = quilt.label(i)
print(f"{label}: chi={s.euler_characteristic} orientable={s.orientable}")

try:
    assemble_laplacian(build_diagram(cert.left), 2, "dirichlet")
except BoundaryConditionError as e:
    print("plain Dirichlet:", e)

for bc in ("neumann", "twisted"):
    rep = verify_isospectrality(cert, bc, k=2, count=12)
    print(f"{bc:8s} deviation {rep.max_rel_deviation:.1e}  first values",
          [round(x, 4) for x in rep.left[:6]])
