"""
The smallest transplantable pair, built from the Fano plane.

Three involutive collineations of PG(2,2) act on the 7 points and on the
7 lines.  Read as triangle gluings, the two actions give two different
7-triangle shapes; the point/line incidence matrix carries eigenfunctions
of one onto the other.

    python3 demos/fano_pair.py
"""
from quiltforge.perm import InvolutionTriple
from quiltforge.quilt import enumerate_quilt
from quiltforge.seeds import build_projective_space, collineation_actions
from quiltforge.spectral import discrete_transplant_check, verify_isospectrality
from quiltforge.surface import build_diagram, conway_signature, glue_surface, is_treelike
from quiltforge.transplant import check_transplantable, find_permutation_isomorphism, intertwines

space = build_projective_space(2, 2)
# transvections x -> x + x_j e_i over F2; each squares to the identity
mats = [((1, 1, 0), (0, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (0, 1, 1), (0, 0, 1)),
        ((1, 0, 0), (0, 1, 0), (1, 0, 1))]
acts = [collineation_actions(space, m) for m in mats]
left = InvolutionTriple(*(g.point_perm for g in acts))
right = InvolutionTriple(*(g.hyperplane_perm for g in acts))
print("points:", left)
print("lines: ", right)

T = space.intertwiner()
print("incidence matrix intertwines:", intertwines(T, left, right), " det =", T.det())
print("permutation isomorphism:", find_permutation_isomorphism(left, right))

verdict = check_transplantable(left, right)
print("verdict:", verdict.kind)

for name, t in (("left", left), ("right", right)):
    d = build_diagram(t)
    sig = conway_signature(glue_surface(d))
    print(f"{name}: treelike={is_treelike(d)} orbifold {sig.symbol}")

rep = verify_isospectrality((left, right), "neumann", k=4, count=10, mode="fem")
print("first FEM Neumann eigenvalues:", [round(x, 6) + 0.0 for x in rep.left])
print("max relative deviation:", f"{rep.max_rel_deviation:.1e}")
print("exact residual of the lifted intertwiner:", discrete_transplant_check((left, right), 2, T))

q = enumerate_quilt((left, right), name="7")
print(f"quilt 7 has {len(q)} pair classes:", [q.label(i + 1) for i in range(len(q))])
