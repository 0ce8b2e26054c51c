import itertools
import json

import pytest

from quiltforge.perm import InvolutionTriple
from quiltforge.render import (Layout, StyleConfig, cell_vertices, edge_endpoints, emit_svg,
                               layout_diagram, neighbor, segment_census)
from quiltforge.surface import build_diagram, is_treelike


def diagram(n, a="", b="", c=""):
    return build_diagram(InvolutionTriple.from_cycles(n, a, b, c))


def _check_layout(lay: Layout, d):
    assert len(lay.placement) == d.n
    assert len(set(lay.placement)) == d.n
    for i, j, x in lay.realized(d):
        assert neighbor(lay.placement[i], x) == lay.placement[j]
    assert set(lay.realized(d)) | set(lay.cut_edges) == set(d.glued_edges())
    if lay.complete:
        assert all(v <= 1 for v in lay.cuts_per_color().values())


def test_lattice_geometry():
    for i, j, s in itertools.product(range(-2, 3), range(-2, 3), (0, 1)):
        cell = (i, j, s)
        corners = sorted(
            "".join(sorted(c)) for c in
            ("ab" if (v[0] + 2 * v[1]) % 3 == 0 else "bc" if (v[0] + 2 * v[1]) % 3 == 1 else "ca"
             for v in cell_vertices(cell)))
        assert corners == ["ab", "ac", "bc"]
        for x in "abc":
            nb = neighbor(cell, x)
            assert nb != cell and neighbor(nb, x) == cell
            assert set(edge_endpoints(cell, x)) == set(edge_endpoints(nb, x))


def test_single_triangle():
    d = diagram(1)
    lay = layout_diagram(d)
    assert lay.placement == ((0, 0, 0),) and lay.cut_edges == () and lay.complete
    svg = emit_svg(lay, d)
    assert segment_census(svg) == {"glued": 0, "cut": 0, "mirror": 3}
    assert svg.count('stroke="red"') == 3


def test_two_triangles():
    d = diagram(2, a="(1 2)")
    lay = layout_diagram(d)
    _check_layout(lay, d)
    svg = emit_svg(lay, d)
    assert segment_census(svg) == {"glued": 1, "cut": 0, "mirror": 4}
    glued = [s for s in svg.splitlines() if 'class="glued"' in s]
    assert 'data-color="a"' in glued[0] and 'stroke-dasharray="2,4"' in glued[0]


def test_six_cycle_needs_at_most_one_cut():
    # six triangles around a vertex, glued alternately by a and b
    d = diagram(6, a="(1 2)(3 4)(5 6)", b="(2 3)(4 5)(6 1)")
    assert not is_treelike(d)
    lay = layout_diagram(d)
    _check_layout(lay, d)
    assert len(lay.cut_edges) == 0  # the hexagon closes up flat on the lattice
    # an odd cycle cannot close up: one pairing has to be cut
    d = diagram(3, "(1 2)", "(2 3)", "(1 3)")
    lay = layout_diagram(d)
    _check_layout(lay, d)
    assert len(lay.cut_edges) == 1 and lay.complete
    svg = emit_svg(lay, d)
    assert segment_census(svg)["cut"] == 2  # the cut pair, drawn on both sides


def test_treelike_catalog_layouts_have_no_cuts(quilts):
    for q in quilts:
        for cert in q.certificates:
            for t in (cert.left, cert.right):
                d = build_diagram(t)
                lay = layout_diagram(d)
                _check_layout(lay, d)
                assert lay.complete
                if is_treelike(d):
                    assert lay.cut_edges == ()
                census = segment_census(emit_svg(lay, d))
                assert census["glued"] == len(lay.realized(d))
                assert census["cut"] == 2 * len(lay.cut_edges)
                assert census["mirror"] == len(d.mirror_edges())


def test_deterministic_output(quilts_by_name):
    cert = quilts_by_name["21"].certificates[6]
    d = build_diagram(cert.left)
    assert emit_svg(layout_diagram(d), d) == emit_svg(layout_diagram(d), d)


def test_budget_fallback_is_flagged():
    d = diagram(3, "(1 2)", "(2 3)", "(1 3)")
    lay = layout_diagram(d, max_cuts_per_color=0)
    assert not lay.complete
    _check_layout(lay, d)


def test_style_config():
    s = StyleConfig.from_json(json.dumps({"stroke": {"a": "solid", "b": "dotted", "c": "dashed"},
                                          "fixed_color": "#c00"}))
    d = diagram(2, a="(1 2)")
    svg = emit_svg(layout_diagram(d), d, s)
    assert 'stroke="#c00"' in svg
    with pytest.raises(ValueError):
        StyleConfig(stroke={"a": "solid", "b": "solid", "c": "dashed"})
    with pytest.raises(ValueError):
        StyleConfig(fixed_width_factor=1.0)
