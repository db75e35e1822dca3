import numpy as np
import pytest

from conftest import dense_impedance
from fraxim.circuit import EvalContext, ResonanceError, merge_nodes
from fraxim.families import (
    FamilySpec,
    build,
    build_hanoi,
    build_ladder,
    build_sg,
    termination_impedance,
    trace_value,
)
from fraxim.limits import hanoi_map, ladder_map, sg_map
from fraxim.reduce import boundary_trace, effective_impedance, parallel


def test_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("hanoi", r=1.2)
    with pytest.raises(ValueError):
        FamilySpec("sg", L=-1)
    with pytest.raises(ValueError):
        FamilySpec("ladder", depth=-1)
    with pytest.raises(ValueError):
        FamilySpec("sg", termination="fixed")


# ladder


def test_ladder_single_cell_open_is_series_resonant():
    net = build_ladder(FamilySpec("ladder", depth=1, termination="open"))
    with pytest.raises(ResonanceError):
        effective_impedance(net, EvalContext(1.0, 0.0), *net.boundary)
    # with a vanishing regulariser the input impedance is the series resistance 2*eps
    z = effective_impedance(net, EvalContext(1.0, 1e-9), *net.boundary)
    assert abs(z - 2e-9) < 1e-15


def test_ladder_depth_zero_is_termination():
    Z = 0.3 + 0.2j
    net = build_ladder(FamilySpec("ladder", depth=0, termination="fixed", termination_value=Z))
    assert len(net.nodes) == 2 and len(net.edges) == 1
    assert effective_impedance(net, EvalContext(5.0, 0.1), *net.boundary) == pytest.approx(Z)


def test_ladder_long_chain_approaches_closed_form():
    net = build_ladder(FamilySpec("ladder", depth=3000))
    z = effective_impedance(net, EvalContext(1.0, 1e-3), *net.boundary)
    assert abs(z - (np.sqrt(3) + 1j) / 2) < 1e-2


def test_ladder_thirty_cells_is_thirty_map_steps():
    ctx = EvalContext(1.0, 1e-3)
    z = 0j
    for _ in range(30):
        z = ladder_map(z, ctx)
    got = trace_value(FamilySpec("ladder", depth=30), ctx)
    assert abs(got - z) <= 1e-10 * abs(z)


# sg


def test_sg_one_level_with_fixed_cells():
    Z, w, eps = 0.6 + 0.8j, 1.3, 1e-3
    spec = FamilySpec("sg", depth=1, termination="fixed", termination_value=Z)
    tr = boundary_trace(build_sg(spec), EvalContext(w, eps))
    expected = 1 / (1 / (1j * w + eps) + 1 / (5 * Z / 3 + 3 * (eps + 1 / (1j * w))))
    b = tr.boundary
    for u, v in ((b[0], b[1]), (b[1], b[2]), (b[2], b[0])):
        assert abs(1 / tr.admittance(u, v) - expected) < 1e-12


def test_sg_depth_zero_is_termination_triangle():
    net = build_sg(FamilySpec("sg", depth=0, termination="inductor"))
    assert len(net.nodes) == 3 and len(net.edges) == 3
    assert all(el.kind == "inductor" for _, _, el in net.edges)


@pytest.mark.parametrize("depth", [0, 1, 2, 3, 4])
def test_sg_node_count(depth):
    net = build_sg(FamilySpec("sg", depth=depth, termination="inductor"))
    assert len(net.nodes) == 3 ** (depth + 1)


# hanoi


@pytest.fixture
def hanoi1():
    zv, zl = 0.4 - 0.7j, 0.9 + 0.3j
    spec = FamilySpec("hanoi", r=0.37, depth=1, termination="fixed", termination_value=(zv, zl))
    return spec, zv, zl


def test_hanoi_top_to_bottom(hanoi1):
    spec, zv, zl = hanoi1
    r, w = spec.r, 1.7
    net = build_hanoi(spec)
    top, left, right = net.boundary
    shorted = merge_nodes(net, left, right)
    got = effective_impedance(shorted, EvalContext(w), top, left)
    expected = r * zv + (r * zv + 2 * r * zl + 1 / (1j * w)) / 2
    assert abs(got - expected) < 1e-12 * abs(expected)


def test_hanoi_left_to_right(hanoi1):
    spec, zv, zl = hanoi1
    r, w = spec.r, 1.7
    net = build_hanoi(spec)
    _, left, right = net.boundary
    got = effective_impedance(net, EvalContext(w), left, right)
    expected = 2 * r * zl + parallel(2 * r * zl + 1j * w, 2 * r * zv + 2 * r * zl + 2 / (1j * w))
    assert abs(got - expected) < 1e-12 * abs(expected)
    assert abs(got - dense_impedance(net, left, right, EvalContext(w))) < 1e-12


def test_hanoi_trace_is_one_map_step(hanoi1):
    spec, zv, zl = hanoi1
    w = 0.8
    got = trace_value(spec, EvalContext(w))
    assert np.allclose(got, hanoi_map(zv, zl, EvalContext(w), spec.r), rtol=0, atol=1e-12)


@pytest.mark.parametrize("depth", [0, 1, 2, 3, 4, 5])
def test_hanoi_piece_count(depth):
    net = build_hanoi(FamilySpec("hanoi", r=0.5, depth=depth, termination="fixed",
                                 termination_value=1.0))
    fixed = [el for _, _, el in net.edges if el.kind == "fixed"]
    assert len(fixed) == 3 * 3 ** depth
    assert len(net.nodes) == 4 * 3 ** depth


def test_hanoi_element_scaling():
    net = build_hanoi(FamilySpec("hanoi", r=0.5, L=2.0, C=3.0, depth=2, termination="inductor"))
    caps = sorted(el.value for _, _, el in net.edges if el.kind == "capacitor")
    # two capacitors at scale 1 (C) and six at scale 2 (C / r)
    assert caps == [3.0] * 2 + [6.0] * 6
    # leaves are inductor terminations at scale r**2 = 0.25
    inds = sorted(el.value for _, _, el in net.edges
                  if el.kind == "inductor" and el.eps_weight > 0.25)
    assert inds == [1.0] * 3 + [2.0]


def test_hanoi_open_termination_disconnects():
    from fraxim.circuit import NetworkError
    with pytest.raises(NetworkError):
        build_hanoi(FamilySpec("hanoi", r=0.5, depth=2, termination="open"))


# invariants shared by all families


@pytest.mark.parametrize("spec", [
    FamilySpec("ladder", depth=5),
    FamilySpec("sg", depth=3, termination="inductor"),
    FamilySpec("hanoi", r=0.3, depth=3),
])
def test_determinism(spec):
    a, b = build(spec), build(spec)
    assert a == b
    assert a.edges == b.edges and a.nodes == b.nodes


def _map_power(spec, ctx, n):
    z = termination_impedance(spec, ctx)
    for _ in range(n):
        if spec.family == "ladder":
            z = ladder_map(z, ctx, spec.L, spec.C)
        elif spec.family == "sg":
            z = sg_map(z, ctx, spec.L, spec.C)
        else:
            z = hanoi_map(*z, ctx, spec.r, spec.L, spec.C)
    return z


@pytest.mark.parametrize("family,term", [
    ("ladder", "short"), ("ladder", "inductor"), ("sg", "short"), ("sg", "inductor"),
    ("hanoi", "short"), ("hanoi", "inductor"),
])
@pytest.mark.parametrize("eps", [0.0, 1e-3])
def test_substitution_consistency(family, term, eps):
    ctx = EvalContext(0.9, eps)
    for n in range(1, 5):
        spec = FamilySpec(family, L=1.1, C=0.8, r=0.4 if family == "hanoi" else None,
                          depth=n, termination=term)
        prev = FamilySpec(family, L=1.1, C=0.8, r=spec.r, depth=n - 1, termination=term)
        got = np.atleast_1d(trace_value(spec, ctx))
        # one more step from the level-(n-1) trace
        if family == "hanoi":
            step = np.array(hanoi_map(*trace_value(prev, ctx), ctx, spec.r, spec.L, spec.C))
        elif family == "sg":
            step = np.array([sg_map(trace_value(prev, ctx), ctx, spec.L, spec.C)])
        else:
            step = np.array([ladder_map(trace_value(prev, ctx), ctx, spec.L, spec.C)])
        scale = np.max(np.abs(got))
        assert np.max(np.abs(got - step)) <= 1e-10 * scale
        assert np.max(np.abs(got - np.atleast_1d(_map_power(spec, ctx, n)))) <= 1e-10 * scale


def test_termination_independence_ladder():
    ctx = EvalContext(1.0, 1e-2)
    gaps = []
    for n in (100, 300, 600):
        zs = [trace_value(FamilySpec("ladder", depth=n, termination=t), ctx)
              for t in ("short", "open")]
        gaps.append(abs(zs[0] - zs[1]))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[-1] < 1e-2


def test_termination_independence_sg():
    ctx = EvalContext(1.0, 0.1)
    gaps = []
    for n in (1, 3, 5):
        zs = [trace_value(FamilySpec("sg", depth=n, termination=t), ctx)
              for t in ("short", "open")]
        gaps.append(abs(zs[0] - zs[1]))
    assert gaps[0] > gaps[1] > gaps[2]


def test_termination_independence_hanoi():
    ctx = EvalContext(1.0, 1e-2)
    gaps = []
    for n in (2, 4, 6):
        zs = [np.array(trace_value(FamilySpec("hanoi", r=0.4, depth=n, termination=t), ctx))
              for t in ("short", "inductor")]
        gaps.append(np.max(np.abs(zs[0] - zs[1])))
    assert gaps[0] > gaps[1] > gaps[2]
