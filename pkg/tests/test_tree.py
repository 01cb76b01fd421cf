import random

from gl2triple.gl2 import GL2Elem, SubgroupSpec, enumerate_cosets, is_member, key_to_elem
from gl2triple.tree import (
    OrientedPath,
    Vertex,
    act,
    covering_ok,
    standard_path,
    to_dot,
    vertex_distance,
)


def test_standard_paths(ctx2):
    p0 = standard_path(2, 0)
    assert p0.length == 0 and p0.vertices[0] == Vertex.base(2)
    p2 = standard_path(2, 2)
    assert [v.label() for v in p2.vertices] == ["(0,0)", "(-1,0)", "(-2,0)"]


def test_identity_and_K_fix_base(ctx2):
    P = standard_path(2, 0)
    assert act(GL2Elem.identity(ctx2), P) == P
    table = enumerate_cosets(ctx2, 1)
    for key in table.key_tuples():
        assert act(key_to_elem(ctx2, key, 1), P) == P


def test_gamma_translates_edge(ctx2):
    P1 = standard_path(2, 1)
    shifted = act(GL2Elem.gamma_pow(ctx2, 1), P1)
    assert [v.label() for v in shifted.vertices] == ["(-1,0)", "(-2,0)"]


def test_stabilizer_is_iwahori(ctx2, ctx3):
    for ctx in (ctx2, ctx3):
        for n in (1, 2):
            P = standard_path(ctx.p, n)
            table = enumerate_cosets(ctx, n + 1)
            for key in table.key_tuples():
                g = key_to_elem(ctx, key, n + 1)
                assert (act(g, P) == P) == is_member(g, SubgroupSpec("I", n))


def test_action_property(ctx2):
    table = enumerate_cosets(ctx2, 2)
    keys = table.key_tuples()
    random.seed(11)
    P = standard_path(2, 2)
    for _ in range(25):
        g = key_to_elem(ctx2, random.choice(keys), 2)
        h = key_to_elem(ctx2, random.choice(keys), 2) * GL2Elem.gamma_pow(ctx2, 1)
        assert act(g * h, P) == act(g, act(h, P))


def test_covering_pictures(ctx2):
    p = 2
    # left picture: consecutive paths of lengths 1 and 3 covering length 4
    A = standard_path(p, 1)
    B = act(GL2Elem.gamma_pow(ctx2, 1), standard_path(p, 3))
    C = standard_path(p, 4)
    ok, diag = covering_ok(A, B, C)
    assert ok and "concatenation" in diag
    # right picture: I' = I'' of length 5, I''' a sub-path sharing one end
    D = standard_path(p, 5)
    E = standard_path(p, 2)
    ok, diag = covering_ok(D, D, E)
    assert ok and "nested" in diag
    # three disjoint edges
    F1 = standard_path(p, 1)
    F2 = act(GL2Elem.gamma_pow(ctx2, 2), standard_path(p, 1))
    F3 = act(GL2Elem.gamma_pow(ctx2, 4), standard_path(p, 1))
    assert not covering_ok(F1, F2, F3)[0]


def test_main_theorem_configuration(ctx2):
    n1, n2, n3 = 2, 1, 3
    R1 = standard_path(2, n1)
    R2 = act(GL2Elem.gamma_pow(ctx2, n3 - n2), standard_path(2, n2))
    R3 = standard_path(2, n3)
    ok, _ = covering_ok(R1, R2, R3)
    assert ok
    # invariance under a simultaneous translation
    g = GL2Elem.gamma_pow(ctx2, 1)
    assert covering_ok(act(g, R1), act(g, R2), act(g, R3))[0]


def test_to_dot(ctx2):
    paths = [standard_path(2, 2)]
    text = to_dot(paths)
    assert text.startswith("digraph")
    assert text.count("->") == 2
    assert sum(1 for line in text.splitlines() if "label=\"(" in line) == 3
    empty = to_dot([])
    assert empty.startswith("digraph") and "->" not in empty


def test_vertex_distance(ctx2):
    base = Vertex.base(2)
    far = standard_path(2, 3).vertices[-1]
    assert vertex_distance(base, far) == 3
    assert vertex_distance(base, base) == 0
