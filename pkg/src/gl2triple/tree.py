"""The tree dictionary: vertices are lattice classes, oriented paths are
Iwahori subgroups with a character choice, and the covering predicate singles
out the test-vector configurations.

Lattice arithmetic is exact (Fractions with p-power denominators); matrix
entries of group elements enter through their truncated representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionError
from .gl2 import GL2Elem
from .local_field import LocalFieldElem


def _frac_val(x: Fraction, p: int) -> int:
    """Valuation of a nonzero rational with p-power-friendly denominator."""
    if x == 0:
        raise ValueError("valuation of 0")
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _elem_to_frac(e: LocalFieldElem, p: int) -> Fraction:
    if e.is_zero:
        return Fraction(0)
    if e.val >= 0:
        return Fraction(e.unit * p**e.val)
    return Fraction(e.unit, p ** (-e.val))


@dataclass(frozen=True)
class Vertex:
    """Homothety class of the lattice with column basis (p^n, b; 0, 1).

    b is stored as b_num / p^b_exp, canonically reduced modulo p^n O.
    """

    p: int
    n: int
    b_num: int
    b_exp: int

    @staticmethod
    def make(p: int, n: int, b: Fraction) -> "Vertex":
        if b == 0:
            return Vertex(p, n, 0, 0)
        den = b.denominator
        e = 0
        while den % p == 0:
            den //= p
            e += 1
        if den != 1:
            raise ValueError("b must have a p-power denominator")
        num = b.numerator * 1
        mod = p ** (n + e)
        if mod <= 1 and n + e <= 0:
            return Vertex(p, n, 0, 0)  # b is 0 modulo p^n O
        num %= mod
        if num == 0:
            return Vertex(p, n, 0, 0)
        # strip common p-powers so the denominator exponent is minimal
        while e > 0 and num % p == 0:
            num //= p
            e -= 1
        num %= p ** (n + e)
        if num == 0:
            return Vertex(p, n, 0, 0)
        return Vertex(p, n, num, e)

    @property
    def b(self) -> Fraction:
        return Fraction(self.b_num, self.p**self.b_exp)

    @staticmethod
    def base(p: int) -> "Vertex":
        """The vertex of K, the class of O^2."""
        return Vertex(p, 0, 0, 0)

    def basis(self):
        """Column basis matrix as Fractions: ((p^n, b), (0, 1))."""
        return (Fraction(self.p) ** self.n, self.b, Fraction(0), Fraction(1))

    def label(self) -> str:
        return f"({self.n},{self.b})"


def _vertex_from_elem(p: int, n: int, y: LocalFieldElem) -> Vertex:
    """Canonical (n, b) with b = y reduced modulo p^n O."""
    if y.is_zero or y.val >= n:
        return Vertex(p, n, 0, 0)
    digits = n - y.val
    if y.prec < digits:
        raise PrecisionError("vertex label not determined at this precision")
    u = y.unit % p**digits
    if y.val >= 0:
        return Vertex(p, n, (u * p**y.val) % p**n, 0)
    return Vertex(p, n, u, -y.val)


def canonical_vertex(elems) -> Vertex:
    """Canonical form of the lattice spanned by two LocalFieldElem columns.

    elems = (m11, m12, m21, m22); columns (m11, m21) and (m12, m22).
    """
    m11, m12, m21, m22 = elems
    p = m11.ctx.p
    if (m11 * m22 - m12 * m21).is_zero:
        raise ValueError("columns do not span a lattice")
    # kill the (2,1) entry by a column operation (swap first if needed)
    if not m21.is_zero:
        if m22.is_zero or m21.val < m22.val:
            m11, m12 = m12, m11
            m21, m22 = m22, m21
        t = m21 / m22
        m11 = m11 - t * m12
        m21 = LocalFieldElem.zero(m11.ctx)
    y = m12 / m22
    x = m11 / m22
    return _vertex_from_elem(p, x.valuation(), y)


def vertex_act(g: GL2Elem, v: Vertex) -> Vertex:
    ctx = g.ctx
    b11 = LocalFieldElem.pi_pow(ctx, v.n)
    b12 = (
        LocalFieldElem.zero(ctx)
        if v.b_num == 0
        else LocalFieldElem.from_int(ctx, v.b_num)
        * LocalFieldElem.pi_pow(ctx, -v.b_exp)
    )
    b21 = LocalFieldElem.zero(ctx)
    b22 = LocalFieldElem.one(ctx)
    ga, gb, gc, gd = g.entries()
    cols = (
        ga * b11 + gb * b21,
        ga * b12 + gb * b22,
        gc * b11 + gd * b21,
        gc * b12 + gd * b22,
    )
    return canonical_vertex(cols)


def vertex_distance(v: Vertex, w: Vertex) -> int:
    """Tree distance: difference of the elementary divisor exponents."""
    p = v.p
    a11, a12, a21, a22 = v.basis()
    b11, b12, b21, b22 = w.basis()
    det_a = a11 * a22 - a12 * a21
    # T = A^-1 B
    t11 = (a22 * b11 - a12 * b21) / det_a
    t12 = (a22 * b12 - a12 * b22) / det_a
    t21 = (-a21 * b11 + a11 * b21) / det_a
    t22 = (-a21 * b12 + a11 * b22) / det_a
    vals = [_frac_val(t, p) for t in (t11, t12, t21, t22) if t != 0]
    vmin = min(vals)
    vdet = _frac_val(t11 * t22 - t12 * t21, p)
    return vdet - 2 * vmin


@dataclass(frozen=True)
class OrientedPath:
    """Backtrack-free path, orientation given by the vertex order."""

    vertices: tuple

    def __post_init__(self):
        vs = self.vertices
        if not vs:
            raise ValueError("a path has at least one vertex")
        for a, b in zip(vs, vs[1:]):
            if vertex_distance(a, b) != 1:
                raise ValueError(f"vertices {a.label()} and {b.label()} not adjacent")
        for a, b in zip(vs, vs[2:]):
            if a == b:
                raise ValueError("path backtracks")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> frozenset:
        return frozenset(
            frozenset((a, b)) for a, b in zip(self.vertices, self.vertices[1:])
        )

    def endpoints(self):
        return {self.vertices[0], self.vertices[-1]}

    def reversed(self) -> "OrientedPath":
        return OrientedPath(tuple(reversed(self.vertices)))


def standard_path(p: int, n: int) -> OrientedPath:
    """The path from the K-vertex to gamma^n K gamma^-n, oriented outward."""
    return OrientedPath(tuple(Vertex(p, -i, 0, 0) for i in range(n + 1)))


def act(g: GL2Elem, path: OrientedPath) -> OrientedPath:
    return OrientedPath(tuple(vertex_act(g, v) for v in path.vertices))


def covering_ok(p1: OrientedPath, p2: OrientedPath, p3: OrientedPath):
    """Is the longest path exactly covered by the two others?

    True in the two configurations the dictionary allows: the two shorter
    paths concatenate (edge-disjoint, meeting in a single vertex interior to
    the long path), or one is nested in the other sharing an endpoint.
    Returns (ok, diagnostic string).
    """
    paths = sorted((p1, p2, p3), key=lambda q: q.length)
    small, mid, long_ = paths
    ea, eb, ec = small.edges(), mid.edges(), long_.edges()
    if ea | eb != ec:
        return False, "union of the shorter paths misses the longest"
    if not ea:
        ok = small.vertices[0] in set(mid.vertices)
        return (ok, "degenerate single-vertex path" if ok else
                "isolated vertex off the covering")
    if ea & eb:
        if ea <= eb:
            shared = small.endpoints() & mid.endpoints()
            if shared:
                return True, "nested, sharing an endpoint"
            return False, "nested but no shared endpoint"
        return False, "overlapping but not nested"
    meet = set(small.vertices) & set(mid.vertices)
    if len(meet) == 1:
        return True, "concatenation at a single vertex"
    return False, f"shorter paths meet in {len(meet)} vertices"


def to_dot(paths, names=None) -> str:
    """DOT text: deduplicated vertices, one style per path, arrows = orientation."""
    colors = ["black", "red", "blue", "darkgreen", "orange", "purple"]
    lines = ["digraph tree {", "  rankdir=LR;", "  node [shape=circle];"]
    seen = {}
    for path in paths:
        for v in path.vertices:
            if v not in seen:
                seen[v] = f"v{len(seen)}"
    for v, name in seen.items():
        lines.append(f'  {name} [label="{v.label()}"];')
    for i, path in enumerate(paths):
        col = colors[i % len(colors)]
        pname = names[i] if names else f"path{i}"
        vs = path.vertices
        if len(vs) == 1:
            lines.append(f"  // {pname}: single vertex {vs[0].label()}")
        for j, (a, b) in enumerate(zip(vs, vs[1:])):
            head = "normal" if j == len(vs) - 2 else "none"
            lines.append(
                f"  {seen[a]} -> {seen[b]} "
                f'[color={col}, arrowhead={head}, label="{pname if j == 0 else ""}"];'
            )
    lines.append("}")
    return "\n".join(lines)
