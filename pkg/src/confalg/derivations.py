"""Conformal derivations: Leibniz checker, inner derivations, the
M-valued non-inner family, a degree-bounded graded-derivation solver, and
decomposition into inner plus scalar non-inner parts.

A derivation is stored by its images on a finite generator window.  The
Leibniz residual of a pair (x_i, y_j),

    D([x_i _m' y_j]) - [(D x_i) _{l+m'} y_j] - [x_i _m' (D y_j)],

is a generator-indexed polynomial in (d, l, m); identically zero residuals
certify the rule for the pair.  The compatibility D(d a) = (d + l) D(a)
holds structurally because images extend C[d]-linearly with the d -> d + l
shift.

The graded solver works at one grading degree c: image of X_i supported at
index i + c with polynomial coefficients of bounded total degree.  Its
equations are the Leibniz residual coefficients for the pairs (L_0, y_j),
which the uniform structure of the bracket table makes exhaustive: the
classification argument subtracts inner derivations and the M-valued family
using those pairs alone.  A wider (all-pairs) equation set is available for
cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .lca import (
    VAR_D,
    VAR_L,
    VAR_M,
    AlgebraSpec,
    DegreeBoundExceeded,
    Generator,
    GenPoly,
    WindowTooSmall,
    conformal_bracket,
)
from .linsolve import SparseRow, linear_solve, reduce_rows, scalar_rank
from .poly import GaussianRational, Inconsistent, MPoly, parse_poly

_L = MPoly.var(VAR_L)
_M = MPoly.var(VAR_M)


class NotDecomposable(ValueError):
    """A derivation that does not split as inner + scalar non-inner part."""


#: finitely supported scalar sequence: position -> coefficient
SeqC = Mapping[int, GaussianRational]


@dataclass
class DerivationSpec:
    """Images of the window generators under one conformal derivation."""

    families: tuple[str, ...]
    window: int
    images: dict[tuple[str, int], GenPoly] = field(default_factory=dict)
    degree: int | None = None

    def image(self, family: str, index: int) -> GenPoly:
        if abs(index) > self.window:
            raise WindowTooSmall(
                f"derivation images known for |index| <= {self.window}, got {index}"
            )
        return self.images.get((family, index), GenPoly.zero())

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.images.values())


def ad(spec: AlgebraSpec, x: GenPoly, window: int = 3) -> DerivationSpec:
    """The inner derivation y -> [x _l y] on the generator window."""
    degree = None
    indices = {gen.index for gen in x.terms}
    if len(indices) == 1:
        degree = next(iter(indices))
    out = DerivationSpec(families=spec.families, window=window, degree=degree)
    for fam in spec.families:
        for i in range(-window, window + 1):
            value = conformal_bracket(spec, x, GenPoly.unit(fam, i), VAR_L)
            if not value.is_zero():
                out.images[(fam, i)] = value
    return out


def d_vec(spec: AlgebraSpec, seq: SeqC, window: int = 3) -> DerivationSpec:
    """The derivation L_i -> sum_c a_c M_{i+c}, zero on the other families."""
    if "M" not in spec.families:
        raise ValueError("the M-valued family needs an M family")
    entries = {c: GaussianRational.of(v) for c, v in seq.items() if GaussianRational.of(v)}
    degree = next(iter(entries)) if len(entries) == 1 else None
    out = DerivationSpec(families=spec.families, window=window, degree=degree)
    for i in range(-window, window + 1):
        image = GenPoly(
            {Generator("M", i + c): MPoly.const(v) for c, v in entries.items()}
        )
        if not image.is_zero():
            out.images[("L", i)] = image
    return out


def apply_derivation(deriv: DerivationSpec, x: GenPoly) -> GenPoly:
    """Extend the generator images C[d]-linearly: D(p(d) u) = p(d+l) D(u)."""
    out = GenPoly.zero()
    for gen, poly in x.terms.items():
        img = deriv.image(gen.family, gen.index)
        out = out + img.scale(poly.shift(VAR_D, _L))
    return out


@dataclass
class DerivationReport:
    """Leibniz residuals over a generator window."""

    algebra: str
    window: int
    checked: int = 0
    residuals: dict = field(default_factory=dict)

    @property
    def all_zero(self) -> bool:
        return not self.residuals


def leibniz_residual(
    spec: AlgebraSpec,
    deriv: DerivationSpec,
    fam_x: str,
    i: int,
    fam_y: str,
    j: int,
) -> GenPoly:
    """D([x_i _m y_j]) - [(D x_i) _{l+m} y_j] - [x_i _m (D y_j)]."""
    inner = conformal_bracket(
        spec, GenPoly.unit(fam_x, i), GenPoly.unit(fam_y, j), VAR_M
    )
    t1 = GenPoly.zero()
    for gen, poly in inner.terms.items():
        t1 = t1 + deriv.image(gen.family, gen.index).scale(poly.shift(VAR_D, _L))
    t2 = conformal_bracket(
        spec, deriv.image(fam_x, i), GenPoly.unit(fam_y, j), _L + _M
    )
    t3 = conformal_bracket(
        spec, GenPoly.unit(fam_x, i), deriv.image(fam_y, j), VAR_M
    )
    return t1 - t2 - t3


def check_derivation(
    spec: AlgebraSpec, deriv: DerivationSpec, window: int | None = None
) -> DerivationReport:
    """Leibniz residuals for every pair whose data stays inside the window."""
    w = deriv.window if window is None else window
    if w > deriv.window:
        raise WindowTooSmall(
            f"derivation images cover |index| <= {deriv.window}, asked for {w}"
        )
    report = DerivationReport(algebra=spec.name, window=w)
    for fam_x in spec.families:
        for fam_y in spec.families:
            for i in range(-w, w + 1):
                for j in range(-w, w + 1):
                    if abs(i + j) > deriv.window:
                        continue
                    residual = leibniz_residual(spec, deriv, fam_x, i, fam_y, j)
                    report.checked += 1
                    if not residual.is_zero():
                        report.residuals[(fam_x, i, fam_y, j)] = residual
    return report


# ---------------------------------------------------------------------------
# graded-derivation solver
# ---------------------------------------------------------------------------


def _degree_monos(bound: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(bound + 1) for q in range(bound + 1 - p)]


@dataclass
class _Coords:
    """Column layout: (source family, source index, target family, mono)."""

    columns: dict[tuple[str, int, str, tuple[int, int]], int]
    spec: AlgebraSpec
    src_window: int
    degree: int
    bound: int

    def vector_of(self, deriv: DerivationSpec) -> list[GaussianRational]:
        zero = GaussianRational.of(0)
        vec = [zero] * len(self.columns)
        for (fam, i), image in deriv.images.items():
            if abs(i) > self.src_window:
                continue
            for gen, poly in image.terms.items():
                if gen.index != i + self.degree:
                    raise ValueError("derivation is not homogeneous of this degree")
                for mono, coeff in poly.terms.items():
                    exps = dict(mono)
                    key = (
                        fam,
                        i,
                        gen.family,
                        (exps.get(VAR_D, 0), exps.get(VAR_L, 0)),
                    )
                    if key not in self.columns:
                        raise DegreeBoundExceeded(
                            f"image of {fam}[{i}] uses monomial {dict(mono)} beyond "
                            f"degree {self.bound}"
                        )
                    vec[self.columns[key]] = coeff
        return vec

    def derivation_of(self, vec: Sequence[GaussianRational]) -> DerivationSpec:
        images: dict[tuple[str, int], dict[Generator, MPoly]] = {}
        for (fam, i, tgt, (p, q)), col in self.columns.items():
            coeff = vec[col]
            if not coeff:
                continue
            gen = Generator(tgt, i + self.degree)
            mono_poly = MPoly.var(VAR_D, p) * MPoly.var(VAR_L, q)
            slot = images.setdefault((fam, i), {})
            slot[gen] = slot.get(gen, MPoly.zero()) + mono_poly.scale(coeff)
        out = DerivationSpec(
            families=self.spec.families, window=self.src_window, degree=self.degree
        )
        for key, terms in images.items():
            gp = GenPoly(terms)
            if not gp.is_zero():
                out.images[key] = gp
        return out


def _make_coords(
    spec: AlgebraSpec, degree: int, bound: int, src_window: int
) -> _Coords:
    columns: dict[tuple[str, int, str, tuple[int, int]], int] = {}
    for fam in spec.families:
        for i in range(-src_window, src_window + 1):
            for tgt in spec.families:
                for mono in _degree_monos(bound):
                    columns[(fam, i, tgt, mono)] = len(columns)
    return _Coords(
        columns=columns, spec=spec, src_window=src_window, degree=degree, bound=bound
    )


def _pair_rows(
    coords: _Coords,
    fam_x: str,
    i: int,
    fam_y: str,
    j: int,
) -> list[SparseRow]:
    """Linear rows of the Leibniz residual of one generator pair.

    The residual is linear in the unknown image coefficients; rows are the
    residual's (target family, monomial in d,l,m) coefficients.
    """
    spec = coords.spec
    buckets: dict[tuple[str, tuple], SparseRow] = {}

    def add(target_fam: str, col: int, poly: MPoly, sign: int) -> None:
        for mono, coeff in poly.terms.items():
            row = buckets.setdefault((target_fam, mono), {})
            value = coeff if sign > 0 else -coeff
            acc = row.get(col)
            s = value if acc is None else acc + value
            if s:
                row[col] = s
            elif acc is not None:
                del row[col]

    # D([x _m y]): bracket templates at m, images shifted by l
    for tgt_f, template in spec.templates(fam_x, fam_y):
        t_shift = template.substitute(VAR_L, _M).shift(VAR_D, _L)
        for tgt_g in spec.families:
            for p, q in _degree_monos(coords.bound):
                col = coords.columns[(tgt_f, i + j, tgt_g, (p, q))]
                mono_poly = MPoly.var(VAR_D, p) * MPoly.var(VAR_L, q)
                add(tgt_g, col, t_shift * mono_poly, +1)
    # [(D x)_{l+m} y]: first-argument coefficients evaluated at d -> -(l+m)
    for fam_g in spec.families:
        entries = spec.table.get((fam_g, fam_y))
        if not entries:
            continue
        for tgt_h, template in entries:
            t_at = template.substitute(VAR_L, _L + _M)
            for p, q in _degree_monos(coords.bound):
                col = coords.columns[(fam_x, i, fam_g, (p, q))]
                mono_poly = ((-(_L + _M)) ** p) * MPoly.var(VAR_L, q)
                add(tgt_h, col, mono_poly * t_at, -1)
    # [x _m (D y)]: second-argument coefficients shifted d -> d + m
    for fam_g in spec.families:
        entries = spec.table.get((fam_x, fam_g))
        if not entries:
            continue
        for tgt_h, template in entries:
            t_at = template.substitute(VAR_L, _M)
            for p, q in _degree_monos(coords.bound):
                col = coords.columns[(fam_y, j, fam_g, (p, q))]
                mono_poly = (MPoly.var(VAR_D) + _M) ** p * MPoly.var(VAR_L, q)
                add(tgt_h, col, mono_poly * t_at, -1)
    return [row for row in buckets.values() if row]


def inner_window_vectors(
    spec: AlgebraSpec, coords: _Coords
) -> list[list[GaussianRational]]:
    """Window restrictions of ad(d^k X_c) for k < bound, X over the families."""
    vectors = []
    for fam in spec.families:
        for k in range(coords.bound):
            x = GenPoly.unit(fam, coords.degree, MPoly.var(VAR_D, k))
            vectors.append(coords.vector_of(ad(spec, x, coords.src_window)))
    return vectors


@dataclass
class DerivationSolveResult:
    """Kernel of the graded Leibniz system with its inner comparison."""

    degree: int
    dimension: int
    inner_rank: int
    basis: list[DerivationSpec]
    scope_note: str

    @property
    def extra_dimension(self) -> int:
        return self.dimension - self.inner_rank


def solve_graded_derivations(
    spec: AlgebraSpec,
    degree: int = 0,
    bound: int = 4,
    window: int = 2,
    pairs: str = "lzero",
) -> DerivationSolveResult:
    """Solve for all degree-``degree`` derivations on a finite window.

    Unknowns are the image coefficients of the window generators (total
    degree <= ``bound``); equations are Leibniz residual coefficients.  The
    default pair set {(L_0, y_j)} carries the whole classification argument;
    ``pairs='all'`` uses every pair with |i|, |j| <= window (and a source
    window twice as wide) as an independent cross-check.
    """
    if spec.parameters:
        raise ValueError("the solver needs numeric algebra parameters")
    if pairs == "lzero":
        src_window = window
        pair_list = [("L", 0, fam, j) for fam in spec.families
                     for j in range(-window, window + 1)]
    elif pairs == "all":
        src_window = 2 * window
        pair_list = [
            (fx, i, fy, j)
            for fx in spec.families
            for fy in spec.families
            for i in range(-window, window + 1)
            for j in range(-window, window + 1)
        ]
    else:
        raise ValueError("pairs must be 'lzero' or 'all'")
    coords = _make_coords(spec, degree, bound, src_window)
    rows: list[SparseRow] = []
    for fam_x, i, fam_y, j in pair_list:
        rows.extend(_pair_rows(coords, fam_x, i, fam_y, j))
    ech = reduce_rows(rows, None, len(coords.columns))
    kernel = ech.kernel_basis()

    inner = inner_window_vectors(spec, coords)
    inner_rank = scalar_rank(inner)
    combined = scalar_rank(inner + kernel)
    if combined != len(kernel):
        raise AssertionError("inner derivations escaped the solved kernel")
    note = (
        f"certified at window |i| <= {src_window}, image degree <= {bound}; "
        "the infinite-rank statement is quantified over all indices and "
        "degrees and is not decided by this finite run"
    )
    return DerivationSolveResult(
        degree=degree,
        dimension=len(kernel),
        inner_rank=inner_rank,
        basis=[coords.derivation_of(vec) for vec in kernel],
        scope_note=note,
    )


# ---------------------------------------------------------------------------
# decomposition into inner + scalar non-inner part
# ---------------------------------------------------------------------------


def lm_weights(spec: AlgebraSpec) -> tuple[GaussianRational, GaussianRational] | None:
    """The (a, b) weights of the L-on-M bracket, None without an M family."""
    if "M" not in spec.families:
        return None
    entries = dict(spec.templates("L", "M"))
    template = entries["M"]
    a = template.coeff_extract([VAR_D, VAR_L], {VAR_L: 1}).constant_value()
    b = template.coeff_extract([VAR_D, VAR_L], {}).constant_value()
    return a, b


@dataclass
class Decomposition:
    x: GenPoly
    q: GaussianRational
    position: int

    def is_pure_inner(self) -> bool:
        return not self.q


def derivation_degree(deriv: DerivationSpec) -> int:
    degrees = set()
    for (fam, i), image in deriv.images.items():
        for gen in image.terms:
            degrees.add(gen.index - i)
    if not degrees:
        return deriv.degree if deriv.degree is not None else 0
    if len(degrees) > 1:
        raise NotDecomposable(f"derivation mixes grading degrees {sorted(degrees)}")
    return degrees.pop()


def decompose(
    spec: AlgebraSpec,
    deriv: DerivationSpec,
    bound: int = 6,
) -> Decomposition:
    """Write a graded derivation as ad(x) + q * (M-valued family at c).

    Solves linearly for x = f(d) L_c + g(d) M_c + h(d) Y_c with deg <= bound
    and, when the L-on-M weights are (1, b), a scalar q; uniqueness is
    certified by an empty kernel.
    """
    weights = lm_weights(spec)
    c = derivation_degree(deriv)
    columns: list[list[GaussianRational]] = []
    labels: list[tuple[str, int] | str] = []
    coords = _make_coords(spec, c, bound + 1, deriv.window)
    for fam in spec.families:
        for k in range(bound + 1):
            x = GenPoly.unit(fam, c, MPoly.var(VAR_D, k))
            columns.append(coords.vector_of(ad(spec, x, deriv.window)))
            labels.append((fam, k))
    include_q = weights is not None and weights[0] == GaussianRational.of(1)
    if include_q:
        columns.append(
            coords.vector_of(d_vec(spec, {c: GaussianRational.of(1)}, deriv.window))
        )
        labels.append("q")
    rhs_vec = coords.vector_of(deriv)
    matrix = [
        [col[r] for col in columns] for r in range(len(coords.columns))
    ]
    try:
        solution = linear_solve(matrix, [MPoly.const(v) for v in rhs_vec])
    except Inconsistent as exc:
        raise NotDecomposable(
            "no inner + scalar decomposition at this degree bound"
        ) from exc
    if solution.kernel:
        raise NotDecomposable("decomposition is not unique: ad has a window kernel")
    x = GenPoly.zero()
    q = GaussianRational.of(0)
    for label, value in zip(labels, solution.solution):
        coeff = value.constant_value()
        if not coeff:
            continue
        if label == "q":
            q = coeff
        else:
            fam, k = label
            x = x + GenPoly.unit(fam, c, MPoly.var(VAR_D, k).scale(coeff))
    return Decomposition(x=x, q=q, position=c)


# ---------------------------------------------------------------------------
# derivation text format
# ---------------------------------------------------------------------------


def serialize_derivation(deriv: DerivationSpec) -> str:
    lines = ["derivation"]
    lines.append("families " + " ".join(deriv.families))
    lines.append(f"window {deriv.window}")
    if deriv.degree is not None:
        lines.append(f"degree {deriv.degree}")
    for (fam, i), image in sorted(deriv.images.items()):
        for gen, poly in sorted(image.terms.items()):
            lines.append(f"image {fam} {i} -> {gen.family} {gen.index} : {poly}")
    return "\n".join(lines) + "\n"


def parse_derivation(text: str) -> DerivationSpec:
    families: tuple[str, ...] = ()
    window = 0
    degree: int | None = None
    images: dict[tuple[str, int], dict[Generator, MPoly]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "derivation":
            continue
        if head == "families":
            families = tuple(rest.split())
        elif head == "window":
            window = int(rest)
        elif head == "degree":
            degree = int(rest)
        elif head == "image":
            src_part, _, poly_part = rest.partition(":")
            words = src_part.split()
            if len(words) != 5 or words[2] != "->":
                raise ValueError(f"bad image line: {line!r}")
            fam, idx, _, tgt_fam, tgt_idx = words
            gen = Generator(tgt_fam, int(tgt_idx))
            slot = images.setdefault((fam, int(idx)), {})
            slot[gen] = slot.get(gen, MPoly.zero()) + parse_poly(poly_part)
        else:
            raise ValueError(f"unknown directive {head!r} in derivation text")
    out = DerivationSpec(families=families, window=window, degree=degree)
    for key, terms in images.items():
        gp = GenPoly(terms)
        if not gp.is_zero():
            out.images[key] = gp
    return out
