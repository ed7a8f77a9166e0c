"""Conformal modules: rank-one and graded intermediate-series builders,
the module-axiom checker, the hand-coded relation oracle, and a bounded
reducibility witness search.

Rank-one actions have the form ``F_i . v = c^i * T_F(d, l) * v``.  Because
every term of the module identity for a pair (F_i, G_j) carries the same
factor ``c^(i+j)``, the axiom checker works on the index-free templates;
a zero template residual certifies the identity for every index pair (and
for every nonzero value of ``c``).

Graded actions ``F_i . v_m = T_F(i, m)(d, l) * v_{i+m}`` are checked on an
explicit index window.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .catalog import ParamLike, as_param
from .lca import VAR_D, VAR_L, VAR_M, AlgebraSpec, GenPoly, WindowTooSmall
from .linsolve import linear_solve
from .poly import GaussianRational, Inconsistent, MPoly, parse_poly

#: default symbol names for module parameters passed as "sym".  The module
#: generator symbol already occupies the name "d", so the scalar extension
#: parameter is spelled "dd" in polynomial contexts.
MODULE_SYMBOLS = {"alpha": "alpha", "beta": "beta", "c": "c", "d": "dd"}

CoeffFn = Callable[[int, int], MPoly]

_ZERO = MPoly.zero()


@dataclass(frozen=True)
class BitSeq:
    """A 0/1 sequence on a finite index window."""

    lo: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @property
    def hi(self) -> int:
        return self.lo + len(self.bits) - 1

    def at(self, index: int) -> int:
        if not (self.lo <= index <= self.hi):
            raise WindowTooSmall(
                f"bit sequence covers [{self.lo}, {self.hi}] but index {index} is needed"
            )
        return self.bits[index - self.lo]

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    @staticmethod
    def from_string(text: str, lo: int) -> "BitSeq":
        return BitSeq(lo, tuple(int(ch) for ch in text.strip()))

    @staticmethod
    def random(rng: random.Random, lo: int, hi: int) -> "BitSeq":
        return BitSeq(lo, tuple(rng.randint(0, 1) for _ in range(hi - lo + 1)))

    def is_constant(self) -> bool:
        return len(set(self.bits)) <= 1


@dataclass
class Rank1Module:
    """Free rank-one module: templates per family, scaled by ``c^i``."""

    families: tuple[str, ...]
    alpha: MPoly
    beta: MPoly
    c: MPoly
    d: MPoly
    templates: dict[str, MPoly]

    kind = "rank1"

    def template(self, family: str) -> MPoly:
        return self.templates.get(family, _ZERO)

    def is_numeric(self) -> bool:
        return all(
            p.is_constant() for p in (self.alpha, self.beta, self.c, self.d)
        )

    def c_value(self) -> GaussianRational:
        return self.c.constant_value()

    def action(self, family: str, index: int) -> MPoly:
        """Explicit action template of ``F_index`` (numeric ``c`` only)."""
        t = self.template(family)
        cval = self.c_value()
        if not cval:
            return t if index == 0 else _ZERO
        return t.scale(cval**index)

    def all_actions_zero(self) -> bool:
        return all(t.is_zero() for t in self.templates.values())


def build_rank1(
    spec: AlgebraSpec,
    alpha: ParamLike = "sym",
    beta: ParamLike = "sym",
    c: ParamLike = "sym",
    d: ParamLike = 0,
) -> Rank1Module:
    """Rank-one module over ``spec``: L acts by ``c^i (d + alpha*l + beta)``.

    The scalar slot ``d`` extends the action of the Y family (or of M when
    the algebra has no Y family); the checker, not the builder, decides for
    which algebra parameters the result is actually a module.
    """
    pa = as_param(alpha, MODULE_SYMBOLS["alpha"])
    pb = as_param(beta, MODULE_SYMBOLS["beta"])
    pc = as_param(c, MODULE_SYMBOLS["c"])
    pd = as_param(d, MODULE_SYMBOLS["d"])
    templates: dict[str, MPoly] = {}
    if "L" in spec.families:
        templates["L"] = MPoly.var(VAR_D) + pa * MPoly.var(VAR_L) + pb
    ext_family = "Y" if "Y" in spec.families else ("M" if "M" in spec.families else None)
    for fam in spec.families:
        if fam == "L":
            continue
        templates[fam] = pd if fam == ext_family else _ZERO
    return Rank1Module(
        families=spec.families, alpha=pa, beta=pb, c=pc, d=pd, templates=templates
    )


@dataclass
class GradedModule:
    """Graded free intermediate-series module with explicit coefficient tables."""

    families: tuple[str, ...]
    kind: str                       # "vab" | "vAb" | "custom"
    coeffs: dict[str, CoeffFn]
    params: dict[str, MPoly] = field(default_factory=dict)
    bitseq: BitSeq | None = None

    def action(self, family: str, gen_index: int, basis_index: int) -> MPoly:
        fn = self.coeffs.get(family)
        return fn(gen_index, basis_index) if fn is not None else _ZERO

    def extension_family(self) -> str | None:
        return "Y" if "Y" in self.families else ("M" if "M" in self.families else None)


def build_graded(
    spec: AlgebraSpec,
    kind: str,
    alpha_or_bits: ParamLike | BitSeq = "sym",
    beta: ParamLike = "sym",
    d: ParamLike = 0,
) -> GradedModule:
    """Graded module of kind ``vab`` (uniform weights) or ``vAb`` (case split).

    The extension slot ``d`` feeds the Y family action (M for algebras
    without Y): ``F_i . v_m = d * v_{i+m}``.
    """
    pb = as_param(beta, MODULE_SYMBOLS["beta"])
    pd = as_param(d, MODULE_SYMBOLS["d"])
    dvar = MPoly.var(VAR_D)
    lvar = MPoly.var(VAR_L)
    params: dict[str, MPoly] = {"beta": pb, "d": pd}
    bits: BitSeq | None = None
    if kind == "vab":
        pa = as_param(alpha_or_bits, MODULE_SYMBOLS["alpha"])
        params["alpha"] = pa
        base = dvar + pa * lvar + pb

        def f_action(i: int, m: int, _t: MPoly = base) -> MPoly:
            return _t

    elif kind == "vAb":
        if not isinstance(alpha_or_bits, BitSeq):
            raise TypeError("vAb modules need a BitSeq")
        bits = alpha_or_bits
        low = dvar + pb
        high = dvar + pb + lvar
        cases = {
            (0, 0): low,
            (1, 1): high,
            (0, 1): MPoly.const(1),
            (1, 0): low * high,
        }

        def f_action(i: int, m: int, _bits: BitSeq = bits, _cases=cases) -> MPoly:
            return _cases[(_bits.at(m), _bits.at(i + m))]

    else:
        raise ValueError(f"unknown graded module kind {kind!r}")

    coeffs: dict[str, CoeffFn] = {"L": f_action}
    ext_family = "Y" if "Y" in spec.families else ("M" if "M" in spec.families else None)
    for fam in spec.families:
        if fam == "L":
            continue
        if fam == ext_family and not pd.is_zero():
            coeffs[fam] = lambda i, m, _p=pd: _p
    return GradedModule(
        families=spec.families, kind=kind, coeffs=coeffs, params=params, bitseq=bits
    )


def graded_from_tables(
    families: tuple[str, ...],
    tables: Mapping[str, CoeffFn],
    bitseq: BitSeq | None = None,
) -> GradedModule:
    """Custom graded module from raw coefficient tables (for oracles/tests)."""
    return GradedModule(
        families=families, kind="custom", coeffs=dict(tables), bitseq=bitseq
    )


# ---------------------------------------------------------------------------
# module axiom checker
# ---------------------------------------------------------------------------


def _as_bracket_var(template: MPoly, var: str | MPoly) -> MPoly:
    """Instantiate an action template (in d, l) at another bracket variable."""
    if isinstance(var, str):
        if var == VAR_L:
            return template
        return template.substitute(VAR_L, MPoly.var(var))
    return template.substitute(VAR_L, var)


@dataclass
class ModuleReport:
    """Outcome of a module-axiom or relation-oracle run."""

    module_kind: str
    checked: int = 0
    residuals: dict = field(default_factory=dict)   # key -> nonzero MPoly
    notes: list[str] = field(default_factory=list)

    @property
    def all_zero(self) -> bool:
        return not self.residuals


def _pair_residual_rank1(
    spec: AlgebraSpec, module: Rank1Module, fam_f: str, fam_g: str
) -> MPoly:
    lvar = MPoly.var(VAR_L)
    mvar = MPoly.var(VAR_M)
    t_f = module.template(fam_f)
    t_g = module.template(fam_g)
    term1 = _as_bracket_var(t_g, VAR_M).shift(VAR_D, lvar) * t_f
    term2 = t_f.shift(VAR_D, mvar) * _as_bracket_var(t_g, VAR_M)
    term3 = _ZERO
    for target, template in spec.templates(fam_f, fam_g):
        t_h = module.template(target)
        if t_h.is_zero():
            continue
        head = template.substitute(VAR_D, -(lvar + mvar))
        term3 = term3 + head * _as_bracket_var(t_h, lvar + mvar)
    return term1 - term2 - term3


def _triple_residual_graded(
    spec: AlgebraSpec,
    module: GradedModule,
    fam_f: str,
    fam_g: str,
    i: int,
    j: int,
    m: int,
) -> MPoly:
    lvar = MPoly.var(VAR_L)
    mvar = MPoly.var(VAR_M)
    g_jm = module.action(fam_g, j, m)
    f_i_jm = module.action(fam_f, i, j + m)
    f_im = module.action(fam_f, i, m)
    g_j_im = module.action(fam_g, j, i + m)
    term1 = _as_bracket_var(g_jm, VAR_M).shift(VAR_D, lvar) * f_i_jm
    term2 = f_im.shift(VAR_D, mvar) * _as_bracket_var(g_j_im, VAR_M)
    term3 = _ZERO
    for target, template in spec.templates(fam_f, fam_g):
        t_h = module.action(target, i + j, m)
        if t_h.is_zero():
            continue
        head = template.substitute(VAR_D, -(lvar + mvar))
        term3 = term3 + head * _as_bracket_var(t_h, lvar + mvar)
    return term1 - term2 - term3


def check_module_axioms(
    spec: AlgebraSpec,
    module: Rank1Module | GradedModule,
    n_basis: int = 3,
    k_gen: int = 2,
) -> ModuleReport:
    """Residuals of ``x.(y.v) - y.(x.v) - [x_l y].v`` over the module.

    Rank-one modules are checked once per ordered family pair on the
    index-free templates (exhaustive for all indices; valid for every
    nonzero scale base, and literal when the scale base is symbolic).
    Graded modules are checked per (family pair, generator indices, basis
    index) over the window ``|i|, |j| <= k_gen``, ``|m| <= n_basis``.
    """
    if isinstance(module, Rank1Module):
        report = ModuleReport(module_kind="rank1")
        report.notes.append(
            "rank-one residuals are index-free: the scale-base power of every "
            "term of the identity for (F_i, G_j) is c^(i+j)"
        )
        for fam_f in spec.families:
            for fam_g in spec.families:
                residual = _pair_residual_rank1(spec, module, fam_f, fam_g)
                report.checked += 1
                if not residual.is_zero():
                    report.residuals[(fam_f, fam_g)] = residual
        return report

    report = ModuleReport(module_kind=module.kind)
    if module.bitseq is not None:
        need = n_basis + 2 * k_gen
        if module.bitseq.lo > -need or module.bitseq.hi < need:
            raise WindowTooSmall(
                f"bit sequence must cover [-{need}, {need}] for n_basis={n_basis}, "
                f"k_gen={k_gen}"
            )
    gen_range = range(-k_gen, k_gen + 1)
    basis_range = range(-n_basis, n_basis + 1)
    for fam_f in spec.families:
        for fam_g in spec.families:
            for i in gen_range:
                for j in gen_range:
                    for m in basis_range:
                        residual = _triple_residual_graded(
                            spec, module, fam_f, fam_g, i, j, m
                        )
                        report.checked += 1
                        if not residual.is_zero():
                            report.residuals[(fam_f, fam_g, i, j, m)] = residual
    return report


# ---------------------------------------------------------------------------
# relation oracle for graded modules (hand-coded identities)
# ---------------------------------------------------------------------------


def relations_oracle(
    module: GradedModule,
    a: ParamLike,
    b: ParamLike,
    n_basis: int = 3,
    k_gen: int = 2,
) -> ModuleReport:
    """Evaluate the five structure-coefficient relations directly.

    With f, g, h the L/M/Y coefficient tables of a graded module, the
    relations are (all as polynomial identities in d, l, m):

        LM:  g[j,m](d+l, m') f[i,j+m](d, l) - f[i,m](d+m', l) g[j,i+m](d, m')
                 = ((a-1) l - m' + b) g[i+j,m](d, l+m')
        LY:  same shape with h and weight ((a/2) l - m' + b/2)
        YY:  h[j,m](d+l, m') h[i,j+m](d, l) - h[i,m](d+m', l) h[j,i+m](d, m')
                 = (l - m') g[i+j,m](d, l+m')
        MY:  h[j,m](d+l, m') g[i,j+m](d, l) = g[i,m](d+m', l) h[j,i+m](d, m')
        MM:  g[j,m](d+l, m') g[i,j+m](d, l) = g[i,m](d+m', l) g[j,i+m](d, m')

    (``m'`` denotes the second bracket variable.)  This oracle never touches
    the bracket table, so it is an independent cross-check of the generic
    axiom checker.
    """
    pa = as_param(a, "a")
    pb = as_param(b, "b")
    lvar = MPoly.var(VAR_L)
    mvar = MPoly.var(VAR_M)
    half = Fraction(1, 2)

    def f(i: int, m: int) -> MPoly:
        return module.action("L", i, m)

    def g(i: int, m: int) -> MPoly:
        return module.action("M", i, m)

    def h(i: int, m: int) -> MPoly:
        return module.action("Y", i, m)

    def at_mu_shift(table, i, m):
        return _as_bracket_var(table(i, m), VAR_M).shift(VAR_D, lvar)

    def at_mu(table, i, m):
        return _as_bracket_var(table(i, m), VAR_M)

    def at_sum(table, i, m):
        return _as_bracket_var(table(i, m), lvar + mvar)

    w_lm = (pa - 1) * lvar - mvar + pb
    w_ly = pa.scale(half) * lvar - mvar + pb.scale(half)
    has_y = "Y" in module.families

    report = ModuleReport(module_kind=f"oracle:{module.kind}")
    gen_range = range(-k_gen, k_gen + 1)
    basis_range = range(-n_basis, n_basis + 1)
    for i in gen_range:
        for j in gen_range:
            for m in basis_range:
                fm_shift = f(i, m).shift(VAR_D, mvar)
                rel: dict[str, MPoly] = {}
                rel["LM"] = (
                    at_mu_shift(g, j, m) * f(i, j + m)
                    - fm_shift * at_mu(g, j, i + m)
                    - w_lm * at_sum(g, i + j, m)
                )
                rel["MM"] = at_mu_shift(g, j, m) * g(i, j + m) - g(i, m).shift(
                    VAR_D, mvar
                ) * at_mu(g, j, i + m)
                if has_y:
                    rel["LY"] = (
                        at_mu_shift(h, j, m) * f(i, j + m)
                        - fm_shift * at_mu(h, j, i + m)
                        - w_ly * at_sum(h, i + j, m)
                    )
                    rel["YY"] = (
                        at_mu_shift(h, j, m) * h(i, j + m)
                        - h(i, m).shift(VAR_D, mvar) * at_mu(h, j, i + m)
                        - (lvar - mvar) * at_sum(g, i + j, m)
                    )
                    rel["MY"] = at_mu_shift(h, j, m) * g(i, j + m) - g(i, m).shift(
                        VAR_D, mvar
                    ) * at_mu(h, j, i + m)
                for name, residual in rel.items():
                    report.checked += 1
                    if not residual.is_zero():
                        report.residuals[(name, i, j, m)] = residual
    return report


# ---------------------------------------------------------------------------
# applying actions to module elements (for sesquilinearity spot checks)
# ---------------------------------------------------------------------------

BasisCombo = dict[int, MPoly]


def apply_action(
    module: Rank1Module | GradedModule,
    x: GenPoly,
    vec: BasisCombo,
    bracket_var: str | MPoly = VAR_L,
) -> BasisCombo:
    """``x . vec`` extended by conformal sesquilinearity.

    ``vec`` maps basis indices to coefficient polynomials (rank-one modules
    use the single index 0).
    """
    v = MPoly.var(bracket_var) if isinstance(bracket_var, str) else MPoly.of(bracket_var)
    out: BasisCombo = {}
    for gen, p in x.terms.items():
        p_at = p.substitute(VAR_D, -v)
        for m, q in vec.items():
            q_shift = q.shift(VAR_D, v)
            if isinstance(module, Rank1Module):
                act = module.action(gen.family, gen.index)
                target = m
            else:
                act = module.action(gen.family, gen.index, m)
                target = gen.index + m
            if act.is_zero():
                continue
            if not (isinstance(bracket_var, str) and bracket_var == VAR_L):
                act = _as_bracket_var(act, v)
            contrib = p_at * q_shift * act
            acc = out.get(target, _ZERO) + contrib
            if acc.is_zero():
                out.pop(target, None)
            else:
                out[target] = acc
    return out


# ---------------------------------------------------------------------------
# reducibility witness search
# ---------------------------------------------------------------------------


@dataclass
class WitnessResult:
    """Outcome of the submodule witness search on a rank-one module."""

    witness: MPoly | None = None
    degree: int | None = None
    trivial_module: bool = False
    all_actions_zero: bool = False
    undecided: list[str] = field(default_factory=list)
    note: str = ""


def reducibility_witness(module: Rank1Module, max_degree: int = 3) -> WitnessResult:
    """Search for monic q(d) with q | q(d+l) * T_F for every acting family.

    Such a q generates a proper conformal submodule ``q(d) C[d] v``.  The
    search is exhaustive for degrees 1..max_degree; absence of a witness
    supports irreducibility at these degrees but does not prove it in
    general.
    """
    if not module.is_numeric():
        raise ValueError("witness search needs numeric module parameters")
    cval = module.c_value()
    if module.all_actions_zero() or not cval:
        return WitnessResult(
            trivial_module=True,
            all_actions_zero=module.all_actions_zero(),
            note="scale base is zero: only the index-0 generators act; "
            "flagged as trivial, no witness search performed",
        )
    acting = [t for t in module.templates.values() if not t.is_zero()]
    lvar = MPoly.var(VAR_L)
    for degree in range(1, max_degree + 1):
        wnames = [f"w{k}" for k in range(degree)]
        q = MPoly.var(VAR_D, degree)
        for k, name in enumerate(wnames):
            q = q + MPoly.var(name) * MPoly.var(VAR_D, k)
        q_shift = q.shift(VAR_D, lvar)
        equations: list[MPoly] = []
        for t in acting:
            _, rem = (q_shift * t).divmod_in(q, VAR_D)
            for coeff in rem.split_by([VAR_D, VAR_L]).values():
                if not coeff.is_zero():
                    equations.append(coeff)
        solution = _solve_witness_equations(equations, wnames)
        if solution == "undecided":
            return WitnessResult(
                undecided=[f"degree {degree}: nonlinear residual equations"],
                note="witness search undecided at this degree bound",
            )
        if solution is None:
            continue
        witness = MPoly.var(VAR_D, degree)
        for k, name in enumerate(wnames):
            witness = witness + MPoly.var(VAR_D, k).scale(solution[name])
        for t in acting:
            (witness.shift(VAR_D, lvar) * t).divide_exact(witness)
        return WitnessResult(witness=witness, degree=degree)
    return WitnessResult(note=f"no witness up to degree {max_degree}")


def _solve_witness_equations(
    equations: list[MPoly], wnames: list[str]
) -> dict[str, GaussianRational] | None | str:
    """Solve the remainder equations in the witness coefficients.

    Returns the coefficient values, None when the system is provably
    inconsistent, or 'undecided' when nonlinear equations survive linear
    propagation (does not occur for the action shapes this package builds).
    """
    linear_rows: list[list[GaussianRational]] = []
    linear_rhs: list[MPoly] = []
    nonlinear: list[MPoly] = []
    for eq in equations:
        if eq.is_zero():
            continue
        if eq.is_constant():
            return None
        if eq.degree() <= 1:
            row = []
            rest = eq
            for name in wnames:
                row.append(eq.coeff_extract([name], {name: 1}).constant_value())
                rest = rest.substitute(name, 0)
            linear_rows.append(row)
            linear_rhs.append(-rest)
        else:
            nonlinear.append(eq)
    if not linear_rows:
        return "undecided" if nonlinear else {
            name: GaussianRational.of(0) for name in wnames
        }
    try:
        sol = linear_solve(linear_rows, linear_rhs)
    except Inconsistent:
        return None
    values: dict[str, GaussianRational] = {}
    for name, value in zip(wnames, sol.solution):
        if not value.is_constant():
            return "undecided"
        values[name] = value.constant_value()
    for eq in nonlinear:
        r = eq
        for name, value in values.items():
            r = r.substitute(name, MPoly.const(value))
        if not r.is_zero():
            # with free parameters another choice might work; stay honest
            return "undecided" if sol.kernel else None
    return values


# ---------------------------------------------------------------------------
# module descriptor text format
# ---------------------------------------------------------------------------


def serialize_module(module: Rank1Module | GradedModule) -> str:
    lines: list[str] = []
    if isinstance(module, Rank1Module):
        lines.append("module rank1")
        lines.append("families " + " ".join(module.families))
        for key in ("alpha", "beta", "c", "d"):
            lines.append(f"param {key} : {getattr(module, key)}")
    else:
        if module.kind == "custom":
            raise ValueError("custom graded modules have no text form")
        lines.append(f"module graded-{module.kind}")
        lines.append("families " + " ".join(module.families))
        for key, value in module.params.items():
            lines.append(f"param {key} : {value}")
        if module.bitseq is not None:
            lines.append(f"bitseq {module.bitseq.lo} : {module.bitseq.to_string()}")
    return "\n".join(lines) + "\n"


def parse_module(text: str, spec: AlgebraSpec) -> Rank1Module | GradedModule:
    kind = ""
    families: tuple[str, ...] = ()
    params: dict[str, MPoly] = {}
    bits: BitSeq | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "module":
            kind = rest.strip()
        elif head == "families":
            families = tuple(rest.split())
        elif head == "param":
            key, _, value = rest.partition(":")
            params[key.strip()] = parse_poly(value)
        elif head == "bitseq":
            lo_txt, _, value = rest.partition(":")
            bits = BitSeq.from_string(value, int(lo_txt))
        else:
            raise ValueError(f"unknown directive {head!r} in module text")
    if families and set(families) != set(spec.families):
        raise ValueError("module families do not match the algebra")
    if kind == "rank1":
        return build_rank1(
            spec,
            params.get("alpha", "sym"),
            params.get("beta", "sym"),
            params.get("c", "sym"),
            params.get("d", 0),
        )
    if kind == "graded-vab":
        return build_graded(
            spec,
            "vab",
            params.get("alpha", "sym"),
            params.get("beta", "sym"),
            params.get("d", 0),
        )
    if kind == "graded-vAb":
        if bits is None:
            raise ValueError("graded-vAb module text needs a bitseq line")
        return build_graded(
            spec, "vAb", bits, params.get("beta", "sym"), params.get("d", 0)
        )
    raise ValueError(f"unknown module kind {kind!r}")
