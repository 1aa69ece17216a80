"""Brackets between observable forms and their dynamical relations.

All constructions are exact.  The pseudobracket of a Hamiltonian with an
observable (p-1)-form is computed from a pointwise decomposable solution
of the Hamilton equation; for p < n its well-defined content is the list
of pairings against the complementary-degree copolarization generators,
and representative-independence across the solution family is verified on
every call.  The Poisson bracket of two forms with Hamilton vector
fields is  {F, G} = xi_F ^ xi_G . Omega, with the usual structural
identities (derivation of d, Jacobi up to an exact term, the
theta-corrected bracket with vanishing Jacobi sum) checked exactly in the
test-suite.  Complementary-degree pairs (p + q = n + 1) get their scalar
bracket through linear smearing and exact form division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import Polynomial, RationalSampler
from .charts import Chart
from .dynamics import HamiltonianSolution
from .exterior import (
    PolyForm,
    PolyMultivector,
    Terms,
    _cohook_terms,
    _hook_terms,
    _pair_terms,
    _wedge_terms,
    eval_terms,
    ext_d,
    form_basis,
    hook,
    lie_bracket,
    wedge,
)
from .linalg import LinearSolver
from .observables import AOFTensor, Copolarization, NotAOF, aof_solve


class NotWellDefined(Exception):
    """Representative dependence detected: dF is not observable."""


class NotDefined(Exception):
    """Bracket outside the constructed cases (p+q != n+1 and p, q < n)."""


@dataclass(frozen=True)
class PseudobracketValue:
    """Value of {H, F} at a point: a scalar for p = n, otherwise the
    pairings against the degree-(n-p) copolarization generators."""

    p: int
    n: int
    scalar: Fraction | None
    pairings: tuple[Fraction, ...] | None

    def __eq__(self, other):
        if not isinstance(other, PseudobracketValue):
            return NotImplemented
        return (self.p, self.n, self.scalar, self.pairings) == (other.p, other.n, other.scalar, other.pairings)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _representative_value(
    chart: Chart,
    x_terms: Terms,
    df_num: Terms,
    p: int,
    copol: Copolarization | None,
    point: Sequence[Fraction],
) -> PseudobracketValue:
    n = chart.n
    sign = _sign((n - p) * p)
    contracted = _cohook_terms(x_terms, df_num)
    if p == n:
        value = contracted.get((), Fraction(0))
        return PseudobracketValue(p=p, n=n, scalar=sign * value, pairings=None)
    if copol is None:
        raise ValueError("pairings for p < n need a copolarization")
    pairings = []
    for phi in copol.degree(n - p):
        phi_num = eval_terms(phi.terms, point)
        pairings.append(sign * (_pair_terms(contracted, phi_num) or Fraction(0)))
    return PseudobracketValue(p=p, n=n, scalar=None, pairings=tuple(pairings))


def pseudobracket(
    chart: Chart,
    observable: PolyForm,
    solution: HamiltonianSolution,
    copol: Copolarization | None = None,
) -> PseudobracketValue:
    """{H, F} = sign * X L dF for X in the solution family at the point.

    Every kernel direction of the family is tried; if any representative
    changes the reported value the bracket is not well defined for this F
    (its differential fails observability) and NotWellDefined is raised.
    """
    p = observable.degree + 1
    n = chart.n
    if not 1 <= p <= n:
        raise ValueError("observable degree out of range")
    df_num = eval_terms(ext_d(observable).terms, solution.point)
    reference = None
    schedules = [()] + [
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(len(solution.kernel)))
        for i in range(len(solution.kernel))
    ]
    for coeffs in schedules:
        value = _representative_value(
            chart, solution.expand(coeffs), df_num, p, copol, solution.point
        )
        if reference is None:
            reference = value
        elif value != reference:
            raise NotWellDefined(
                f"pseudobracket changes across representatives: {reference} vs {value}"
            )
    assert reference is not None
    return reference


def pseudobracket_aof(
    chart: Chart,
    hamiltonian: Polynomial,
    tensor: AOFTensor,
    point: Sequence[Fraction],
) -> PseudobracketValue:
    """The Hamilton-tensor route: <{H, F}, phi> = -dH(xi_F(phi))."""
    point = tuple(Fraction(v) for v in point)
    p = tensor.p
    n = chart.n
    dh_num: Terms = {}
    for idx, name in enumerate(chart.frame.names):
        v = hamiltonian.diff(name).eval(point)
        if v:
            dh_num[(idx,)] = v
    values = []
    for xi in tensor.vectors:
        xi_num = eval_terms(xi.terms, point)
        values.append(-(_pair_terms(xi_num, dh_num) or Fraction(0)))
    if p == n:
        return PseudobracketValue(p=p, n=n, scalar=values[0], pairings=None)
    return PseudobracketValue(p=p, n=n, scalar=None, pairings=tuple(values))


def pseudobracket_function(chart: Chart, observable: PolyForm) -> Polynomial:
    """For an (n-1)-form with Hamilton vector field: {H, F} = -dH(xi_F)
    as a polynomial function on the chart."""
    if chart.hamiltonian is None:
        raise ValueError("chart has no Hamiltonian")
    xi = aof_solve(chart, observable)
    if isinstance(xi, NotAOF):
        raise ValueError("observable has no Hamilton vector field")
    acc = chart.frame.poly_zero()
    for (j,), coeff in xi.terms.items():
        acc = acc + coeff * chart.hamiltonian.diff(chart.frame.names[j])
    return -acc


# ---------------------------------------------------------------------------
# Poisson-type brackets of (n-1)-forms
# ---------------------------------------------------------------------------


def _hamilton_field(chart: Chart, observable: PolyForm) -> PolyMultivector:
    xi = aof_solve(chart, observable)
    if isinstance(xi, NotAOF):
        raise ValueError("bracket requires forms with Hamilton vector fields")
    return xi


def poisson_bracket(chart: Chart, f: PolyForm, g: PolyForm) -> PolyForm:
    """{F, G} = xi_F ^ xi_G . Omega, an (n-1)-form with Hamilton field
    [xi_F, xi_G]."""
    xi_f = _hamilton_field(chart, f)
    xi_g = _hamilton_field(chart, g)
    return hook(wedge(xi_f, xi_g), chart.omega)


def bracket_field_identity_defect(chart: Chart, f: PolyForm, g: PolyForm) -> PolyForm:
    """d{F, G} + [xi_F, xi_G] . Omega, identically zero."""
    xi_f = _hamilton_field(chart, f)
    xi_g = _hamilton_field(chart, g)
    return ext_d(hook(wedge(xi_f, xi_g), chart.omega)) + hook(lie_bracket(xi_f, xi_g), chart.omega)


def jacobi_defect(chart: Chart, f: PolyForm, g: PolyForm, h: PolyForm) -> PolyForm:
    """Cyclic sum {{F,G},H} + {{G,H},F} + {{H,F},G} minus the exact term
    d(xi_F ^ xi_G ^ xi_H . Omega); identically zero."""
    cyclic = (
        poisson_bracket(chart, poisson_bracket(chart, f, g), h)
        + poisson_bracket(chart, poisson_bracket(chart, g, h), f)
        + poisson_bracket(chart, poisson_bracket(chart, h, f), g)
    )
    xi_f = _hamilton_field(chart, f)
    xi_g = _hamilton_field(chart, g)
    xi_h = _hamilton_field(chart, h)
    exact = ext_d(hook(wedge(wedge(xi_f, xi_g), xi_h), chart.omega))
    return cyclic - exact


def theta_bracket(chart: Chart, f: PolyForm, g: PolyForm) -> PolyForm:
    """{F, G}_theta = {F, G} + d(xi_F . G - xi_G . F + xi_F ^ xi_G . theta).

    Differs from {F, G} by an exact form, is antisymmetric, and satisfies
    the Jacobi identity with zero right-hand side.  With the sign
    convention dF + xi_F . Omega = 0 used throughout, this sign of the
    correction is the one that makes the Jacobi sum vanish identically
    (asserted exactly over random triples in the test-suite); flipping
    the two single-field terms breaks it.
    """
    if chart.theta is None:
        raise ValueError("theta bracket needs the chart primitive theta")
    xi_f = _hamilton_field(chart, f)
    xi_g = _hamilton_field(chart, g)
    base = hook(wedge(xi_f, xi_g), chart.omega)
    correction = hook(xi_f, g) - hook(xi_g, f) + hook(wedge(xi_f, xi_g), chart.theta)
    return base + ext_d(correction)


def theta_jacobi_sum(chart: Chart, f: PolyForm, g: PolyForm, h: PolyForm) -> PolyForm:
    return (
        theta_bracket(chart, theta_bracket(chart, f, g), h)
        + theta_bracket(chart, theta_bracket(chart, g, h), f)
        + theta_bracket(chart, theta_bracket(chart, h, f), g)
    )


def external_bracket(chart: Chart, f: PolyForm, g: PolyForm) -> PolyForm:
    """Bracket of a (p-1)-form with an (n-1)-form, the side with a Hamilton
    vector field supplying the contraction:

        {F, G} = xi_F . dG   when F is an (n-1)-form with Hamilton field,
        {F, G} = -xi_G . dF  when G is; both when both are, consistently.
    """
    n = chart.n
    xi_f = aof_solve(chart, f) if f.degree == n - 1 else NotAOF(residual=PolyForm.zero(chart.frame, n))
    if not isinstance(xi_f, NotAOF):
        return hook(xi_f, ext_d(g))
    xi_g = aof_solve(chart, g) if g.degree == n - 1 else NotAOF(residual=PolyForm.zero(chart.frame, n))
    if not isinstance(xi_g, NotAOF):
        return -hook(xi_g, ext_d(f))
    raise ValueError("external bracket needs one (n-1)-form with a Hamilton vector field")


# ---------------------------------------------------------------------------
# form division and the complementary-degree scalar bracket
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisionResult:
    quotient: PolyForm | None
    residual: PolyForm | None
    unique: bool

    @property
    def divisible(self) -> bool:
        return self.quotient is not None


def form_division(phi: PolyForm, divisors: Sequence[PolyForm]) -> DivisionResult:
    """Solve  phi = a^1 ^ ... ^ a^r ^ chi  for chi, the divisors being
    constant-coefficient 1-forms.  The quotient is unique exactly when it
    is a scalar (degree 0); otherwise it is one solution, defined modulo
    the ideal spanned by the divisors."""
    frame = phi.frame
    r = len(divisors)
    if r == 0:
        return DivisionResult(quotient=phi, residual=None, unique=True)
    for a in divisors:
        if a.degree != 1:
            raise ValueError("divisors must be 1-forms")
        if not all(c.is_constant() for c in a.terms.values()):
            raise ValueError("divisors must have constant coefficients")
    chi_degree = phi.degree - r
    if chi_degree < 0:
        raise ValueError("too many divisors for the degree of phi")
    w = divisors[0]
    for a in divisors[1:]:
        w = wedge(w, a)
    if not w:
        raise ValueError("divisors are linearly dependent")

    from .exterior import all_index_tuples
    from .linalg import RowBasis

    chi_keys = all_index_tuples(frame.dim, chi_degree)
    keys: dict[tuple[int, ...], None] = {}
    columns = []
    w_num = {k: c.constant_value() for k, c in w.terms.items()}
    for key in chi_keys:
        col = _wedge_terms(w_num, {key: Fraction(1)})
        for k2 in col:
            keys.setdefault(k2)
        columns.append(col)
    for k2 in phi.terms:
        keys.setdefault(k2)
    basis = RowBasis(len(chi_keys))
    basis_keys = []
    for key in keys:
        row = [columns[j].get(key, Fraction(0)) for j in range(len(chi_keys))]
        if basis.add(row):
            basis_keys.append(key)
        if basis.rank == len(chi_keys):
            break
    matrix = [[columns[j].get(key, Fraction(0)) for j in range(len(chi_keys))] for key in basis_keys]
    solver = LinearSolver(matrix)
    zero = frame.poly_zero()
    rhs = [phi.terms.get(key, zero) for key in basis_keys]
    solution = solver.solve(rhs)
    if solution is None:
        solution = [zero] * len(chi_keys)
    chi = PolyForm(frame, chi_degree, {chi_keys[j]: solution[j] for j in range(len(chi_keys)) if solution[j]})
    residual = phi - wedge(w, chi)
    if residual:
        return DivisionResult(quotient=None, residual=residual, unique=False)
    return DivisionResult(quotient=chi, residual=None, unique=chi_degree == 0)


def complementary_bracket(
    chart: Chart,
    f: PolyForm,
    g: PolyForm,
    smear_count: int = 3,
) -> Polynomial:
    """Scalar bracket of a (p-1)-form and a (q-1)-form with p + q = n + 1.

    Both forms are smeared with wedges of horizontal coordinate
    differentials to (n-1)-forms with Hamilton vector fields, their
    Poisson bracket is divided by the smearing wedge, and the scalar must
    not depend on the admissible choice of smearing coordinates (checked
    over `smear_count` choices).
    """
    n = chart.n
    p = f.degree + 1
    q = g.degree + 1
    if p + q != n + 1:
        raise NotDefined(
            f"complementary bracket needs p + q = n + 1, got p={p}, q={q}, n={n}"
        )
    horizontal = chart.horizontal
    results: list[tuple[tuple[str, ...], tuple[str, ...], Polynomial]] = []
    for f_names in combinations(horizontal, n - p):
        for g_names in combinations([h for h in horizontal if h not in f_names], n - q):
            f_wedge = [form_basis(chart.frame, name) for name in f_names]
            g_wedge = [form_basis(chart.frame, name) for name in g_names]
            smeared_f = f
            for a in reversed(f_wedge):
                smeared_f = wedge(a, smeared_f)
            smeared_g = g
            for b in reversed(g_wedge):
                smeared_g = wedge(b, smeared_g)
            xi_f = aof_solve(chart, smeared_f)
            xi_g = aof_solve(chart, smeared_g)
            if isinstance(xi_f, NotAOF) or isinstance(xi_g, NotAOF):
                continue
            bracket = hook(wedge(xi_f, xi_g), chart.omega)
            division = form_division(bracket, f_wedge + g_wedge)
            if not division.divisible:
                continue
            scalar = division.quotient.terms.get((), chart.frame.poly_zero())
            results.append((f_names, g_names, scalar))
            if len(results) >= smear_count:
                break
        if len(results) >= smear_count:
            break
    if not results:
        raise NotDefined("no admissible smearing produced a Hamilton pair")
    first = results[0][2]
    for f_names, g_names, scalar in results[1:]:
        if scalar != first:
            raise NotWellDefined(
                f"complementary bracket depends on smearing: {first.to_text()} vs "
                f"{scalar.to_text()} at {f_names}/{g_names}"
            )
    return first


# ---------------------------------------------------------------------------
# the dynamical relation between observable pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DynamicsRelationVerdict:
    passed: bool
    checked: int
    failure: tuple[Fraction, Fraction] | None = None


def dynamics_relation_check(
    chart: Chart,
    f: PolyForm,
    g: PolyForm,
    solution: HamiltonianSolution,
    extra_random: int = 3,
    seed: int = 0,
) -> DynamicsRelationVerdict:
    """Exact check of the two-observable dynamical relation at a point:

        {H, F} . dG (Y) = (-1)^{(n-p)(n-q)} {H, G} . dF (Y)

    for (p+q-n)-vectors Y built from the base solution frame (all
    increasing sub-wedges plus seeded random rational combinations)."""
    n = chart.n
    p = f.degree + 1
    q = g.degree + 1
    if p + q < n:
        raise ValueError("relation needs n <= p + q")
    point = solution.point
    df_num = eval_terms(ext_d(f).terms, point)
    dg_num = eval_terms(ext_d(g).terms, point)
    x_terms = solution.expand()
    vf = _cohook_terms(x_terms, df_num)
    vg = _cohook_terms(x_terms, dg_num)
    sign_f = _sign((n - p) * p)
    sign_g = _sign((n - q) * q)
    lhs_form = {k: sign_f * v for k, v in _hook_terms(vf, dg_num).items()}
    rhs_raw = _hook_terms(vg, df_num)
    total_sign = _sign((n - p) * (n - q)) * sign_g
    rhs_form = {k: total_sign * v for k, v in rhs_raw.items()}

    r = p + q - n
    factors = solution.factors()
    candidates: list[Terms] = []
    if r == 0:
        candidates.append({(): Fraction(1)})
    else:
        for subset in combinations(range(n), r):
            acc: Terms = factors[subset[0]]
            for idx in subset[1:]:
                acc = _wedge_terms(acc, factors[idx])
            if acc:
                candidates.append(acc)
        sampler = RationalSampler(seed)
        for _ in range(extra_random):
            mix: Terms = {}
            for base in candidates[: len(list(combinations(range(n), r)))]:
                c = sampler.rational()
                if not c:
                    continue
                for k, v in base.items():
                    s = mix.get(k, Fraction(0)) + c * v
                    if s:
                        mix[k] = s
                    else:
                        mix.pop(k, None)
            if mix:
                candidates.append(mix)
    checked = 0
    for y in candidates:
        lhs = _pair_terms(y, lhs_form) or Fraction(0)
        rhs = _pair_terms(y, rhs_form) or Fraction(0)
        checked += 1
        if lhs != rhs:
            return DynamicsRelationVerdict(passed=False, checked=checked, failure=(lhs, rhs))
    return DynamicsRelationVerdict(passed=True, checked=checked)
