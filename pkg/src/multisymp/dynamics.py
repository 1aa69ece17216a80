"""Pointwise Hamiltonian dynamics on a chart.

Everything here happens at a fixed rational point m of a chart, where the
multisymplectic form and the differential of the Hamiltonian become
rational data and all linear algebra is exact.

Decomposable n-vectors are explored through *vertical-lift families*: a
family is indexed by an increasing n-tuple of base coordinates, and its
members are X = X_1 ^ ... ^ X_n with

    X_slot = d/dq^{a_slot}  +  sum over free coordinates  t * d/dv.

For observability sampling the free coordinates are the fiber
(momentum/energy) directions, which makes X -> X . Omega affine in the
parameters; the kernel of its linear part generates exact pairs with
equal contraction, which is what the observability property quantifies
over.  For solving the Hamilton equation the free coordinates are all
non-selected directions and the polynomial system is reduced by
substituting one affine equation at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .algebra import Polynomial, RationalSampler
from .charts import Chart
from .exterior import (
    DecomposableNVector,
    PolyForm,
    PolyMultivector,
    Terms,
    _hook_terms,
    _pair_terms,
    _wedge_terms,
    eval_terms,
)
from .linalg import column_space_rref, nullspace


class NoSolutionInFamily(Exception):
    """The Hamilton contraction system is inconsistent in this family."""


class DegenerateSystem(Exception):
    """The contraction system could not be reduced by affine elimination."""


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerticalFamily:
    """X_slot = e_{horizontal[slot]} + sum_c t[slot, c] e_c over free coords."""

    chart: Chart
    horizontal: tuple[int, ...]  # coordinate indices, one per slot
    free: tuple[int, ...]  # coordinate indices shared by every slot

    @property
    def params(self) -> list[tuple[int, int]]:
        return [(slot, c) for slot in range(len(self.horizontal)) for c in self.free]

    def factors(self, assignment: Sequence[Fraction]) -> list[Terms]:
        values = list(assignment)
        if len(values) != len(self.horizontal) * len(self.free):
            raise ValueError("parameter vector has the wrong length")
        out = []
        pos = 0
        for h in self.horizontal:
            factor: Terms = {(h,): Fraction(1)}
            for c in self.free:
                v = values[pos]
                pos += 1
                if v:
                    factor[(c,)] = v
            out.append(factor)
        return out

    def expand(self, assignment: Sequence[Fraction]) -> Terms:
        factors = self.factors(assignment)
        acc = factors[0]
        for f in factors[1:]:
            acc = _wedge_terms(acc, f)
        return acc


def observability_family(chart: Chart, horizontal: Sequence[int]) -> VerticalFamily:
    return VerticalFamily(chart, tuple(horizontal), chart.frame.fiber_indices())


def solver_family(chart: Chart) -> VerticalFamily:
    horizontal = tuple(chart.frame.index(h) for h in chart.horizontal)
    if len(set(horizontal)) != chart.n:
        raise ValueError("degenerate horizontal frame")
    free = tuple(i for i in range(chart.dim) if i not in horizontal)
    return VerticalFamily(chart, horizontal, free)


def contraction_form(x_terms: Terms, omega_num: Terms) -> Terms:
    """X . Omega as a numeric 1-form term dict."""
    return _hook_terms(x_terms, omega_num)


class OmegaContraction:
    """Contraction of decomposable n-vectors into a fixed numeric Omega,
    computed from the factors by minors (no full wedge expansion): the
    component along the j-th coordinate differential is

        sum over Omega terms K containing j of  sign * Omega_K * det(X on K - j).
    """

    def __init__(self, omega_num: Terms):
        from .algebra import sort_with_sign

        plan: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
        for key, coeff in omega_num.items():
            for pos, j in enumerate(key):
                rest = key[:pos] + key[pos + 1 :]
                _, sign = sort_with_sign(rest + (j,))
                plan.setdefault(j, []).append((rest, sign * coeff))
        self.plan = plan

    @staticmethod
    def _minor(factors: Sequence[Terms], indices: tuple[int, ...]):
        columns = [[f.get((i,)) for f in factors] for i in indices]
        if any(all(entry is None for entry in col) for col in columns):
            return None
        size = len(indices)
        total = None
        for perm in permutations(range(size)):
            product = Fraction(1)
            ok = True
            for row, col in enumerate(perm):
                entry = columns[col][row]
                if entry is None:
                    ok = False
                    break
                product *= entry
            if not ok:
                continue
            inversions = sum(1 for a in range(size) for b in range(a + 1, size) if perm[a] > perm[b])
            if inversions % 2:
                product = -product
            total = product if total is None else total + product
        return total

    def of_factors(self, factors: Sequence[Terms]) -> Terms:
        out: Terms = {}
        minors: dict[tuple[int, ...], Fraction | None] = {}
        for j, entries in self.plan.items():
            acc = None
            for rest, coeff in entries:
                minor = minors.get(rest, _MISSING)
                if minor is _MISSING:
                    minor = self._minor(factors, rest)
                    minors[rest] = minor
                if minor:
                    term = coeff * minor
                    acc = term if acc is None else acc + term
            if acc:
                out[(j,)] = acc
        return out


_MISSING = object()


_FAMILY_CACHE: dict[tuple, tuple[Chart, Terms, list[tuple[Fraction, ...]]]] = {}


def _family_step_data(
    chart: Chart,
    family: VerticalFamily,
    point: tuple[Fraction, ...],
    omega: OmegaContraction,
) -> tuple[Terms, list[tuple[Fraction, ...]]]:
    """Base contraction and kernel directions of the affine parameter map,
    cached across candidate forms (they depend on the chart point only).
    Keyed by chart identity; the cached reference keeps the id alive."""
    key = (id(chart), family.horizontal, point)
    hit = _FAMILY_CACHE.get(key)
    if hit is not None:
        return hit[1], hit[2]
    nparams = len(family.params)
    zero = [Fraction(0)] * nparams
    base = omega.of_factors(family.factors(zero))
    columns = []
    for j in range(nparams):
        probe = list(zero)
        probe[j] = Fraction(1)
        col = omega.of_factors(family.factors(probe))
        entries = {}
        for k in set(col) | set(base):
            v = col.get(k, Fraction(0)) - base.get(k, Fraction(0))
            if v:
                entries[k] = v
        columns.append(entries)
    matrix = [[columns[j].get((i,), Fraction(0)) for j in range(nparams)] for i in range(chart.dim)]
    kernel = [tuple(v) for v in nullspace(matrix)]
    _FAMILY_CACHE[key] = (chart, base, kernel)
    return base, kernel


# ---------------------------------------------------------------------------
# Hamiltonian n-vector solving
# ---------------------------------------------------------------------------


@dataclass
class HamiltonianSolution:
    """Base decomposable solution of X . Omega = (-1)^n dH at a point,
    plus the kernel directions spanning the affine family of solutions
    inside the solver's vertical-lift parametrization."""

    chart: Chart
    point: tuple[Fraction, ...]
    hamiltonian: Polynomial
    family: VerticalFamily
    base_assignment: tuple[Fraction, ...]
    kernel: list[tuple[Fraction, ...]]
    omega_num: Terms = field(repr=False)
    target: Terms = field(repr=False)  # (-1)^n dH at the point

    @property
    def n(self) -> int:
        return self.chart.n

    def assignment(self, kernel_coeffs: Sequence[Fraction] = ()) -> tuple[Fraction, ...]:
        values = list(self.base_assignment)
        for c, direction in zip(kernel_coeffs, self.kernel):
            if c:
                values = [v + c * d for v, d in zip(values, direction)]
        return tuple(values)

    def factors(self, kernel_coeffs: Sequence[Fraction] = ()) -> list[Terms]:
        return self.family.factors(self.assignment(kernel_coeffs))

    def expand(self, kernel_coeffs: Sequence[Fraction] = ()) -> Terms:
        return self.family.expand(self.assignment(kernel_coeffs))

    def base_nvector(self) -> DecomposableNVector:
        frame = self.chart.frame
        factors = []
        for terms in self.factors():
            factors.append(
                PolyMultivector(frame, 1, {k: frame.poly_const(v) for k, v in terms.items()})
            )
        return DecomposableNVector(tuple(factors))

    def verify(self) -> bool:
        """Exactness of the base solution and of base + each kernel move."""
        checks = [()] + [tuple(Fraction(1) if i == j else Fraction(0) for j in range(len(self.kernel))) for i in range(len(self.kernel))]
        for coeffs in checks:
            if contraction_form(self.expand(coeffs), self.omega_num) != self.target:
                return False
        return True


def differential_at(h: Polynomial, chart: Chart, point: Sequence[Fraction]) -> Terms:
    out: Terms = {}
    for idx, name in enumerate(chart.frame.names):
        v = h.diff(name).eval(point)
        if v:
            out[(idx,)] = v
    return out


def hamiltonian_nvector_solve(chart: Chart, hamiltonian: Polynomial, point: Sequence[Fraction]) -> HamiltonianSolution:
    """Solve X . Omega = (-1)^n dH over the solver family at a point.

    The contraction components are polynomials in the family parameters;
    the system is reduced by repeatedly substituting an equation that is
    affine (with a constant invertible pivot) in one parameter.  The
    surviving free parameters span the affine solution family.
    """
    point = tuple(Fraction(v) for v in point)
    family = solver_family(chart)
    params = family.params
    names = chart.frame.names
    pvars = tuple(f"t{slot}_{names[c]}" for slot, c in params)

    # symbolic factors over the parameter polynomial ring
    factors: list[Terms] = []
    pos = 0
    for slot, h in enumerate(family.horizontal):
        factor: Terms = {(h,): Polynomial.const(pvars, 1)}
        for c in family.free:
            factor[(c,)] = Polynomial.var(pvars, pvars[pos])
            pos += 1
        factors.append(factor)
    x_terms = factors[0]
    for f in factors[1:]:
        x_terms = _wedge_terms(x_terms, f)

    omega_num = eval_terms(chart.omega.terms, point)
    contraction = _hook_terms(x_terms, omega_num)
    sign = -1 if chart.n % 2 else 1
    target = differential_at(hamiltonian, chart, point)

    equations: list[Polynomial] = []
    for j in range(chart.dim):
        lhs = contraction.get((j,), Polynomial.zero(pvars))
        rhs = sign * target.get((j,), Fraction(0))
        equations.append(lhs - rhs)

    solved: dict[str, Polynomial] = {}
    pending = [eq for eq in equations if eq]
    while pending:
        progress = False
        for eq_index, eq in enumerate(pending):
            if eq.is_constant():
                raise NoSolutionInFamily(
                    f"inconsistent contraction system: residual {eq.to_text()}"
                )
            pick = None
            for v in sorted(eq.used_variables()):
                if eq.degree_in(v) != 1:
                    continue
                coeff = eq.coefficient_of(v, 1)
                if coeff.is_constant() and coeff:
                    pick = (v, coeff.constant_value())
                    break
            if pick is None:
                continue
            v, c = pick
            expr = (eq - c * Polynomial.var(pvars, v)) * (Fraction(-1) / c)
            substitution = {v: expr}
            solved = {w: (p.subs(substitution) if v in p.used_variables() else p) for w, p in solved.items()}
            solved[v] = expr
            new_pending = []
            for other in pending[:eq_index] + pending[eq_index + 1 :]:
                reduced = other.subs(substitution) if v in other.used_variables() else other
                if reduced:
                    new_pending.append(reduced)
            pending = new_pending
            progress = True
            break
        if not progress:
            for eq in pending:
                if eq.is_constant():
                    raise NoSolutionInFamily(f"inconsistent contraction system: residual {eq.to_text()}")
            raise DegenerateSystem(
                "no affine pivot available; solution family is not affine in this parametrization"
            )

    free_vars = [v for v in pvars if v not in solved]
    for v, expr in solved.items():
        if expr.total_degree() > 1:
            raise DegenerateSystem(f"solved parameter {v} is not affine in the free parameters")

    zero_point = [Fraction(0)] * len(pvars)
    base_assignment = []
    for name in pvars:
        if name in solved:
            base_assignment.append(solved[name].eval(zero_point))
        else:
            base_assignment.append(Fraction(0))
    kernel: list[tuple[Fraction, ...]] = []
    for f in free_vars:
        direction = []
        for name in pvars:
            if name == f:
                direction.append(Fraction(1))
            elif name in solved:
                direction.append(solved[name].coefficient_of(f, 1).constant_value())
            else:
                direction.append(Fraction(0))
        kernel.append(tuple(direction))

    solution = HamiltonianSolution(
        chart=chart,
        point=point,
        hamiltonian=hamiltonian,
        family=family,
        base_assignment=tuple(base_assignment),
        kernel=kernel,
        omega_num=omega_num,
        target={k: sign * v for k, v in target.items()},
    )
    if not solution.verify():
        raise DegenerateSystem("eliminated system failed exact re-substitution")
    return solution


def frame_compatible_hamiltonian(
    chart: Chart,
    sampler: RationalSampler,
    point: Sequence[Fraction],
    vertical_only: bool = False,
    quadratic_terms: int = 2,
) -> Polynomial:
    """A Hamiltonian that is guaranteed to admit a decomposable solution at
    the given point.

    On a full momentum chart the momentum derivatives of H must realize the
    minors of some n-frame (a quadric condition for n, k >= 2), so random
    momentum polynomials are generically unsolvable.  Here H is built from
    the contraction of a random family member, plus quadratic corrections
    that vanish to second order at the point; with `vertical_only` the
    random member carries momentum-direction components only, so H is the
    top momentum plus a polynomial in the momenta.
    """
    point = tuple(Fraction(v) for v in point)
    family = solver_family(chart)
    names = chart.frame.names
    values = []
    for slot, c in family.params:
        if vertical_only and not chart.frame.coords[c][1].is_fiber:
            values.append(Fraction(0))
        else:
            values.append(sampler.rational())
    omega_num = eval_terms(chart.omega.terms, point)
    contraction = contraction_form(family.expand(values), omega_num)
    sign = -1 if chart.n % 2 else 1
    h = Polynomial.zero(names)
    for (j,), coeff in contraction.items():
        if vertical_only and not chart.frame.coords[j][1].is_fiber:
            # the base-differential components of the contraction are matched
            # by parameters that occur nowhere else, so they may be dropped
            continue
        h = h + (sign * coeff) * Polynomial.var(names, names[j])
    for _ in range(quadratic_terms):
        i = sampler.integer(0, len(names) - 1)
        j = sampler.integer(0, len(names) - 1)
        if vertical_only and not (
            chart.frame.coords[i][1].is_fiber and chart.frame.coords[j][1].is_fiber
        ):
            continue
        shift_i = Polynomial.var(names, names[i]) - point[i]
        shift_j = Polynomial.var(names, names[j]) - point[j]
        h = h + sampler.rational() * shift_i * shift_j
    return h


# ---------------------------------------------------------------------------
# observability sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OFCounterexample:
    """An exact pair X, X~ with equal contraction but different values."""

    family_horizontal: tuple[str, ...]
    base_params: tuple[Fraction, ...]
    kernel_direction: tuple[Fraction, ...]
    scale: Fraction
    value: Fraction
    value_perturbed: Fraction

    def params_perturbed(self) -> tuple[Fraction, ...]:
        return tuple(b + self.scale * d for b, d in zip(self.base_params, self.kernel_direction))


@dataclass(frozen=True)
class OFVerdict:
    passed: bool
    samples_used: int
    counterexample: OFCounterexample | None = None
    failed_point: tuple[Fraction, ...] | None = None


def decomposable_pairing(factors: Sequence[Terms], form_num: Terms) -> Fraction:
    """<X_1 ^ ... ^ X_n, a> from the factors by minors."""
    acc = Fraction(0)
    for key, coeff in form_num.items():
        minor = OmegaContraction._minor(factors, key)
        if minor:
            acc += coeff * minor
    return acc


def of_sampling_test(
    chart: Chart,
    a: PolyForm,
    point: Sequence[Fraction],
    sample_count: int = 4,
    seed: int = 0,
    family_limit: int | None = None,
) -> OFVerdict:
    """Sampled observability of an n-form at a point.

    In every vertical-lift family the contraction X -> X . Omega is affine
    in the parameters; pairs X, X~ differing by a kernel direction of its
    linear part have exactly equal contraction, so a(X) = a(X~) is the
    property under test.  A reported counterexample is exact and final; a
    pass is probabilistic over the seeded sample schedule (affine data on
    an open set extends to the whole family, which is why sampling near
    arbitrary base points suffices).  `family_limit` restricts large
    charts to a seeded subset of the base-coordinate families.
    """
    if a.degree != chart.n:
        raise ValueError(f"candidate form must have degree n = {chart.n}")
    point = tuple(Fraction(v) for v in point)
    omega = OmegaContraction(eval_terms(chart.omega.terms, point))
    a_num = eval_terms(a.terms, point)
    sampler = RationalSampler(seed)
    names = chart.frame.names
    samples_used = 0

    families = list(combinations(chart.frame.base_indices(), chart.n))
    if family_limit is not None and family_limit < len(families):
        families = RationalSampler(seed).spawn(7).sample(families, family_limit)
    for horizontal in families:
        family = observability_family(chart, horizontal)
        nparams = len(family.params)
        _, kernel = _family_step_data(chart, family, point, omega)
        if not kernel:
            continue

        for _ in range(sample_count):
            base_params = tuple(sampler.rational() for _ in range(nparams))
            factors = family.factors(base_params)
            contraction = omega.of_factors(factors)
            value = decomposable_pairing(factors, a_num)
            directions = list(kernel)
            if len(kernel) > 1:
                mix = [Fraction(0)] * nparams
                for vec in kernel:
                    c = sampler.rational()
                    mix = [m + c * v for m, v in zip(mix, vec)]
                directions.append(tuple(mix))
            for direction in directions:
                scale = sampler.nonzero()
                perturbed = tuple(b + scale * d for b, d in zip(base_params, direction))
                factors_perturbed = family.factors(perturbed)
                samples_used += 1
                if omega.of_factors(factors_perturbed) != contraction:
                    raise DegenerateSystem("contraction is not affine on this family")
                value_perturbed = decomposable_pairing(factors_perturbed, a_num)
                if value_perturbed != value:
                    return OFVerdict(
                        passed=False,
                        samples_used=samples_used,
                        counterexample=OFCounterexample(
                            family_horizontal=tuple(names[i] for i in horizontal),
                            base_params=base_params,
                            kernel_direction=tuple(direction),
                            scale=scale,
                            value=value,
                            value_perturbed=value_perturbed,
                        ),
                        failed_point=point,
                    )
    return OFVerdict(passed=True, samples_used=samples_used)


def recheck_of_counterexample(chart: Chart, a: PolyForm, point: Sequence[Fraction], ce: OFCounterexample) -> bool:
    """Replay a counterexample: equal contraction, different value."""
    point = tuple(Fraction(v) for v in point)
    omega_num = eval_terms(chart.omega.terms, point)
    a_num = eval_terms(a.terms, point)
    horizontal = tuple(chart.frame.index(n) for n in ce.family_horizontal)
    family = observability_family(chart, horizontal)
    x = family.expand(ce.base_params)
    y = family.expand(ce.params_perturbed())
    same_contraction = contraction_form(x, omega_num) == contraction_form(y, omega_num)
    vx = _pair_terms(x, a_num) or Fraction(0)
    vy = _pair_terms(y, a_num) or Fraction(0)
    return same_contraction and vx == ce.value and vy == ce.value_perturbed and vx != vy


# ---------------------------------------------------------------------------
# decomposability identities on first-order charts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PluckerVerdict:
    passed: bool
    skipped_degenerate: bool
    failures: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()


def _det(matrix: list[list[Fraction]]) -> Fraction:
    total = Fraction(0)
    size = len(matrix)
    for perm in permutations(range(size)):
        inversions = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        term = Fraction(1) if inversions % 2 == 0 else Fraction(-1)
        for row, col in enumerate(perm):
            term *= matrix[row][col]
        total += term
    return total


def plucker_check(chart: Chart, x: DecomposableNVector, p: int) -> PluckerVerdict:
    """On a first-order (x, y, e, p) chart, check the decomposability
    identity  vol(X)^{p-1} * w^{i1..ip}_{m1..mp}(X) = det(w^{ib}_{ma}(X))
    for all index selections at the given p, where
    w^{i..}_{m..} = dy^{i1} ^ ... ^ dy^{ip} ^ vol_{m1..mp}."""
    from .exterior import hook, pair, vector_basis, wedge

    n = chart.n
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    frame = chart.frame
    x_expanded = x.expand()
    vol = chart.volume_form()
    vol_value = pair(x_expanded, vol).constant_value()
    if vol_value == 0:
        return PluckerVerdict(passed=True, skipped_degenerate=True)

    y_names = [name for name, _ in frame.coords if name.startswith("y")]
    k = len(y_names)

    def w_value(i_tuple: Sequence[int], mu_tuple: Sequence[int]) -> Fraction:
        form = wedge(
            PolyForm.from_named(frame, len(i_tuple), [([f"y{i}" for i in i_tuple], 1)]),
            hook(vector_basis(frame, *[chart.horizontal[m - 1] for m in mu_tuple]), vol),
        )
        return pair(x_expanded, form).constant_value()

    failures = []
    for i_tuple in combinations(range(1, k + 1), p):
        for mu_tuple in combinations(range(1, n + 1), p):
            lhs = vol_value ** (p - 1) * w_value(i_tuple, mu_tuple)
            matrix = [[w_value((i_b,), (mu_a,)) for i_b in i_tuple] for mu_a in mu_tuple]
            if lhs != _det(matrix):
                failures.append((i_tuple, mu_tuple))
    return PluckerVerdict(passed=not failures, skipped_degenerate=False, failures=tuple(failures))


# ---------------------------------------------------------------------------
# generalized pseudofiber directions
# ---------------------------------------------------------------------------


def _representative_schedule(kernel_size: int, doubled: bool) -> list[tuple[Fraction, ...]]:
    reps: list[tuple[Fraction, ...]] = [tuple(Fraction(0) for _ in range(kernel_size))]

    def unit(i: int, c: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) if j == i else Fraction(0) for j in range(kernel_size))

    for i in range(kernel_size):
        reps.append(unit(i, 1))
        reps.append(unit(i, -1))
    for i, j in combinations(range(kernel_size), 2):
        reps.append(tuple(a + b for a, b in zip(unit(i, 1), unit(j, 1))))
    if doubled:
        for i in range(kernel_size):
            reps.append(unit(i, 2))
        for i, j in combinations(range(kernel_size), 2):
            reps.append(tuple(a - b for a, b in zip(unit(i, 1), unit(j, 1))))
        for i, j, l in combinations(range(kernel_size), 3):
            reps.append(
                tuple(a + b + c for a, b, c in zip(unit(i, 1), unit(j, 1), unit(l, 1)))
            )
    return reps


def pseudofiber_directions(
    chart: Chart,
    solution: HamiltonianSolution,
    doubled: bool = False,
) -> list[tuple[Fraction, ...]]:
    """Common annihilator of the tangent spaces to the decomposable cone
    along representatives of the solution family: vectors xi whose
    contraction with Omega kills every slot-deformation of every
    representative.  Adding representatives can only shrink the result."""
    from .linalg import RowBasis

    frame = chart.frame
    omega_num = solution.omega_num
    columns = [
        _hook_terms({(j,): Fraction(1)}, omega_num) for j in range(frame.dim)
    ]
    basis = RowBasis(frame.dim)
    for coeffs in _representative_schedule(len(solution.kernel), doubled):
        factors = solution.factors(coeffs)
        for slot in range(chart.n):
            others = factors[:slot] + factors[slot + 1 :]
            for c in range(frame.dim):
                delta: Terms = {(c,): Fraction(1)}
                for o in others:
                    delta = _wedge_terms(delta, o)
                if not delta:
                    continue
                row = [(_pair_terms(delta, col) or Fraction(0)) for col in columns]
                if any(row):
                    basis.add(row)
                    if basis.rank == frame.dim:
                        return []
    return [tuple(v) for v in basis.nullspace()]


def annihilator_span(directions: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Canonical basis of the span, for comparing two direction sets."""
    return column_space_rref(list(directions))


def pseudofiber_integrand_check(
    chart: Chart,
    observable: PolyForm,
    zeta: Sequence[Fraction],
    solution: HamiltonianSolution,
) -> bool:
    """dF(zeta, X_2, ..., X_n) = 0 exactly for the base frame, for every
    choice of the omitted slot.  Requires F to admit a Hamilton vector
    field (checked); the vanishing is then forced when zeta is a
    pseudofiber direction."""
    from .exterior import ext_d
    from .observables import NotAOF, aof_solve

    result = aof_solve(chart, observable)
    if isinstance(result, NotAOF):
        raise ValueError("observable form does not admit a Hamilton vector field")
    df_num = eval_terms(ext_d(observable).terms, solution.point)
    zeta_terms: Terms = {(i,): Fraction(v) for i, v in enumerate(zeta) if v}
    factors = solution.factors()
    for slot in range(chart.n):
        others = factors[:slot] + factors[slot + 1 :]
        wedge_val = zeta_terms
        for o in others:
            wedge_val = _wedge_terms(wedge_val, o)
        value = _pair_terms(wedge_val, df_num)
        if value:
            return False
    return True
