"""Exact rational linear programming.

The models solved in this package have few variables (one per player plus an
excess variable) and very many constraints (one per coalition).  A dense
tableau over all constraints is hopeless at that shape, so :func:`solve`
works on the dual of the model, which is in standard form with one row per
variable.  The revised simplex method keeps an explicit rational basis
inverse of that small size and prices the (many) columns with Bland's rule,
which guarantees termination on degenerate problems.

The simplex multipliers of an optimal dual basis are a basic feasible
solution of the model itself: a vertex defined by ``len(variables)``
linearly independent tight constraints.

Free variables need no special treatment on this route (a free primal
variable is an equality row of the dual).  Nonnegative variables become
explicit ``-z <= 0`` rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Constraint",
    "LpModel",
    "LpOutcome",
    "MalformedModelError",
    "OPTIMAL",
    "INFEASIBLE",
    "UNBOUNDED",
    "solve",
    "max_over_optimal_face",
    "affine_rank",
    "solve_equalities",
    "RowSpace",
]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", "==", ">=")
_ZERO = Fraction(0)
_ONE = Fraction(1)


class MalformedModelError(ValueError):
    """The model references undeclared variables or uses a bad relation."""


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[str, Fraction]
    relation: str
    rhs: Fraction

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((Fraction(c) * point[v] for v, c in self.coeffs.items()), _ZERO)

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        lhs = self.evaluate(point)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LpModel:
    """A rational LP.  Variables are free unless listed in ``nonnegative``."""

    variables: tuple[str, ...]
    objective: Mapping[str, Fraction]
    constraints: tuple[Constraint, ...]
    sense: str = "max"
    nonnegative: frozenset[str] = frozenset()

    def with_constraint(self, constraint: Constraint) -> "LpModel":
        return LpModel(self.variables, self.objective,
                       self.constraints + (constraint,), self.sense,
                       self.nonnegative)

    def with_objective(self, objective: Mapping[str, Fraction],
                       sense: str = "max") -> "LpModel":
        return LpModel(self.variables, objective, self.constraints, sense,
                       self.nonnegative)

    def objective_value(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((Fraction(c) * point[v] for v, c in self.objective.items()), _ZERO)


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Fraction | None = None
    point: Mapping[str, Fraction] | None = None
    # Multiplier of each constraint (index-aligned with model.constraints) in
    # an optimal dual solution.  Inequalities are oriented as "<=" of the
    # maximisation form, so those multipliers are >= 0; a positive multiplier
    # means the constraint is tight at every optimal point.
    duals: tuple[Fraction, ...] | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _check_model(model: LpModel) -> None:
    declared = set(model.variables)
    if len(declared) != len(model.variables):
        raise MalformedModelError("duplicate variable names")
    if model.sense not in ("max", "min"):
        raise MalformedModelError(f"unknown sense {model.sense!r}")
    unknown = set(model.objective) - declared
    if unknown:
        raise MalformedModelError(f"objective uses undeclared variables {sorted(unknown)}")
    if not model.nonnegative <= declared:
        raise MalformedModelError("nonnegative set names undeclared variables")
    for k, con in enumerate(model.constraints):
        if con.relation not in _RELATIONS:
            raise MalformedModelError(f"constraint {k}: unknown relation {con.relation!r}")
        unknown = set(con.coeffs) - declared
        if unknown:
            raise MalformedModelError(
                f"constraint {k} uses undeclared variables {sorted(unknown)}")


class _Rows:
    """Model rows normalised to ``a.z <= g`` / ``a.z == g`` in max form."""

    def __init__(self, model: LpModel):
        index = {v: i for i, v in enumerate(model.variables)}
        self.n = len(model.variables)
        sign = 1 if model.sense == "max" else -1
        self.c = [_ZERO] * self.n
        for v, coef in model.objective.items():
            self.c[index[v]] += sign * Fraction(coef)

        # each entry: (sparse coeffs tuple, is_equality, rhs, origin index)
        self.rows: list[tuple[tuple[tuple[int, Fraction], ...], bool, Fraction, int]] = []
        self.trivially_infeasible = False
        seen: dict[tuple, int] = {}
        extra = [(((index[v], Fraction(-1)),), False, _ZERO, -1)
                 for v in model.variables if v in model.nonnegative]
        for origin, con in enumerate(model.constraints):
            flip = -1 if con.relation == ">=" else 1
            acc: dict[int, Fraction] = {}
            for v, coef in con.coeffs.items():
                coef = Fraction(coef)
                if coef:
                    i = index[v]
                    acc[i] = acc.get(i, _ZERO) + flip * coef
            coeffs = tuple(sorted((i, a) for i, a in acc.items() if a))
            rhs = flip * Fraction(con.rhs)
            eq = con.relation == "=="
            if not coeffs:
                if (eq and rhs != 0) or (not eq and rhs < 0):
                    self.trivially_infeasible = True
                continue
            key = (coeffs, eq, rhs)
            if key in seen:
                continue
            seen[key] = origin
            self.rows.append((coeffs, eq, rhs, origin))
        self.rows.extend(extra)


class _RevisedSimplex:
    """min cost.y  s.t.  H y = rhs, y >= 0, with H given column-wise."""

    def __init__(self, columns: Sequence[Sequence[tuple[int, Fraction]]],
                 costs: Sequence[Fraction], rhs: Sequence[Fraction]):
        self.m = len(rhs)
        self.row_sign = [(-1 if r < 0 else 1) for r in rhs]
        self.columns = [tuple((i, a * self.row_sign[i]) for i, a in col) for col in columns]
        self.costs = list(costs)
        self.rhs = [abs(r) for r in rhs]
        self.n_real = len(self.columns)

    def _column(self, j: int) -> Sequence[tuple[int, Fraction]]:
        if j < self.n_real:
            return self.columns[j]
        return ((j - self.n_real, _ONE),)

    def run(self) -> tuple[str, list[Fraction] | None, list[Fraction] | None]:
        """Returns (status, y, pi) where pi are the multipliers in original row signs."""
        m = self.m
        self.basis = [self.n_real + i for i in range(m)]
        self.binv = [[_ONE if r == c else _ZERO for c in range(m)] for r in range(m)]
        self.xb = list(self.rhs)
        self.in_basis = set(self.basis)

        phase1_cost = [_ZERO] * self.n_real + [_ONE] * m
        status = self._iterate(phase1_cost, allow_artificial=True)
        assert status == OPTIMAL  # phase 1 is always bounded
        infeas = sum((self.xb[p] for p in range(m) if self.basis[p] >= self.n_real), _ZERO)
        if infeas > 0:
            return INFEASIBLE, None, None
        self._drive_out_artificials()

        phase2_cost = list(self.costs) + [_ZERO] * m
        status = self._iterate(phase2_cost, allow_artificial=False)
        if status != OPTIMAL:
            return status, None, None
        y = [_ZERO] * self.n_real
        for p, j in enumerate(self.basis):
            if j < self.n_real:
                y[j] = self.xb[p]
        pi = self._multipliers(phase2_cost)
        pi = [pi[i] * self.row_sign[i] for i in range(m)]
        return OPTIMAL, y, pi

    def _multipliers(self, cost: Sequence[Fraction]) -> list[Fraction]:
        m = self.m
        pi = [_ZERO] * m
        for p, j in enumerate(self.basis):
            cb = cost[j]
            if cb:
                row = self.binv[p]
                for r in range(m):
                    if row[r]:
                        pi[r] += cb * row[r]
        return pi

    def _iterate(self, cost: Sequence[Fraction], allow_artificial: bool) -> str:
        m = self.m
        limit = self.n_real + (m if allow_artificial else 0)
        while True:
            pi = self._multipliers(cost)
            entering = -1
            # Bland: lowest-index improving column
            for j in range(limit):
                if j in self.in_basis:
                    continue
                d = cost[j]
                for i, a in self._column(j):
                    if pi[i]:
                        d -= pi[i] * a
                if d < 0:
                    entering = j
                    break
            if entering < 0:
                return OPTIMAL
            alpha = self._ftran(entering)
            leave = -1
            best = None
            for p in range(m):
                if alpha[p] > 0:
                    ratio = self.xb[p] / alpha[p]
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[p] < self.basis[leave])):
                        best, leave = ratio, p
            if leave < 0:
                return UNBOUNDED
            self._pivot(leave, entering, alpha)

    def _ftran(self, j: int) -> list[Fraction]:
        col = self._column(j)
        return [sum((row[i] * a for i, a in col if row[i]), _ZERO) for row in self.binv]

    def _pivot(self, p: int, j: int, alpha: list[Fraction]) -> None:
        m = self.m
        piv = alpha[p]
        prow = [v / piv for v in self.binv[p]]
        self.binv[p] = prow
        xp = self.xb[p] / piv
        self.xb[p] = xp
        for i in range(m):
            if i != p and alpha[i]:
                f = alpha[i]
                row = self.binv[i]
                self.binv[i] = [row[r] - f * prow[r] if prow[r] else row[r] for r in range(m)]
                self.xb[i] -= f * xp
        self.in_basis.discard(self.basis[p])
        self.basis[p] = j
        self.in_basis.add(j)

    def _drive_out_artificials(self) -> None:
        for p in range(self.m):
            if self.basis[p] < self.n_real:
                continue
            row = self.binv[p]
            for j in range(self.n_real):
                if j in self.in_basis:
                    continue
                if sum((row[i] * a for i, a in self.columns[j] if row[i]), _ZERO):
                    self._pivot(p, j, self._ftran(j))
                    break
            # otherwise the row is redundant; the artificial stays at zero


def _solve_rows(rows: _Rows) -> tuple[str, list[Fraction] | None, list[Fraction] | None]:
    columns: list[tuple[tuple[int, Fraction], ...]] = []
    costs: list[Fraction] = []
    owners: list[tuple[int, int]] = []  # (row index, +1/-1)
    for r, (coeffs, eq, rhs, _origin) in enumerate(rows.rows):
        columns.append(coeffs)
        costs.append(rhs)
        owners.append((r, 1))
        if eq:
            columns.append(tuple((i, -a) for i, a in coeffs))
            costs.append(-rhs)
            owners.append((r, -1))
    status, y, pi = _RevisedSimplex(columns, costs, rows.c).run()
    if status != OPTIMAL:
        return status, None, None
    row_duals = [_ZERO] * len(rows.rows)
    for k, (r, s) in enumerate(owners):
        if y[k]:
            row_duals[r] += s * y[k]
    return OPTIMAL, pi, row_duals


def solve(model: LpModel) -> LpOutcome:
    """Solve ``model`` exactly.

    Infeasible and unbounded models are reported through ``status``; only a
    malformed model raises.  The returned point is a vertex of the feasible
    region and the result is deterministic for a fixed model.
    """
    _check_model(model)
    rows = _Rows(model)
    if rows.trivially_infeasible:
        return LpOutcome(INFEASIBLE)
    status, z, row_duals = _solve_rows(rows)
    if status == UNBOUNDED:
        # dual unbounded => model infeasible
        return LpOutcome(INFEASIBLE)
    if status == INFEASIBLE:
        # dual infeasible => model infeasible or unbounded; decide feasibility
        rows.c = [_ZERO] * rows.n
        feas_status, _, _ = _solve_rows(rows)
        return LpOutcome(UNBOUNDED if feas_status == OPTIMAL else INFEASIBLE)

    point = {v: z[i] for i, v in enumerate(model.variables)}
    duals = [_ZERO] * len(model.constraints)
    for (coeffs, eq, rhs, origin), d in zip(rows.rows, row_duals):
        if origin >= 0:
            duals[origin] = d
    return LpOutcome(OPTIMAL, model.objective_value(point), point, tuple(duals))


def max_over_optimal_face(model: LpModel, probe: Mapping[str, Fraction],
                          optimum: Fraction | None = None) -> Fraction:
    """Maximum of ``probe`` over the set of optimal solutions of ``model``.

    ``optimum`` may be passed when the caller already solved ``model``.
    """
    if optimum is None:
        out = solve(model)
        if not out.optimal:
            raise ValueError(f"model has no optimal solution ({out.status})")
        optimum = out.value
    face = model.with_constraint(Constraint(dict(model.objective), "==", optimum))
    out = solve(face.with_objective(probe, "max"))
    if out.status != OPTIMAL:
        raise RuntimeError(f"probe over the optimal face is {out.status}")
    return out.value


def _row_echelon(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [v / pv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def _dense(equalities: Iterable[Mapping[str, Fraction]]) -> tuple[list[str], list[list[Fraction]]]:
    equalities = list(equalities)
    names: list[str] = []
    for eq in equalities:
        for v in eq:
            if v not in names:
                names.append(v)
    index = {v: i for i, v in enumerate(names)}
    dense = []
    for eq in equalities:
        row = [_ZERO] * len(names)
        for v, a in eq.items():
            row[index[v]] += Fraction(a)
        dense.append(row)
    return names, dense


def affine_rank(equalities: Iterable[Mapping[str, Fraction]]) -> int:
    """Rank over the rationals of the coefficient matrix of ``equalities``."""
    names, dense = _dense(equalities)
    _, pivots = _row_echelon(dense, len(names))
    return len(pivots)


def solve_equalities(variables: Sequence[str],
                     equalities: Sequence[tuple[Mapping[str, Fraction], Fraction]]
                     ) -> dict[str, Fraction]:
    """Unique solution of a linear equality system over ``variables``.

    Raises ValueError when the system is inconsistent or underdetermined.
    """
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)
    dense = []
    for coeffs, rhs in equalities:
        row = [_ZERO] * (n + 1)
        for v, a in coeffs.items():
            row[index[v]] += Fraction(a)
        row[n] = Fraction(rhs)
        dense.append(row)
    rref, pivots = _row_echelon(dense, n + 1)
    if n in pivots:
        raise ValueError("inconsistent equality system")
    if len(pivots) < n:
        raise ValueError(f"underdetermined: {n - len(pivots)} free dimensions")
    return {variables[col]: rref[r][n] for r, col in enumerate(pivots)}


class RowSpace:
    """Incrementally maintained span of dense rational row vectors."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: list[tuple[int, list[Fraction]]] = []  # (pivot column, normalised row)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: Sequence[Fraction]) -> list[Fraction]:
        vec = [Fraction(v) for v in vec]
        for col, row in self._rows:
            f = vec[col]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec: Sequence[Fraction]) -> bool:
        """Add ``vec``; True when it raised the rank."""
        vec = self._reduce(vec)
        col = next((i for i, a in enumerate(vec) if a), None)
        if col is None:
            return False
        pv = vec[col]
        vec = [a / pv for a in vec]
        self._rows = [(c, [a - r[col] * b for a, b in zip(r, vec)] if r[col] else r)
                      for c, r in self._rows]
        self._rows.append((col, vec))
        return True
