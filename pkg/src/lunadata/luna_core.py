"""Luna data: the spherical-root table, axiom validation, and color recovery.

A Luna datum is a quadruple (M, Sigma, Sp, Da): a sublattice M of the
character lattice, a linearly independent set Sigma of primitive elements of
M, a set Sp of simple roots, and an abstract finite set Da of colors carrying
integral functionals rho on M.  The quadruple is subject to the axioms
checked by :func:`validate`; the full set of colors and the valuation cone
are derived data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .integer_geometry import (
    Cone,
    Sublattice,
    dot,
    is_zero,
    matrix_rank,
    primitive_ray_generator,
    vadd,
    vscale,
)
from .root_datum import RootDatum, bourbaki_orderings, subdiagram, support


class DatumStructureError(ValueError):
    """The quadruple is malformed (as opposed to violating an axiom)."""


class InvalidDatumError(ValueError):
    """An operation requiring a valid Luna datum was fed an invalid one."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = ", ".join(f"({v.axiom}) {v.message}" for v in self.violations)
        super().__init__(f"invalid Luna datum: {lines}")


# ---------------------------------------------------------------------------
# The spherical-root table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatternRow:
    """One row of the spherical-root table.

    ``coefficients`` are taken against the Bourbaki ordering of the support,
    ``spp_positions`` are 0-based positions into that ordering, and
    ``half_allowed`` marks rows whose half may also occur when it lies in the
    character lattice.
    """

    name: str
    support_type: str
    rank: int
    coefficients: tuple
    spp_positions: tuple
    half_allowed: bool


def _row(support_type, coeffs, spp, half):
    coeffs = tuple(coeffs)
    name = f"{support_type}{len(coeffs)}({','.join(str(c) for c in coeffs)})"
    if support_type == "A1xA1":
        name = f"A1xA1({','.join(str(c) for c in coeffs)})"
    return PatternRow(name, support_type, len(coeffs), coeffs, tuple(spp), half)


def pattern_rows(support_type: str, rank: int) -> tuple:
    """All table rows whose support has the given type and rank."""
    rows = []
    if support_type == "A" and rank == 1:
        rows.append(_row("A", (1,), (), False))
        rows.append(_row("A", (2,), (), False))
    if support_type == "A1xA1" and rank == 2:
        rows.append(_row("A1xA1", (1, 1), (), True))
    if support_type == "A" and rank >= 2:
        rows.append(_row("A", (1,) * rank, range(1, rank - 1), False))
    if support_type == "A" and rank == 3:
        rows.append(_row("A", (1, 2, 1), (0, 2), True))
    if support_type == "B" and rank >= 2:
        rows.append(_row("B", (1,) * rank, range(1, rank - 1), False))
        rows.append(_row("B", (2,) * rank, range(1, rank), False))
    if support_type == "B" and rank == 3:
        rows.append(_row("B", (1, 2, 3), (0, 1), True))
    if support_type == "C" and rank >= 3:
        rows.append(_row("C", (1,) + (2,) * (rank - 2) + (1,), range(2, rank), False))
    if support_type == "D" and rank >= 4:
        rows.append(_row("D", (2,) * (rank - 2) + (1, 1), range(1, rank), True))
    if support_type == "F" and rank == 4:
        rows.append(_row("F", (1, 2, 3, 2), (0, 1, 2), False))
    if support_type == "G" and rank == 2:
        rows.append(_row("G", (1, 1), (), False))
        rows.append(_row("G", (2, 1), (1,), False))
        rows.append(_row("G", (4, 2), (1,), False))
    return tuple(rows)


@dataclass(frozen=True)
class SphericalRoot:
    gamma: tuple          # character-lattice coordinates
    row: PatternRow
    lam: Q                # 1 or 1/2
    spp: frozenset        # simple-root indices


def _instantiate(group, row, ordering):
    gamma = tuple(0 for _ in range(group.rank))
    for coeff, node in zip(row.coefficients, ordering):
        gamma = vadd(gamma, vscale(coeff, group.simple_roots[node]))
    spp = frozenset(ordering[k] for k in row.spp_positions)
    return gamma, spp


def _half_in_character_lattice(gamma) -> bool:
    return all(x % 2 == 0 for x in gamma)


def _candidate_supports(group):
    """Connected subsets plus orthogonal pairs, with type and orderings."""
    n = group.num_simple_roots
    out = []
    for i in range(n):
        out.append(("A", 1, ((i,),)))
    for i in range(n):
        for j in range(i + 1, n):
            if group.cartan(i, j) == 0 and group.cartan(j, i) == 0:
                out.append(("A1xA1", 2, ((i, j), (j, i))))
    # connected subsets of size >= 2
    for size in range(2, n + 1):
        from itertools import combinations

        for subset in combinations(range(n), size):
            diag = subdiagram(group, subset)
            if len(diag.components) != 1:
                continue
            dtype, orderings = bourbaki_orderings(group, subset)
            out.append((dtype, size, orderings))
    return out


@lru_cache(maxsize=None)
def spherical_roots_of_group(group: RootDatum) -> tuple:
    """Every spherical root of the group, with its table row and Spp set."""
    found = {}
    for dtype, rank, orderings in _candidate_supports(group):
        for row in pattern_rows(dtype, rank):
            for ordering in orderings:
                gamma, spp = _instantiate(group, row, ordering)
                variants = [(gamma, Q(1))]
                if row.half_allowed and _half_in_character_lattice(gamma):
                    variants.append((vscale(Q(1, 2), gamma), Q(1, 2)))
                for g, lam in variants:
                    g = tuple(int(x) for x in g)
                    if g in found:
                        continue
                    found[g] = SphericalRoot(g, row, lam, spp)
    return tuple(found[g] for g in sorted(found))


@dataclass(frozen=True)
class RootMatch:
    row: PatternRow
    lam: Q
    spp: frozenset
    sp: frozenset


def match_spherical_root(group: RootDatum, gamma: Sequence) -> Optional[RootMatch]:
    """The unique table row matching gamma, or None."""
    gamma = tuple(gamma)
    if is_zero(gamma):
        raise ValueError("the zero vector is not a spherical root")
    if any(Q(x).denominator != 1 for x in gamma):
        return None
    try:
        supp = support(group, gamma)
    except ValueError:
        return None
    diag = subdiagram(group, supp)
    if len(diag.components) == 1:
        dtype, orderings = bourbaki_orderings(group, supp)
        candidates = [(dtype, orderings)]
    elif (len(diag.components) == 2
          and all(len(c.nodes) == 1 for c in diag.components)):
        i, j = sorted(min(c.nodes) for c in diag.components)
        candidates = [("A1xA1", ((i, j), (j, i)))]
    else:
        return None
    doubled = tuple(2 * x for x in gamma)
    for dtype, orderings in candidates:
        for row in pattern_rows(dtype, len(supp)):
            for ordering in orderings:
                candidate, spp = _instantiate(group, row, ordering)
                if candidate == gamma:
                    lam = Q(1)
                elif row.half_allowed and candidate == doubled:
                    lam = Q(1, 2)
                else:
                    continue
                sp = frozenset(
                    i for i in range(group.num_simple_roots)
                    if dot(group.simple_coroots[i], gamma) == 0)
                return RootMatch(row, lam, spp, sp)
    return None


def compatible(group: RootDatum, sp: Iterable[int], gamma: Sequence) -> bool:
    """Whether Spp(gamma) <= sp <= Sp(gamma) holds."""
    m = match_spherical_root(group, gamma)
    if m is None:
        raise ValueError("gamma is not a spherical root of the group")
    sp = frozenset(sp)
    return m.spp <= sp <= m.sp


# ---------------------------------------------------------------------------
# The Luna datum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColorRecord:
    """An abstract type-a color: a label and a functional on M."""

    label: str
    rho: tuple  # integer coordinates against the canonical basis of M


@dataclass(frozen=True)
class LunaDatum:
    group: RootDatum
    M: Sublattice
    Sigma: tuple
    Sp: frozenset
    Da: tuple

    @property
    def rank(self) -> int:
        return self.M.rank


def luna_datum(group: RootDatum, m_rows: Iterable[Sequence[int]],
               sigma: Iterable[Sequence[int]], sp: Iterable[int],
               da: Iterable = (), rho_basis: Optional[Sequence] = None) -> LunaDatum:
    """Build a LunaDatum, canonicalizing M and re-expressing each rho.

    ``da`` holds (label, rho) pairs with rho taken against ``rho_basis`` (by
    default the rows of ``m_rows`` as given).  Structural defects raise
    DatumStructureError; axiom violations are left to :func:`validate`.
    """
    m_rows = [tuple(r) for r in m_rows]
    try:
        lattice = Sublattice.from_rows(group.rank, m_rows)
    except (ValueError, TypeError) as exc:
        raise DatumStructureError(f"bad lattice basis: {exc}") from None
    sigma = tuple(tuple(x) for x in sigma)
    for g in sigma:
        if len(g) != group.rank or any(Q(x).denominator != 1 for x in g):
            raise DatumStructureError(f"sigma entry {g} is not a character")
        if not lattice.contains(g):
            raise DatumStructureError(f"sigma entry {g} does not lie in M")
    sp = frozenset(sp)
    for i in sp:
        if not 0 <= i < group.num_simple_roots:
            raise DatumStructureError(f"no simple root with index {i}")
    if rho_basis is None:
        rho_basis = m_rows
    rho_basis = [tuple(r) for r in rho_basis]
    colors = []
    labels = set()
    for label, rho in da:
        rho = tuple(rho)
        if label in labels:
            raise DatumStructureError(f"duplicate color label {label!r}")
        labels.add(label)
        if len(rho) != len(rho_basis):
            raise DatumStructureError(f"rho for {label!r} has wrong length")
        converted = []
        for b in lattice.basis:
            c = solve_coeffs(rho_basis, b)
            if c is None:
                raise DatumStructureError(
                    f"canonical basis vector {b} is not spanned by the stated rows")
            val = dot(rho, c)
            if Q(val).denominator != 1:
                raise DatumStructureError(
                    f"rho for {label!r} is not integral on M")
            converted.append(int(val))
        colors.append(ColorRecord(str(label), tuple(converted)))
    return LunaDatum(group, lattice, sigma, sp, tuple(colors))


def solve_coeffs(rows, target):
    from .integer_geometry import solve_left

    return solve_left(rows, target)


def sigma_coefficients(datum: LunaDatum) -> tuple:
    """Coordinates of each spherical root against the canonical basis of M."""
    out = []
    for g in datum.Sigma:
        c = datum.M.coefficients(g)
        out.append(tuple(int(x) for x in c))
    return tuple(out)


def coroot_on_m(datum: LunaDatum, i: int) -> tuple:
    """The restriction of coroot i to M, as a covector against M's basis."""
    return tuple(dot(datum.group.simple_coroots[i], b) for b in datum.M.basis)


def pair_with_rho(datum: LunaDatum, rho: Sequence, chi: Sequence):
    """<rho, chi> for chi in character-lattice coordinates (chi must lie in M_Q)."""
    c = datum.M.coefficients(chi)
    if c is None:
        raise ValueError("character does not lie in the span of M")
    return dot(rho, c)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    message: str


def _simple_root_index(datum: LunaDatum, v) -> Optional[int]:
    for i, a in enumerate(datum.group.simple_roots):
        if tuple(a) == tuple(v):
            return i
    return None


@lru_cache(maxsize=None)
def validate(datum: LunaDatum) -> tuple:
    """All axiom violations of the quadruple; an empty tuple means valid."""
    group = datum.group
    out = []

    if len(set(datum.Sigma)) != len(datum.Sigma):
        out.append(Violation("independence", "Sigma has repeated elements"))
    if matrix_rank(datum.Sigma) != len(datum.Sigma):
        out.append(Violation("independence", "Sigma is linearly dependent"))
    for g in datum.Sigma:
        if is_zero(g):
            out.append(Violation("primitivity", "Sigma contains zero"))
            continue
        if primitive_ray_generator(datum.M, g) != g:
            out.append(Violation("primitivity", f"{g} is not primitive in M"))

    matches = {}
    for g in datum.Sigma:
        if is_zero(g):
            continue
        m = match_spherical_root(group, g)
        if m is None:
            out.append(Violation(
                "sigma_g", f"{g} is not a spherical root of the group"))
        else:
            matches[g] = m

    sigma_a = [(g, _simple_root_index(datum, g)) for g in datum.Sigma]
    sigma_a = [(g, i) for g, i in sigma_a if i is not None]

    # (A1) pairings bounded by one, equality only in type-a pairs
    pair_of = {}
    for g in datum.Sigma:
        for color in datum.Da:
            val = pair_with_rho(datum, color.rho, g)
            if val > 1:
                out.append(Violation(
                    "A1", f"<rho({color.label}), {g}> = {val} exceeds 1"))
            elif val == 1 and _simple_root_index(datum, g) is None:
                out.append(Violation(
                    "A1", f"<rho({color.label}), {g}> = 1 but {g} is not simple"))
    for g, i in sigma_a:
        members = tuple(c for c in datum.Da
                        if pair_with_rho(datum, c.rho, g) == 1)
        if len(members) != 2:
            out.append(Violation(
                "A1", f"{len(members)} colors pair to 1 with simple root a{i + 1}"
                      " (need exactly 2)"))
        else:
            pair_of[i] = members

    # (A2) the two colors of a type-a root sum to the restricted coroot
    for i, members in pair_of.items():
        total = tuple(x + y for x, y in zip(members[0].rho, members[1].rho))
        if total != coroot_on_m(datum, i):
            out.append(Violation(
                "A2", f"rho pair for a{i + 1} does not sum to the coroot"))

    # (A3) no color outside the union of the pairs
    paired = {c.label for members in pair_of.values() for c in members}
    for c in datum.Da:
        if c.label not in paired:
            out.append(Violation(
                "A3", f"color {c.label} is attached to no simple spherical root"))

    # (Sigma1) roots alpha with 2*alpha in Sigma
    sigma_set = set(datum.Sigma)
    for i, alpha in enumerate(group.simple_roots):
        dbl = tuple(2 * x for x in alpha)
        if dbl not in sigma_set:
            continue
        if any(x % 2 != 0 for x in coroot_on_m(datum, i)):
            out.append(Violation(
                "Sigma1", f"<a{i + 1}^, M> is not contained in 2Z"))
        for g in datum.Sigma:
            if g != dbl and dot(group.simple_coroots[i], g) > 0:
                out.append(Violation(
                    "Sigma1", f"<a{i + 1}^, {g}> is positive"))

    # (Sigma2) orthogonal alpha, beta with alpha + beta in Sigma or 2 Sigma
    n = group.num_simple_roots
    for i in range(n):
        for j in range(i + 1, n):
            if group.cartan(i, j) != 0 or group.cartan(j, i) != 0:
                continue
            s = vadd(group.simple_roots[i], group.simple_roots[j])
            in_sigma = tuple(s) in sigma_set
            in_2sigma = any(tuple(2 * x for x in g) == tuple(s)
                            for g in datum.Sigma)
            if (in_sigma or in_2sigma) and \
                    coroot_on_m(datum, i) != coroot_on_m(datum, j):
                out.append(Violation(
                    "Sigma2",
                    f"a{i + 1} and a{j + 1} restrict differently on M"))

    # (S) Sp pairs to zero with M and every (Sp, gamma) is compatible
    for i in sorted(datum.Sp):
        if any(x != 0 for x in coroot_on_m(datum, i)):
            out.append(Violation("S", f"<a{i + 1}^, M> is nonzero"))
    for g, m in matches.items():
        if not m.spp <= datum.Sp <= m.sp:
            out.append(Violation("S", f"(Sp, {g}) is not compatible"))

    return tuple(out)


def require_valid(datum: LunaDatum) -> None:
    violations = validate(datum)
    if violations:
        raise InvalidDatumError(violations)


# ---------------------------------------------------------------------------
# Full colors, valuation cone, equality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Color:
    label: str
    ctype: str      # "a", "2a" or "b"
    rho: tuple      # integer covector against the canonical basis of M
    moved: frozenset  # simple-root indices moved by the color

_CTYPE_ORDER = {"a": 0, "2a": 1, "b": 2}


def _root_name(i: int) -> str:
    return f"a{i + 1}"


@lru_cache(maxsize=None)
def full_colors(datum: LunaDatum) -> tuple:
    """Recover the full set of colors from the quadruple.

    Type-a colors are the Da entries with their moved roots read off the
    pairing-one condition; a root with doubled spherical root carries one
    type-2a color with rho half its coroot; every remaining root outside Sp
    carries a type-b color with rho the restricted coroot, where two
    orthogonal roots share a single color exactly when their sum lies in
    Sigma or 2 Sigma.
    """
    require_valid(datum)
    group = datum.group
    sigma_set = set(datum.Sigma)
    colors = []

    simple = {i: tuple(a) for i, a in enumerate(group.simple_roots)}
    in_sigma = {i for i, a in simple.items() if a in sigma_set}
    doubled = {i for i, a in simple.items()
               if tuple(2 * x for x in a) in sigma_set}

    for record in datum.Da:
        moved = frozenset(i for i in in_sigma
                          if pair_with_rho(datum, record.rho, simple[i]) == 1)
        colors.append(Color(record.label, "a", record.rho, moved))

    for i in sorted(doubled):
        half = tuple(Q(x, 2) for x in coroot_on_m(datum, i))
        assert all(Q(x).denominator == 1 for x in half)
        colors.append(Color(f"D_{_root_name(i)}", "2a",
                            tuple(int(x) for x in half), frozenset({i})))

    plain = [i for i in simple
             if i not in datum.Sp and i not in in_sigma and i not in doubled]
    merged: list = []
    for i in plain:
        group_ids = None
        for cls in merged:
            j = next(iter(cls))
            s = vadd(simple[i], simple[j])
            orthogonal = group.cartan(i, j) == 0 and group.cartan(j, i) == 0
            joined = tuple(s) in sigma_set or any(
                tuple(2 * x for x in g) == tuple(s) for g in datum.Sigma)
            if orthogonal and joined:
                group_ids = cls
                break
        if group_ids is None:
            merged.append({i})
        else:
            group_ids.add(i)
    for cls in merged:
        i = min(cls)
        rho = coroot_on_m(datum, i)
        assert all(coroot_on_m(datum, j) == rho for j in cls)
        label = "D_" + "".join(_root_name(j) for j in sorted(cls))
        colors.append(Color(label, "b", rho, frozenset(cls)))

    colors.sort(key=lambda c: (_CTYPE_ORDER[c.ctype], sorted(c.moved), c.rho))
    return tuple(colors)


def colors_moved_by(datum: LunaDatum, i: int) -> tuple:
    """The set D(alpha) of full colors moved by the simple root with index i."""
    return tuple(c for c in full_colors(datum) if i in c.moved)


@lru_cache(maxsize=None)
def valuation_cone(datum: LunaDatum) -> Cone:
    """{v in N_Q : <v, sigma> <= 0 for all sigma}, in dual coordinates."""
    require_valid(datum)
    coeffs = sigma_coefficients(datum)
    return Cone.from_inequalities(
        datum.rank, [vscale(-1, c) for c in coeffs])


def sigma_cone(datum: LunaDatum) -> Cone:
    """cone(Sigma) in coordinates against the canonical basis of M."""
    return Cone.from_generators(datum.rank, sigma_coefficients(datum))


def datum_equal(first: LunaDatum, second: LunaDatum) -> bool:
    """Equality of Luna data: Da is compared as a multiset of rho values."""
    if first.group != second.group:
        raise ValueError("data live over different groups")
    return (first.M == second.M
            and set(first.Sigma) == set(second.Sigma)
            and first.Sp == second.Sp
            and sorted(c.rho for c in first.Da)
            == sorted(c.rho for c in second.Da))
