"""Finite abelian groups as explicit products of cyclic groups.

Elements and characters are plain tuples of residues; the dual group has
the same shape as the group itself, and a character chi acts on z through
exact roots of unity (see char_eval).  Set files use a one-line header
`group: n1,n2,...` followed by one comma-separated element per line; the
format is shared across all modules.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm
from typing import Callable, Iterable, Iterator, NamedTuple

from .config import SETTINGS
from .cyclo import CyclotomicNumber, root_of_unity

Element = tuple[int, ...]


class EnumerationCapExceeded(Exception):
    pass


@dataclass(frozen=True)
class GroupSpec:
    orders: tuple[int, ...]

    def __post_init__(self):
        if not self.orders:
            raise ValueError("a group needs at least one cyclic factor")
        if any(n < 1 for n in self.orders):
            raise ValueError(f"cyclic orders must be >= 1: {self.orders}")

    @property
    def size(self) -> int:
        n = 1
        for k in self.orders:
            n *= k
        return n

    @property
    def exponent(self) -> int:
        return lcm(*self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def zero(self) -> Element:
        return (0,) * len(self.orders)

    def reduce(self, x: Iterable[int]) -> Element:
        return tuple(v % n for v, n in zip(x, self.orders, strict=True))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.orders))

    def scale(self, c: int, x: Element) -> Element:
        return tuple((c * a) % n for a, n in zip(x, self.orders))

    def contains(self, x: tuple) -> bool:
        return len(x) == len(self.orders) and all(
            0 <= v < n for v, n in zip(x, self.orders)
        )

    def elements(self) -> Iterator[Element]:
        """Every element exactly once, lexicographic; identity first."""
        if self.size > SETTINGS.enumeration_cap:
            raise EnumerationCapExceeded(
                f"group of size {self.size} exceeds enumeration cap"
            )
        return itertools.product(*(range(n) for n in self.orders))

    # the dual of a finite abelian product group has the identical spec
    dual_elements = elements

    def char_exponent(self, chi: Element, z: Element) -> int:
        """Exponent k with chi(z) = omega_N^k, N the group exponent."""
        n = self.exponent
        total = 0
        for c, v, order in zip(chi, z, self.orders):
            total += (n // order) * c * v
        return total % n

    def char_eval(self, chi: Element, z: Element) -> CyclotomicNumber:
        if len(chi) != len(self.orders) or len(z) != len(self.orders):
            raise ValueError("character/element shape mismatch")
        return root_of_unity(self.char_exponent(chi, z), self.exponent)

    def encode(self, x: Element) -> int:
        """Mixed-radix packing for fast membership sets."""
        code = 0
        for v, n in zip(x, self.orders):
            code = code * n + v
        return code

    def decode(self, code: int) -> Element:
        out = []
        for n in reversed(self.orders):
            out.append(code % n)
            code //= n
        return tuple(reversed(out))

    def random_element(self, rng) -> Element:
        return tuple(rng.randrange(n) for n in self.orders)


def make_group(orders: Iterable[int]) -> GroupSpec:
    return GroupSpec(tuple(orders))


class ProductGroup(NamedTuple):
    spec: GroupSpec
    embed_a: Callable[[Element], Element]
    embed_b: Callable[[Element], Element]
    project_a: Callable[[Element], Element]
    project_b: Callable[[Element], Element]


def product(a: GroupSpec, b: GroupSpec) -> ProductGroup:
    spec = GroupSpec(a.orders + b.orders)
    ka = len(a.orders)
    zero_a, zero_b = a.zero(), b.zero()
    return ProductGroup(
        spec=spec,
        embed_a=lambda x: tuple(x) + zero_b,
        embed_b=lambda y: zero_a + tuple(y),
        project_a=lambda z: z[:ka],
        project_b=lambda z: z[ka:],
    )


@dataclass(frozen=True)
class Subgroup:
    spec: GroupSpec
    generators: tuple[Element, ...]
    elements: frozenset | None  # materialized only below the size cap
    membership: Callable[[Element], bool] | None = None
    zero_form: bool = False  # kernel_of_form was handed the zero form

    @property
    def size(self) -> int:
        if self.elements is None:
            raise ValueError("subgroup not materialized")
        return len(self.elements)

    def __contains__(self, x: Element) -> bool:
        if self.elements is not None:
            return x in self.elements
        if self.membership is not None:
            return self.membership(x)
        raise ValueError("subgroup has neither elements nor membership test")

    def sorted_elements(self) -> list[Element]:
        return sorted(self.elements)


def _close_under_addition(spec: GroupSpec, gens: Iterable[Element]) -> frozenset:
    seen = {spec.zero()}
    frontier = [spec.zero()]
    gens = [spec.reduce(g) for g in gens]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = spec.add(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def subgroup_from_generators(spec: GroupSpec, gens: Iterable[Element]) -> Subgroup:
    gens = tuple(spec.reduce(g) for g in gens)
    elements = _close_under_addition(spec, gens)
    if len(elements) > SETTINGS.subgroup_materialize_cap:
        raise EnumerationCapExceeded("subgroup too large to materialize")
    return Subgroup(spec=spec, generators=gens, elements=elements)


def _reduce_to_generators(spec: GroupSpec, elements: Iterable[Element]) -> tuple:
    gens: list[Element] = []
    span = {spec.zero()}
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = set(_close_under_addition(spec, gens))
    return tuple(gens)


def kernel_of_form(spec: GroupSpec, w: Element) -> Subgroup:
    """Kernel of x -> <w, x> mod m on a homocyclic group Z_m^k.

    The zero form yields the full group, flagged via zero_form rather than
    raised as an error.
    """
    orders = set(spec.orders)
    if len(orders) != 1:
        raise ValueError("kernel_of_form expects a homocyclic group")
    m = orders.pop()
    w = spec.reduce(w)
    zero_form = all(c == 0 for c in w)
    if spec.size > SETTINGS.subgroup_materialize_cap:
        def member(x: Element, _w=w, _m=m) -> bool:
            return sum(c * v for c, v in zip(_w, x)) % _m == 0

        return Subgroup(spec, (), None, membership=member, zero_form=zero_form)
    elems = frozenset(
        x for x in spec.elements() if sum(c * v for c, v in zip(w, x)) % m == 0
    )
    gens = _reduce_to_generators(spec, elems) if not zero_form else tuple(
        spec.reduce(tuple(1 if i == j else 0 for i in range(spec.rank)))
        for j in range(spec.rank)
    )
    return Subgroup(spec, gens, elems, zero_form=zero_form)


def annihilator(sub: Subgroup) -> Subgroup:
    """Characters identically 1 on the subgroup; |S| * |Ann S| = |E|."""
    spec = sub.spec
    n = spec.exponent
    gens = sub.generators if sub.generators else tuple(sub.elements)
    anni = frozenset(
        chi
        for chi in spec.dual_elements()
        if all(spec.char_exponent(chi, g) % n == 0 for g in gens)
    )
    return Subgroup(
        spec=spec,
        generators=_reduce_to_generators(spec, anni),
        elements=anni,
    )


@lru_cache(maxsize=None)
def s5_permutations() -> tuple[tuple[int, ...], ...]:
    """The 120 elements of S5, fixed as the lexicographic enumeration of
    one-line notation; index 0 is the identity."""
    return tuple(itertools.permutations(range(5)))


def permute_vector(perm: tuple[int, ...], v: tuple) -> tuple:
    if len(v) != len(perm):
        raise ValueError("permutation/vector length mismatch")
    return tuple(v[perm[i]] for i in range(len(perm)))


# -- set files ---------------------------------------------------------


def write_set_file(path, spec: GroupSpec, points: Iterable[Element]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("group: " + ",".join(map(str, spec.orders)) + "\n")
        for x in sorted(points):
            fh.write(",".join(map(str, x)) + "\n")


def read_set_file(path) -> tuple[GroupSpec, list[Element]]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("group:"):
            raise ValueError(f"{path}: missing 'group:' header")
        spec = make_group(int(t) for t in header.split(":", 1)[1].split(","))
        points = []
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            x = tuple(int(t) for t in line.split(","))
            if not spec.contains(x):
                raise ValueError(f"{path}: element {x} outside group {spec.orders}")
            points.append(x)
    return spec, points
