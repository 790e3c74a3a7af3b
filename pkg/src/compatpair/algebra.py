"""Free *-algebra over C with unit, presentations, and normal-form rewriting.

Elements are finite C-linear combinations of words over a generator
alphabet.  The involution reverses words, swaps each generator for its
adjoint and conjugates coefficients.  A Presentation adds an ordered,
terminating rewrite system (pattern word -> element) together with a word
order that certifies termination: every rule must strictly decrease the
order, which is graded by per-generator weights with lexicographic
tie-break on generator ranks.

Shipped presentations:

  heisenberg_pair()        p x - x p = -i 1,     normal words x^m p^n
  quantum_plane(gamma)     x y = q y x,          normal words y^m x^n
  quantum_plane_parity(g)  adds chi: x chi = chi x, y chi = -chi y, chi^2 = 1
  su11(q)                  a c = q c a etc.,     a-letters leftmost
  commutative_polynomials  C[x_1..x_n]

The direct-sum construction glues a unital *-algebra X to a module algebra
B: (x+a)(y+b) = xy + (y+ |> a+)+ + x |> b + ab, and the two extra axioms
that make this associative are exposed as a measurable residual.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DivergenceError, StructureError

Word = tuple[str, ...]

_COEFF_EPS = 1e-14


@dataclass(frozen=True)
class Generator:
    """A named generator; ``adjoint_of`` names its adjoint (itself if hermitean)."""

    name: str
    adjoint_of: str | None = None

    @property
    def adjoint_name(self) -> str:
        return self.adjoint_of if self.adjoint_of is not None else self.name


@dataclass(frozen=True)
class Alphabet:
    generators: tuple[Generator, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise StructureError("duplicate generator names")
        adj = {g.name: g.adjoint_name for g in self.generators}
        for name, aname in adj.items():
            if aname not in adj:
                raise StructureError(f"adjoint {aname!r} of {name!r} is not a generator")
            if adj[aname] != name:
                raise StructureError(f"adjoint map is not an involution at {name!r}")

    def adjoint_name(self, name: str) -> str:
        for g in self.generators:
            if g.name == name:
                return g.adjoint_name
        raise StructureError(f"unknown generator {name!r}")

    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)


def _clean(terms: Mapping[Word, complex]) -> dict[Word, complex]:
    return {w: complex(c) for w, c in terms.items() if abs(c) > _COEFF_EPS}


@dataclass(frozen=True)
class AlgebraElement:
    """Finite map from words to complex coefficients over a fixed alphabet."""

    alphabet: Alphabet
    terms: Mapping[Word, complex]

    @staticmethod
    def zero(alphabet: Alphabet) -> "AlgebraElement":
        return AlgebraElement(alphabet, {})

    @staticmethod
    def one(alphabet: Alphabet) -> "AlgebraElement":
        return AlgebraElement(alphabet, {(): 1.0})

    @staticmethod
    def gen(alphabet: Alphabet, name: str) -> "AlgebraElement":
        if name not in alphabet.names():
            raise StructureError(f"unknown generator {name!r}")
        return AlgebraElement(alphabet, {(name,): 1.0})

    @staticmethod
    def from_word(alphabet: Alphabet, word: Sequence[str], coeff: complex = 1.0) -> "AlgebraElement":
        for name in word:
            if name not in alphabet.names():
                raise StructureError(f"unknown generator {name!r}")
        return AlgebraElement(alphabet, _clean({tuple(word): coeff}))

    def _check_same(self, other: "AlgebraElement"):
        if self.alphabet != other.alphabet:
            raise StructureError("elements live over different generator sets")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0.0) + c
        return AlgebraElement(self.alphabet, _clean(out))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "AlgebraElement":
        return AlgebraElement(self.alphabet, _clean({w: c * v for w, v in self.terms.items()}))

    def __rmul__(self, c: complex) -> "AlgebraElement":
        if isinstance(c, AlgebraElement):  # pragma: no cover - guarded by __mul__
            return NotImplemented
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def is_zero(self, tol: float = _COEFF_EPS) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def coeff(self, word: Sequence[str]) -> complex:
        return complex(self.terms.get(tuple(word), 0.0))

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def distance(self, other: "AlgebraElement") -> float:
        """Max coefficient deviation; the metric used by residual checks."""
        return (self - other).max_abs_coeff()

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            word = "1" if not w else "*".join(w)
            parts.append(f"({c:.6g})*{word}")
        return " + ".join(parts)


def multiply(e1: AlgebraElement, e2: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of word concatenation."""
    e1._check_same(e2)
    out: dict[Word, complex] = {}
    for w1, c1 in e1.terms.items():
        for w2, c2 in e2.terms.items():
            w = w1 + w2
            out[w] = out.get(w, 0.0) + c1 * c2
    return AlgebraElement(e1.alphabet, _clean(out))


def adjoint(e: AlgebraElement) -> AlgebraElement:
    """Reverse each word, replace generators by adjoints, conjugate coefficients."""
    out: dict[Word, complex] = {}
    for w, c in e.terms.items():
        aw = tuple(e.alphabet.adjoint_name(name) for name in reversed(w))
        out[aw] = out.get(aw, 0.0) + c.conjugate()
    return AlgebraElement(e.alphabet, _clean(out))


# ---------------------------------------------------------------------------
# Presentations and rewriting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteRule:
    pattern: Word
    replacement: AlgebraElement


@dataclass(frozen=True)
class Presentation:
    """Alphabet + terminating rewrite rules + the word order certifying them.

    ``generator_order`` ranks generators for the lexicographic tie-break;
    ``weights`` grades words (default weight 1 per letter).  Rule validity
    (left side strictly above every right-side word) is checked eagerly.
    """

    alphabet: Alphabet
    rules: tuple[RewriteRule, ...]
    generator_order: tuple[str, ...]
    weights: Mapping[str, int] = field(default_factory=dict)
    scalar_params: Mapping[str, complex] = field(default_factory=dict)
    step_budget: int = 10 ** 6

    def __post_init__(self):
        ranks = {n: i for i, n in enumerate(self.generator_order)}
        if set(ranks) != set(self.alphabet.names()):
            raise StructureError("generator_order must enumerate the alphabet exactly")
        for rule in self.rules:
            for w in rule.replacement.terms:
                if not self._word_less(w, rule.pattern):
                    raise StructureError(
                        f"rule {rule.pattern} -> {w} does not decrease the word order"
                    )

    def _weight(self, w: Word) -> int:
        return sum(self.weights.get(name, 1) for name in w)

    def _key(self, w: Word):
        ranks = {n: i for i, n in enumerate(self.generator_order)}
        return (self._weight(w), len(w), tuple(ranks[n] for n in w))

    def _word_less(self, a: Word, b: Word) -> bool:
        return self._key(a) < self._key(b)

    def normal_form(self, e: AlgebraElement, strategy: str = "leftmost") -> AlgebraElement:
        """Fixed point of exhaustive rewriting; idempotent by construction.

        ``strategy`` picks the redex scan direction ("leftmost" or
        "rightmost"); confluent presentations agree between the two.
        """
        if e.alphabet != self.alphabet:
            raise StructureError("element does not belong to this presentation")
        if strategy not in ("leftmost", "rightmost"):
            raise StructureError(f"unknown strategy {strategy!r}")
        budget = self.step_budget
        done: dict[Word, complex] = {}
        pending = dict(e.terms)
        while pending:
            w, c = pending.popitem()
            hit = self._find_redex(w, strategy)
            if hit is None:
                done[w] = done.get(w, 0.0) + c
                continue
            budget -= 1
            if budget <= 0:
                raise DivergenceError("rewrite step budget exhausted")
            pos, rule = hit
            head, tail = w[:pos], w[pos + len(rule.pattern):]
            for rw, rc in rule.replacement.terms.items():
                nw = head + rw + tail
                pending[nw] = pending.get(nw, 0.0) + c * rc
        return AlgebraElement(self.alphabet, _clean(done))

    def _find_redex(self, w: Word, strategy: str):
        positions = range(len(w))
        if strategy == "rightmost":
            positions = reversed(positions)
        for pos in positions:
            for rule in self.rules:
                k = len(rule.pattern)
                if w[pos:pos + k] == rule.pattern:
                    return pos, rule
        return None


def _mk(alphabet: Alphabet, *terms: tuple[complex, Sequence[str]]) -> AlgebraElement:
    out: dict[Word, complex] = {}
    for c, w in terms:
        out[tuple(w)] = out.get(tuple(w), 0.0) + c
    return AlgebraElement(alphabet, _clean(out))


def heisenberg_pair() -> Presentation:
    """Two hermitean generators with p x - x p = -i 1; normal words x^m p^n."""
    ab = Alphabet((Generator("x"), Generator("p")))
    rule = RewriteRule(("p", "x"), _mk(ab, (1.0, ("x", "p")), (-1j, ())))
    return Presentation(ab, (rule,), generator_order=("x", "p"))


def quantum_plane(gamma: float) -> Presentation:
    """Hermitean x, y with x y = q y x, q = exp(2 pi i gamma); normal words y^m x^n."""
    q = cmath.exp(2j * cmath.pi * gamma)
    ab = Alphabet((Generator("y"), Generator("x")))
    rule = RewriteRule(("x", "y"), _mk(ab, (q, ("y", "x"))))
    return Presentation(ab, (rule,), generator_order=("y", "x"),
                        scalar_params={"gamma": gamma, "q": q})


def quantum_plane_parity(gamma: float) -> Presentation:
    """Hermitean x, y, chi with x y = q y x, x chi = chi x, y chi = -chi y, chi^2 = 1."""
    q = cmath.exp(2j * cmath.pi * gamma)
    ab = Alphabet((Generator("y"), Generator("x"), Generator("chi")))
    rules = (
        RewriteRule(("x", "y"), _mk(ab, (q, ("y", "x")))),
        RewriteRule(("chi", "x"), _mk(ab, (1.0, ("x", "chi")))),
        RewriteRule(("chi", "y"), _mk(ab, (-1.0, ("y", "chi")))),
        RewriteRule(("chi", "chi"), _mk(ab, (1.0, ()))),
    )
    return Presentation(ab, rules, generator_order=("y", "x", "chi"),
                        scalar_params={"gamma": gamma, "q": q})


def su11(q: float) -> Presentation:
    """Generators a, c with a c = q c a, a c+ = q c+ a, c c+ = c+ c,
    a+ a - c+ c = 1, a a+ - q^2 c+ c = 1; q real, not 0 or +-1."""
    if q in (0.0, 1.0, -1.0):
        raise StructureError("q must be real and different from 0, 1, -1")
    ab = Alphabet((
        Generator("a", "a+"), Generator("a+", "a"),
        Generator("c", "c+"), Generator("c+", "c"),
    ))
    rules = (
        RewriteRule(("c", "a"), _mk(ab, (1.0 / q, ("a", "c")))),
        RewriteRule(("c+", "a"), _mk(ab, (1.0 / q, ("a", "c+")))),
        RewriteRule(("c", "a+"), _mk(ab, (q, ("a+", "c")))),
        RewriteRule(("c+", "a+"), _mk(ab, (q, ("a+", "c+")))),
        RewriteRule(("c+", "c"), _mk(ab, (1.0, ("c", "c+")))),
        RewriteRule(("a+", "a"), _mk(ab, (1.0, ()), (1.0, ("c", "c+")))),
        RewriteRule(("a", "a+"), _mk(ab, (1.0, ()), (q * q, ("c", "c+")))),
    )
    weights = {"a": 2, "a+": 2, "c": 1, "c+": 1}
    return Presentation(ab, rules, generator_order=("a", "a+", "c", "c+"),
                        weights=weights, scalar_params={"q": q})


def commutative_polynomials(n: int) -> Presentation:
    """C[x_1..x_n]: hermitean commuting generators, sorted normal words."""
    gens = tuple(Generator(f"x{i + 1}") for i in range(n))
    ab = Alphabet(gens)
    names = ab.names()
    rules = []
    for i in range(n):
        for j in range(i + 1, n):
            rules.append(RewriteRule((names[j], names[i]),
                                     _mk(ab, (1.0, (names[i], names[j])))))
    return Presentation(ab, tuple(rules), generator_order=names)


# ---------------------------------------------------------------------------
# Direct-sum *-algebra A = X (+) B
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BAlgebra:
    """Concrete realization of B: just enough structure for the direct sum."""

    add: Callable
    mul: Callable
    adjoint: Callable
    scale: Callable
    zero: Callable[[], object]
    norm: Callable[..., float]


@dataclass(frozen=True)
class DirectSumElement:
    x_part: AlgebraElement
    b_part: object


def apply_action(act_gen: Callable[[str, object], object], x: AlgebraElement,
                 b, b_alg: BAlgebra):
    """Extend a generator-wise left action linearly along words of x."""
    out = b_alg.zero()
    for w, c in x.terms.items():
        val = b
        for name in reversed(w):
            val = act_gen(name, val)
        out = b_alg.add(out, b_alg.scale(c, val))
    return out


def direct_sum_product(u: DirectSumElement, v: DirectSumElement,
                       act_gen: Callable[[str, object], object],
                       b_alg: BAlgebra) -> DirectSumElement:
    """(x+a)(y+b) = xy + (y+ |> a+)+ + x |> b + ab."""
    x, a = u.x_part, u.b_part
    y, b = v.x_part, v.b_part
    cross1 = b_alg.adjoint(apply_action(act_gen, adjoint(y), b_alg.adjoint(a), b_alg))
    cross2 = apply_action(act_gen, x, b, b_alg)
    return DirectSumElement(multiply(x, y),
                            b_alg.add(b_alg.add(cross1, cross2), b_alg.mul(a, b)))


def direct_sum_axiom_residual(act_gen, b_alg: BAlgebra,
                              xs: Iterable[AlgebraElement],
                              bs: Iterable[object]) -> float:
    """Max deviation of the two direct-sum axioms over the sample sets:

        (x |> a) b = x |> (ab)
        (x |> (y |> a)+)+ = y |> (x |> a+)+
    """
    xs = list(xs)
    bs = list(bs)
    worst = 0.0
    for x in xs:
        for a in bs:
            for b in bs:
                lhs = b_alg.mul(apply_action(act_gen, x, a, b_alg), b)
                rhs = apply_action(act_gen, x, b_alg.mul(a, b), b_alg)
                worst = max(worst, b_alg.norm(b_alg.add(lhs, b_alg.scale(-1.0, rhs))))
    for x in xs:
        for y in xs:
            for a in bs:
                inner = b_alg.adjoint(apply_action(act_gen, y, a, b_alg))
                lhs = b_alg.adjoint(apply_action(act_gen, x, inner, b_alg))
                inner2 = b_alg.adjoint(apply_action(act_gen, x, b_alg.adjoint(a), b_alg))
                rhs = apply_action(act_gen, y, inner2, b_alg)
                worst = max(worst, b_alg.norm(b_alg.add(lhs, b_alg.scale(-1.0, rhs))))
    return worst
