"""Edge-decorated non-planar rooted trees and the extraction-contraction coproduct.

Trees are written ``(d1:t1,d2:t2,...)``: the root's child edges, each with a
positive integer decoration and the subtree it leads to.  ``"()"`` is the
single-node tree, identified with the empty forest.  Siblings are sorted by
their ``"d:encoding"`` text, which makes the encoding canonical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import LinComb, Multiset, as_lincomb, rational_str, to_rational
from .errors import EnumerationGuardError, MissingValueError, ParseError, PreconditionError, ValidationError, TruncationError

#: Largest edge count accepted by :func:`extraction_contraction` (2^E subsets).
MAX_EDGES = 20


class DecTree:
    """Canonical non-planar rooted tree with decorated edges."""

    __slots__ = ("children", "encoding", "edges", "_hash")

    def __init__(self, children: Iterable[tuple[int, DecTree]] = ()):
        kids = []
        for d, sub in children:
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise ValidationError(f"edge decoration must be a positive int, got {d!r}")
            if not isinstance(sub, DecTree):
                raise ValidationError(f"child must be a DecTree, got {sub!r}")
            kids.append((d, sub))
        kids.sort(key=lambda ds: f"{ds[0]}:{ds[1].encoding}")
        self.children = tuple(kids)
        self.encoding = "(" + ",".join(f"{d}:{t.encoding}" for d, t in kids) + ")"
        self.edges = sum(1 + t.edges for _, t in kids)
        self._hash = hash(self.encoding)

    @property
    def degree(self) -> int:
        return self.edges

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> DecTree:
        return parse_tree(text, d)

    def __mul__(self, other: DecTree) -> DecTree:
        if not isinstance(other, DecTree):
            return NotImplemented
        return tree_product(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, DecTree) and self.encoding == other.encoding

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return self.edges > 0

    def __str__(self) -> str:
        return self.encoding

    def __repr__(self) -> str:
        return f"DecTree({self.encoding!r})"

    def is_corolla(self) -> bool:
        return all(t.edges == 0 for _, t in self.children)

    def is_planted(self) -> bool:
        return len(self.children) == 1

    def decorations(self) -> list[int]:
        out = []
        for dec, sub in self.children:
            out.append(dec)
            out.extend(sub.decorations())
        return out

    def as_forest(self) -> TreeForest:
        return TreeForest((self,))


NODE = DecTree()


def planted(decoration: int, sub: DecTree = NODE) -> DecTree:
    """The planted tree whose trunk carries ``decoration`` and leads to ``sub``."""
    return DecTree(((decoration, sub),))


class TreeForest:
    """Commutative word of trees with at least one edge each."""

    __slots__ = ("trees", "edges", "_hash")

    def __init__(self, trees: Iterable[DecTree] = ()):
        kept = [t for t in trees if t.edges]
        kept.sort(key=lambda t: (t.edges, t.encoding))
        self.trees = tuple(kept)
        self.edges = sum(t.edges for t in self.trees)
        self._hash = hash(self.trees)

    @property
    def degree(self) -> int:
        return self.edges

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> TreeForest:
        if text.strip() == "1":
            return EMPTY_FOREST
        return cls(parse_tree(chunk, d) for chunk in text.split("*"))

    def __mul__(self, other: TreeForest) -> TreeForest:
        if not isinstance(other, TreeForest):
            return NotImplemented
        return TreeForest(self.trees + other.trees)

    def __eq__(self, other) -> bool:
        return isinstance(other, TreeForest) and self.trees == other.trees

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.trees)

    def __len__(self) -> int:
        return len(self.trees)

    def __str__(self) -> str:
        return " * ".join(t.encoding for t in self.trees) if self.trees else "1"

    def __repr__(self) -> str:
        return f"TreeForest({str(self)!r})"


EMPTY_FOREST = TreeForest()


def parse_tree(text: str, d: int | None = None) -> DecTree:
    """Parse ``t := "(" [e ("," e)*] ")"``, ``e := decoration ":" t``.

    Whitespace between tokens is ignored.  When ``d`` is given, decorations
    above it are rejected.
    """
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= n or text[pos] != ch:
            found = repr(text[pos]) if pos < n else "end of input"
            raise ParseError(f"expected {ch!r}, found {found}", pos)
        pos += 1

    def tree():
        nonlocal pos
        expect("(")
        kids = []
        skip()
        if pos < n and text[pos] == ")":
            pos += 1
            return DecTree()
        while True:
            skip()
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if start == pos:
                raise ParseError("expected edge decoration", pos)
            dec = int(text[start:pos])
            if dec < 1 or (d is not None and dec > d):
                bound = f"1..{d}" if d is not None else "positive"
                raise ParseError(f"decoration {dec} outside {bound}", start)
            expect(":")
            kids.append((dec, tree()))
            skip()
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            expect(")")
            return DecTree(kids)

    result = tree()
    skip()
    if pos != n:
        raise ParseError(f"trailing text {text[pos:]!r}", pos)
    return result


def render_tree(t: DecTree) -> str:
    return t.encoding


def tree_product(s: DecTree, t: DecTree) -> DecTree:
    """Identify the roots: the child edges of both roots hang off one root."""
    if not s.edges:
        return t
    if not t.edges:
        return s
    return DecTree(s.children + t.children)


def _flatten(t: DecTree) -> tuple[int, list[tuple[int, int, int]]]:
    # edges (parent, child, decoration) in preorder; parents precede children
    edges: list[tuple[int, int, int]] = []
    counter = [0]

    def walk(sub, node):
        for dec, child in sub.children:
            counter[0] += 1
            cid = counter[0]
            edges.append((node, cid, dec))
            walk(child, cid)

    walk(t, 0)
    return counter[0] + 1, edges


def _build(node: int, kids: dict[int, list[tuple[int, int]]]) -> DecTree:
    return DecTree((dec, _build(c, kids)) for dec, c in kids.get(node, ()))


_coproduct_cache: dict[DecTree, LinComb] = {}


def extraction_contraction(t: DecTree) -> LinComb:
    """``Δ̂ t = sum_σ σ ⊗ t/σ`` over all edge subsets σ.

    Edges of σ meeting at a node (the root included) form one component; each
    component is extracted as a tree and contracted to its top node.  Keys
    are ``(TreeForest, DecTree)``.
    """
    cached = _coproduct_cache.get(t)
    if cached is not None:
        return cached
    if t.edges > MAX_EDGES:
        raise EnumerationGuardError(f"tree has {t.edges} edges; guard is {MAX_EDGES}")
    n_nodes, edges = _flatten(t)
    acc: dict[tuple[TreeForest, DecTree], Fraction] = {}
    for mask in range(1 << len(edges)):
        rep = list(range(n_nodes))
        inner: dict[int, list[tuple[int, int]]] = {}
        outer: dict[int, list[tuple[int, int]]] = {}
        tops = []
        for i, (p, c, dec) in enumerate(edges):
            if mask >> i & 1:
                if rep[p] == p and p not in inner:
                    tops.append(p)
                rep[c] = rep[p]
                inner.setdefault(p, []).append((dec, c))
            else:
                outer.setdefault(rep[p], []).append((dec, c))
        left = TreeForest(_build(top, inner) for top in tops)
        right = _build(0, outer)
        key = (left, right)
        acc[key] = acc.get(key, 0) + 1
    result = LinComb(acc)
    _coproduct_cache[t] = result
    return result


def forest_extraction_contraction(F) -> LinComb:
    """Multiplicative extension of ``Δ̂`` to forests; keys ``(TreeForest, TreeForest)``."""
    if isinstance(F, LinComb):
        return F.map_basis(forest_extraction_contraction)
    if isinstance(F, DecTree):
        F = F.as_forest()
    out = LinComb.basis((EMPTY_FOREST, EMPTY_FOREST))
    for t in F.trees:
        lifted = LinComb(((left, right.as_forest()), c) for (left, right), c in extraction_contraction(t).items())
        out = out * lifted
    return out


def tree_counit(x) -> Fraction:
    """``ε̂``: one on the empty forest / single-node tree, zero otherwise."""
    if isinstance(x, LinComb):
        return sum((c * tree_counit(k) for k, c in x.items()), Fraction(0))
    return Fraction(int(x.edges == 0))


class TreeCharacter:
    """Character on forests, stored by its values on trees.

    ``rule`` maps a tree with at least one edge to a rational; the empty
    forest gets 1 and forests get products, so multiplicativity holds by
    construction.
    """

    def __init__(self, rule: Callable[[DecTree], object], max_edges: int | None = None,
                 name: str | None = None):
        self._rule = rule
        self.max_edges = max_edges
        self.name = name
        self._memo: dict[DecTree, Fraction] = {}
        self._inverse: TreeCharacter | None = None

    @classmethod
    def from_table(cls, values: Mapping, max_edges: int | None = None, default=None,
                   name: str | None = None) -> TreeCharacter:
        table = {}
        for k, v in values.items():
            t = k if isinstance(k, DecTree) else parse_tree(k)
            if not t.edges:
                if to_rational(v) != 1:
                    raise PreconditionError("a character takes value 1 on the single-node tree")
                continue
            table[t] = to_rational(v)
        fallback = None if default is None else to_rational(default)

        def rule(t):
            try:
                return table[t]
            except KeyError:
                if fallback is None:
                    raise MissingValueError(f"no character value for {t}") from None
                return fallback

        return cls(rule, max_edges, name)

    def on_tree(self, t: DecTree) -> Fraction:
        if not t.edges:
            return Fraction(1)
        try:
            return self._memo[t]
        except KeyError:
            pass
        if self.max_edges is not None and t.edges > self.max_edges:
            raise TruncationError(f"character truncated at {self.max_edges} edges, asked for {t}")
        return self._memo.setdefault(t, to_rational(self._rule(t)))

    def __call__(self, x) -> Fraction:
        if isinstance(x, LinComb):
            return sum((c * self(k) for k, c in x.items()), Fraction(0))
        if isinstance(x, DecTree):
            return self.on_tree(x)
        if isinstance(x, TreeForest):
            value = Fraction(1)
            for t in x.trees:
                value *= self.on_tree(t)
                if not value:
                    break
            return value
        raise ValidationError(f"cannot evaluate a tree character on {x!r}")

    def table(self, d: int, max_edges: int | None = None) -> dict[DecTree, Fraction]:
        m = max_edges if max_edges is not None else self.max_edges
        if m is None:
            raise ValidationError("unbounded character needs an explicit max_edges")
        return {t: self.on_tree(t) for t in trees_up_to(m, d) if t.edges}

    def to_json(self, d: int) -> dict:
        return {
            "d": d,
            "max_edges": self.max_edges,
            "values": {t.encoding: rational_str(v) for t, v in self.table(d).items()},
        }

    @classmethod
    def from_json(cls, data) -> tuple[TreeCharacter, int]:
        """Returns the character and its decoration bound ``d``."""
        if isinstance(data, str):
            data = json.loads(data)
        try:
            d = data["d"]
            max_edges = data["max_edges"]
            values = data["values"]
        except (KeyError, TypeError) as exc:
            raise ValidationError("tree character JSON needs 'd', 'max_edges' and 'values'") from exc
        for k in values:
            parse_tree(k, d)
        return cls.from_table(values, max_edges), d

    def __repr__(self) -> str:
        return f"TreeCharacter({self.name or 'anonymous'}, max_edges={self.max_edges})"


COUNIT_CHARACTER = TreeCharacter(lambda t: Fraction(0), None, "counit")


def _require_character(*chars) -> None:
    for c in chars:
        if not isinstance(c, TreeCharacter):
            raise PreconditionError(f"expected a TreeCharacter, got {type(c).__name__}")


def _min_edges(*ms):
    bounded = [m for m in ms if m is not None]
    return min(bounded) if bounded else None


def tree_char_convolve(alpha: TreeCharacter, beta: TreeCharacter) -> TreeCharacter:
    """``(α ⋆̂ β)(τ) = (α ⊗ β) Δ̂ τ`` on trees, multiplicative on forests."""
    _require_character(alpha, beta)

    def rule(t):
        return sum((c * alpha(left) * beta(right) for (left, right), c in extraction_contraction(t).items()),
                   Fraction(0))

    return TreeCharacter(rule, _min_edges(alpha.max_edges, beta.max_edges))


def tree_char_inverse(alpha: TreeCharacter) -> TreeCharacter:
    """Inverse solving ``α ⋆̂ β = ε̂`` degree by degree for ``β``.

    ``β(τ) = -sum_{σ nonempty} α(σ) β(τ/σ)``; quotient trees have fewer edges.
    """
    _require_character(alpha)
    if alpha._inverse is not None:
        return alpha._inverse

    def rule(t):
        total = Fraction(0)
        for (left, right), c in extraction_contraction(t).items():
            if left:
                total += c * alpha(left) * beta.on_tree(right)
        return -total

    beta = TreeCharacter(rule, alpha.max_edges)
    alpha._inverse = beta
    return beta


def centering_character(mu: TreeCharacter) -> TreeCharacter:
    """The character ``λ`` with ``(λ ⋆̂ μ)(τ) = 0`` for every tree with edges.

    Solved from the other side of the convolution than
    :func:`tree_char_inverse`: the only term with a single-node quotient is
    ``σ = τ``, so ``λ(τ) = -sum_{σ != τ} λ(σ) μ(τ/σ)``, and each proper
    subforest has components with fewer edges.  By uniqueness of inverses in
    the character group the two agree.
    """
    _require_character(mu)

    def rule(t):
        total = Fraction(0)
        for (left, right), c in extraction_contraction(t).items():
            if right.edges:
                total += c * lam(left) * mu.on_tree(right)
        return -total

    lam = TreeCharacter(rule, mu.max_edges, "centering")
    return lam


def psi_lambda(lam: TreeCharacter, x) -> LinComb:
    """``ψ_λ = (λ ⊗ id) δ`` with ``δ = Δ̂`` restricted to trees."""
    _require_character(lam)
    if isinstance(x, LinComb):
        return x.map_basis(lambda t: psi_lambda(lam, t))
    acc: dict[DecTree, Fraction] = {}
    for (left, right), c in extraction_contraction(x).items():
        v = lam(left)
        if v:
            acc[right] = acc.get(right, 0) + c * v
    return LinComb(acc)


def deformed_tree_product(lam: TreeCharacter, x, y) -> LinComb:
    """``x ⊙_λ y = ψ_λ^{-1}[(ψ_λ x) ⊙ (ψ_λ y)]`` with ``ψ_λ^{-1} = ψ_{λ^{-1}}``."""
    _require_character(lam)
    prod = psi_lambda(lam, as_lincomb(x)) * psi_lambda(lam, as_lincomb(y))
    return psi_lambda(tree_char_inverse(lam), prod)


def _decoration_map(decorations) -> dict[str, int]:
    if isinstance(decorations, Mapping):
        mapping = dict(decorations)
    else:
        mapping = {x: i + 1 for i, x in enumerate(decorations)}
    for letter, dec in mapping.items():
        if not isinstance(dec, int) or dec < 1:
            raise ValidationError(f"decoration for {letter!r} must be a positive int")
    if len(set(mapping.values())) != len(mapping):
        raise ValidationError("decoration map must be injective")
    return mapping


def corolla_embed(A: Multiset, decorations) -> DecTree:
    """Multiset -> corolla with one leaf edge per letter occurrence.

    ``decorations`` maps letters to edge labels, or is a sequence of letters
    labelled ``1, 2, ...`` in order.
    """
    mapping = _decoration_map(decorations)
    kids = []
    for letter, n in A.items():
        if letter not in mapping:
            raise ValidationError(f"letter {letter!r} has no decoration")
        kids.extend((mapping[letter], NODE) for _ in range(n))
    return DecTree(kids)


def corolla_restrict(t: DecTree, decorations) -> Multiset:
    """Inverse of :func:`corolla_embed` on corollas."""
    if not t.is_corolla():
        raise ValidationError(f"{t} is not a corolla")
    inverse = {v: k for k, v in _decoration_map(decorations).items()}
    letters = []
    for dec, _ in t.children:
        if dec not in inverse:
            raise ValidationError(f"decoration {dec} has no letter")
        letters.append(inverse[dec])
    return Multiset.of(*letters)


def trees_up_to(max_edges: int, d: int) -> list[DecTree]:
    """All trees with at most ``max_edges`` edges and decorations in ``1..d``.

    Built by grafting one new leaf edge onto every node of the previous
    level; ordered by edge count, then encoding.
    """
    if d < 1:
        raise ValidationError("need at least one decoration")
    levels = [{NODE}]
    for _ in range(max_edges):
        nxt = set()
        for t in levels[-1]:
            for dec in range(1, d + 1):
                nxt.update(_graft_everywhere(t, dec))
        levels.append(nxt)
    out = [t for level in levels for t in level]
    out.sort(key=lambda t: (t.edges, t.encoding))
    return out


def _graft_everywhere(t: DecTree, dec: int) -> list[DecTree]:
    out = [DecTree(t.children + ((dec, NODE),))]
    for i, (d0, sub) in enumerate(t.children):
        for grafted in _graft_everywhere(sub, dec):
            kids = t.children[:i] + ((d0, grafted),) + t.children[i + 1:]
            out.append(DecTree(kids))
    return out


def tree_forests_up_to(max_edges: int, d: int) -> list[TreeForest]:
    trees = [t for t in trees_up_to(max_edges, d) if t.edges]
    out: list[TreeForest] = []

    def extend(start, budget, current):
        out.append(TreeForest(current))
        for i in range(start, len(trees)):
            if trees[i].edges <= budget:
                extend(i, budget - trees[i].edges, current + [trees[i]])

    extend(0, max_edges, [])
    out.sort(key=lambda f: (f.edges, str(f)))
    return out


def random_character(trees: Sequence[DecTree], rng, max_edges: int | None = None,
                     denominators: int = 7) -> TreeCharacter:
    """Character with random small rational values on the given trees."""
    values = {t: Fraction(rng.randint(-9, 9), rng.randint(1, denominators)) for t in trees if t.edges}
    return TreeCharacter.from_table(values, max_edges)
