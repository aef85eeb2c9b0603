"""Dilations over presented monoids and linear dilations over exact fields.

Monoid elements are normal-form words over ``range(k)``.  A monoid action
assigns a function to each generator and extends to words by composition,
``h_(g1 g2 ... gm) = h_g1 o h_g2 o ... o h_gm``.

On the linear side the dilation space is the space of finitely supported
sequences ``Z+ -> A``.  Elements are tuples of slot vectors; the truncation
at depth ``N`` is the block space ``A^(N+1)`` and every check becomes an
exact matrix identity there.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .endo import FinFunc
from .errors import (InvalidInput, NotLeftCancellative, RelationViolated, ShapeMismatch)
from .report import VerificationReport

Word = tuple[int, ...]

# -- presented monoids --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PresentedMonoid:
    """A monoid on ``k`` generators given by a normal form on words.

    ``relation_length`` is the word length needed to see every defining
    relation; checks always look at least that far.
    """

    name: str
    k: int
    normal_form: Callable[[Word], Word]
    relation_length: int = 0

    def nf(self, w: Sequence[int]) -> Word:
        return tuple(self.normal_form(tuple(w)))

    def mul(self, s: Sequence[int], t: Sequence[int]) -> Word:
        return self.nf(tuple(s) + tuple(t))

    def words(self, max_len: int) -> list[Word]:
        """Distinct normal forms of all words of length at most ``max_len``, in first-seen order."""
        seen: dict[Word, None] = {}
        for length in range(max_len + 1):
            for w in itertools.product(range(self.k), repeat=length):
                seen.setdefault(self.nf(w), None)
        return list(seen)

    def is_normal(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        return all(isinstance(j, int) and 0 <= j < self.k for j in w) and self.nf(w) == w

    def looks_finite(self, max_len: int) -> bool:
        """True when no new normal forms appear at length ``max_len + 1``."""
        return len(self.words(max_len)) == len(self.words(max_len + 1))

    def check(self, max_len: int) -> None:
        """Idempotence, associativity and left cancellativity on words up to ``max_len``."""
        L = max(max_len, self.relation_length)
        raw = [w for n in range(L + 1) for w in itertools.product(range(self.k), repeat=n)]
        for w in raw:
            v = self.nf(w)
            if any(not (isinstance(j, int) and 0 <= j < self.k) for j in v):
                raise InvalidInput(f"normal form of {w} uses an unknown generator", witness=w)
            if self.nf(v) != v:
                raise InvalidInput(f"normal form is not idempotent at {w}", witness=w)
        ws = self.words(L)
        short = self.words(max(1, L // 2))
        for s, t, u in itertools.product(short, short, short):
            if self.mul(self.mul(s, t), u) != self.mul(s, self.mul(t, u)):
                raise InvalidInput(f"multiplication is not associative at {(s, t, u)}", witness=(s, t, u))
        for s in ws:
            back: dict[Word, Word] = {}
            for t in ws:
                st = self.mul(s, t)
                if st in back and back[st] != t:
                    raise NotLeftCancellative(f"{s}*{back[st]} = {s}*{t} = {st}", witness=(s, back[st], t))
                back[st] = t

    @classmethod
    def zplus(cls, k: int) -> "PresentedMonoid":
        """The free commutative monoid; normal form is the sorted word."""
        return cls(f"zplus{k}", k, lambda w: tuple(sorted(w)))

    @classmethod
    def free(cls, k: int) -> "PresentedMonoid":
        return cls(f"free{k}", k, lambda w: w)

    @classmethod
    def zd(cls, d: int) -> "PresentedMonoid":
        """The cyclic group of order ``d`` on one generator."""
        if d < 1:
            raise InvalidInput("the cyclic group needs d >= 1")
        return cls(f"zd:{d}", 1, lambda w: (0,) * (len(w) % d), relation_length=d + 1)

    @classmethod
    def preset(cls, spec: str) -> "PresentedMonoid":
        """Parse ``zplusK``, ``freeK`` or ``zd:D``."""
        try:
            if spec.startswith("zplus"):
                return cls.zplus(int(spec[5:]))
            if spec.startswith("free"):
                return cls.free(int(spec[4:]))
            if spec.startswith("zd:"):
                return cls.zd(int(spec[3:]))
        except ValueError:
            pass
        raise InvalidInput(f"unknown monoid preset {spec!r}")

    def __repr__(self) -> str:
        return f"PresentedMonoid({self.name})"


@dataclass(frozen=True, eq=False)
class MonoidAction:
    monoid: PresentedMonoid
    maps: tuple[FinFunc, ...]

    def __init__(self, monoid: PresentedMonoid, maps: Iterable):
        ms = tuple(m if isinstance(m, FinFunc) else FinFunc(m) for m in maps)
        if len(ms) != monoid.k:
            raise ShapeMismatch(f"{monoid.name} has {monoid.k} generators but {len(ms)} maps were given")
        if len({m.n for m in ms}) > 1:
            raise ShapeMismatch("all generator maps must act on the same base")
        object.__setattr__(self, "monoid", monoid)
        object.__setattr__(self, "maps", ms)

    @property
    def n(self) -> int:
        return self.maps[0].n

    def apply(self, s: Sequence[int], a: int) -> int:
        for j in reversed(tuple(s)):
            a = self.maps[j].table[a]
        return a

    def table(self, s: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.apply(s, a) for a in range(self.n))

    def check(self, max_len: int) -> None:
        """Words with equal normal forms must act identically."""
        M = self.monoid
        L = max(max_len, M.relation_length)
        for n in range(L + 1):
            for w in itertools.product(range(M.k), repeat=n):
                v = M.nf(w)
                if v != w and self.table(w) != self.table(v):
                    raise RelationViolated(f"h{w} differs from h{v} although both words are equal in {M.name}",
                                           witness=(w, v))

    def to_json(self) -> dict:
        return {"monoid": self.monoid.name, "n": self.n, "maps": [list(m.table) for m in self.maps]}


class MonoidDilation:
    """``B = A x S`` with ``i(a) = (a, 1)``, ``v_s(a, t) = (a, s t)``, ``p(a, s) = (h_s(a), 1)``."""

    def __init__(self, act: MonoidAction):
        self.act = act
        self.monoid = act.monoid
        self.n = act.n

    def i(self, a: int):
        return (a, ())

    def v(self, s: Sequence[int], x):
        a, t = x
        return (a, self.monoid.mul(s, t))

    def p(self, x):
        a, s = x
        return (self.act.apply(s, a), ())

    def contains(self, x) -> bool:
        a, t = x
        return isinstance(a, int) and 0 <= a < self.n and self.monoid.is_normal(t)

    def elements(self, max_len: int) -> Iterator:
        for t in self.monoid.words(max_len):
            for a in range(self.n):
                yield (a, t)


def monoid_standard_dilation(act: MonoidAction, check_length: int = 4) -> MonoidDilation:
    act.monoid.check(check_length)
    act.check(check_length)
    return MonoidDilation(act)


def verify_monoid_dilation(q: MonoidDilation, act: MonoidAction, length: int) -> VerificationReport:
    M = q.monoid
    rep = VerificationReport(f"monoid dilation over {M.name} to length {length}")
    ws = M.words(length)
    pts = list(q.elements(length))
    for s in ws:
        for a in range(act.n):
            rep.count("identity instances")
            if q.p(q.v(s, q.i(a))) != q.i(act.apply(s, a)):
                rep.fail("identity", {"s": list(s), "a": a})
    rep.passed("identity")

    half = M.words(max(1, (length + 1) // 2))
    for s, t in itertools.product(half, half):
        st = M.mul(s, t)
        for x in pts:
            if q.v(st, x) != q.v(s, q.v(t, x)):
                rep.fail("v_st = v_s v_t", {"s": list(s), "t": list(t), "x": x})
    rep.passed("v_st = v_s v_t")

    finite = M.looks_finite(length)
    for s in ws:
        seen = {}
        for x in pts:
            y = q.v(s, x)
            if y in seen and seen[y] != x:
                rep.fail("v_s injective", {"s": list(s), "x": seen[y], "x'": x})
            seen[y] = x
        if finite and len(seen) != len(pts):
            missed = next(y for y in pts if y not in seen)
            rep.fail("v_s bijective", {"s": list(s), "missed": missed})
    rep.passed("v_s injective")
    if finite:
        rep.passed("v_s bijective")

    base = {q.i(a) for a in range(q.n)}
    for x in pts:
        rep.count("points")
        if q.p(q.p(x)) != q.p(x):
            rep.fail("p idempotent", x)
        if q.p(x) not in base:
            rep.fail("range", x)
        a, t = x
        if q.v(t, q.i(a)) != x:
            rep.fail("minimal", x)
    for name in ("p idempotent", "range", "minimal"):
        rep.passed(name)
    return rep


# -- linear dilations ---------------------------------------------------------


def parse_field(spec):
    """``q`` for the rationals, ``gf:P`` for the prime field of order ``P``."""
    if spec in ("q", "Q", "QQ"):
        return QQ
    if isinstance(spec, str) and spec.lower().startswith("gf:"):
        try:
            p = int(spec[3:])
        except ValueError:
            raise InvalidInput(f"bad field {spec!r}") from None
        if not isprime(p):
            raise InvalidInput(f"GF({p}) is not a prime field")
        return GF(p)
    raise InvalidInput(f"unknown field {spec!r}; use q or gf:P")


def field_name(K) -> str:
    return "q" if K == QQ else f"gf:{K.characteristic()}"


def scalar(K, x):
    """Convert an int, Fraction or exact string to ``K``; floats are rejected."""
    if isinstance(x, bool) or isinstance(x, float):
        raise InvalidInput(f"inexact scalar {x!r}; use integers or fraction strings")
    if isinstance(x, str):
        if any(c in x for c in ".eE"):
            raise InvalidInput(f"inexact scalar {x!r}; use integers or fraction strings")
        try:
            x = Fraction(x.strip())
        except ValueError:
            raise InvalidInput(f"cannot parse scalar {x!r}") from None
    if isinstance(x, int):
        x = Fraction(x)
    if not isinstance(x, Fraction):
        raise InvalidInput(f"unsupported scalar {x!r}")
    if K == QQ:
        return QQ(x.numerator, x.denominator)
    p = K.characteristic()
    if x.denominator % p == 0:
        raise InvalidInput(f"{x} has no value in GF({p})")
    return K(x.numerator) / K(x.denominator)


def encode_scalar(K, x) -> str:
    if K == QQ:
        return str(x)
    return str(int(x) % K.characteristic())


def _dense(M: DomainMatrix) -> DomainMatrix:
    """Canonical storage; the block matrices are mostly zero, so this is the sparse form."""
    return M.to_sparse()


def _zeros(r: int, c: int, K) -> DomainMatrix:
    return DomainMatrix({}, (r, c), K)


def _eye(n: int, K) -> DomainMatrix:
    return DomainMatrix({i: {i: K.one} for i in range(n)}, (n, n), K)


def _from_rows(rows, K) -> DomainMatrix:
    r = len(rows)
    c = len(rows[0]) if rows else 0
    return _dense(DomainMatrix([list(row) for row in rows], (r, c), K))


def _first_mismatch(X: DomainMatrix, Y: DomainMatrix):
    """First ``(row, col)`` where two equally shaped matrices differ."""
    for r, (u, w) in enumerate(zip(X.to_list(), Y.to_list())):
        for c, (x, y) in enumerate(zip(u, w)):
            if x != y:
                return r, c
    return None


@dataclass(frozen=True, eq=False)
class LinMap:
    """A square matrix over an exact field acting on column vectors."""

    matrix: DomainMatrix

    def __post_init__(self):
        M = self.matrix
        r, c = M.shape
        if r != c or r < 1:
            raise ShapeMismatch(f"a linear map needs a non-empty square matrix, got {r}x{c}")
        if M.domain != QQ and not (M.domain.is_FiniteField and isprime(M.domain.characteristic())):
            raise InvalidInput(f"{M.domain} is not an exact field")
        object.__setattr__(self, "matrix", _dense(M))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def field(self):
        return self.matrix.domain

    def power(self, n: int) -> DomainMatrix:
        cache = self.__dict__.setdefault("_powers", [_eye(self.dim, self.field)])
        while len(cache) <= n:
            cache.append(_dense(cache[-1] * self.matrix))
        return cache[n]

    def apply(self, vec: Sequence) -> tuple:
        col = _dense(DomainMatrix([[x] for x in vec], (self.dim, 1), self.field))
        return tuple(row[0] for row in (self.matrix * col).to_list())

    @classmethod
    def from_entries(cls, entries, field="q") -> "LinMap":
        K = parse_field(field) if isinstance(field, str) else field
        rows = [[scalar(K, x) for x in row] for row in entries]
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ShapeMismatch("entries must form a non-empty square array")
        return cls(_from_rows(rows, K))

    @classmethod
    def identity(cls, dim: int, field="q") -> "LinMap":
        K = parse_field(field) if isinstance(field, str) else field
        return cls(_eye(dim, K))

    @classmethod
    def random(cls, dim: int, field="q", rng: random.Random | None = None, spread: int = 3) -> "LinMap":
        """Random entries: integers in ``[-spread, spread]`` over Q, uniform over GF(p)."""
        K = parse_field(field) if isinstance(field, str) else field
        rng = rng or random.Random(0)
        if K == QQ:
            draw = lambda: QQ(rng.randint(-spread, spread))
        else:
            p = K.characteristic()
            draw = lambda: K(rng.randrange(p))
        return cls(_from_rows([[draw() for _ in range(dim)] for _ in range(dim)], K))

    def to_json(self) -> dict:
        K = self.field
        return {"dim": self.dim, "field": field_name(K),
                "entries": [[encode_scalar(K, x) for x in row] for row in self.matrix.to_list()]}

    def __eq__(self, other) -> bool:
        return isinstance(other, LinMap) and self.field == other.field and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.dim, field_name(self.field)))


Seq = tuple[tuple, ...]  # slot vectors of a finitely supported sequence


@dataclass(frozen=True, eq=False)
class LinearDilation:
    """``i(a) = a`` at slot 0, ``v`` shifts slots right, ``p(b) = i(sum_n h^n b(n))``.

    ``perturbation`` adds ``{(row, col): value}`` to the truncated ``p`` matrix
    (global block coordinates), which is only useful for exercising the checker.
    """

    h: LinMap
    perturbation: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.h.dim

    @property
    def field(self):
        return self.h.field

    # structured operators on finitely supported sequences
    def zero_vector(self) -> tuple:
        return (self.field.zero,) * self.dim

    def _trim(self, b: Sequence[Sequence]) -> Seq:
        b = [tuple(x) for x in b]
        z = self.zero_vector()
        while b and b[-1] == z:
            b.pop()
        return tuple(b)

    def i(self, a: Sequence) -> Seq:
        if len(a) != self.dim:
            raise ShapeMismatch(f"expected a vector of length {self.dim}")
        return self._trim([a])

    def v(self, b: Seq) -> Seq:
        return self._trim([self.zero_vector()] + list(b)) if b else ()

    def p(self, b: Seq) -> Seq:
        if self.perturbation:
            depth = max(len(b) - 1, max(c for _, c in self.perturbation) // self.dim, 0)
            col = self.flatten(b, depth)
            out = self.P(depth) * col
            flat = [row[0] for row in out.to_list()]
            return self._trim([flat[k * self.dim:(k + 1) * self.dim] for k in range(depth + 1)])
        K = self.field
        acc = [K.zero] * self.dim
        for n, slot in enumerate(b):
            acc = [x + y for x, y in zip(acc, _apply(self.h.power(n), slot))]
        return self._trim([acc])

    def flatten(self, b: Seq, depth: int) -> DomainMatrix:
        """``b`` as a column of the truncation ``A^(depth+1)``."""
        if len(b) > depth + 1:
            raise ShapeMismatch(f"sequence of length {len(b)} exceeds the truncation at depth {depth}")
        K = self.field
        flat = [x for slot in b for x in slot]
        flat += [K.zero] * ((depth + 1) * self.dim - len(flat))
        return _dense(DomainMatrix([[x] for x in flat], (len(flat), 1), K))

    def basis(self, depth: int) -> Iterator[Seq]:
        K = self.field
        for k in range(depth + 1):
            for j in range(self.dim):
                slot = [K.zero] * self.dim
                slot[j] = K.one
                yield self._trim([self.zero_vector()] * k + [slot])

    # truncation matrices
    def I(self, depth: int) -> DomainMatrix:
        d, K = self.dim, self.field
        return _dense(_eye(d, K).vstack(_zeros(d * depth, d, K))) if depth else _eye(d, K)

    def V(self, depth: int, rectangular: bool = False) -> DomainMatrix:
        """Block shift on ``A^(depth+1)``; the rectangular form lands in ``A^(depth+2)`` and is exact."""
        d, K = self.dim, self.field
        rows_blocks = depth + 2 if rectangular else depth + 1
        rows = [[K.zero] * (d * (depth + 1)) for _ in range(d * rows_blocks)]
        for k in range(depth + 1):
            if k + 1 < rows_blocks:
                for j in range(d):
                    rows[d * (k + 1) + j][d * k + j] = K.one
        return _from_rows(rows, K)

    def P(self, depth: int) -> DomainMatrix:
        d, K = self.dim, self.field
        size = d * (depth + 1)
        top = [[K.zero] * size for _ in range(d)]
        for n in range(depth + 1):
            hn = self.h.power(n).to_list()
            for r in range(d):
                for c in range(d):
                    top[r][d * n + c] = hn[r][c]
        rows = top + [[K.zero] * size for _ in range(size - d)]
        for (r, c), val in self.perturbation.items():
            if r < size and c < size:
                rows[r][c] = rows[r][c] + scalar(K, val)
        return _from_rows(rows, K)

    def corrupted(self, row: int, col: int, delta: int | str = 1) -> "LinearDilation":
        scalar(self.field, delta)
        pert = dict(self.perturbation)
        pert[(row, col)] = delta
        return LinearDilation(self.h, pert)


def _apply(M: DomainMatrix, vec: Sequence) -> list:
    col = _dense(DomainMatrix([[x] for x in vec], (len(vec), 1), M.domain))
    return [row[0] for row in (M * col).to_list()]


def linear_standard_dilation(h: LinMap) -> LinearDilation:
    return LinearDilation(h)


def verify_linear_dilation(ld: LinearDilation, depth: int) -> VerificationReport:
    """Exact checks on the truncation ``A^(depth+1)``."""
    d, K = ld.dim, ld.field
    N = depth
    rep = VerificationReport(f"linear dilation over {field_name(K)} to depth {N}")
    I, V, P = ld.I(N), ld.V(N), ld.P(N)
    size = d * (N + 1)

    X = I  # v^n i
    blocks = []
    for n in range(N + 1):
        blocks.append(X)
        lhs = _dense(P * X)
        rhs = _dense(I * ld.h.power(n))
        rep.count("identity instances", d)
        bad = _first_mismatch(lhs, rhs)
        if bad is not None:
            rep.fail("identity", {"n": n, "basis": bad[1], "row": bad[0]})
        X = _dense(V * X)
    rep.passed("identity")

    for e in ld.basis(N):
        rep.count("basis vectors")
        got = ld.flatten(ld.p(e), N)
        want = _dense(P * ld.flatten(e, N))
        if got != want:
            rep.fail("p linear", {"basis": [list(map(str, s)) for s in e]},
                     "structured p disagrees with its matrix")
    rep.passed("p linear")

    bad = _first_mismatch(_dense(P * P), P)
    if bad is not None:
        rep.fail("p idempotent", {"row": bad[0], "col": bad[1]})
    rep.passed("p idempotent")

    if ld.I(N).rank() != d:
        rep.fail("i injective", {"rank": ld.I(N).rank()})
    rep.passed("i injective")
    rv = ld.V(N, rectangular=True).rank()
    if rv != size:
        rep.fail("v injective", {"rank": rv, "expected": size})
    rep.passed("v injective")

    rp, rboth = P.rank(), _dense(P.hstack(I)).rank()
    if not (rp == d and rboth == d):
        rep.fail("range(p) = range(i)", {"rank p": rp, "rank [p i]": rboth, "dim": d})
    rep.passed("range(p) = range(i)", f"rank {rp}")

    span = _dense(blocks[0].hstack(*blocks[1:])) if len(blocks) > 1 else blocks[0]
    rs = span.rank()
    if rs != size:
        rep.fail("minimal", {"span rank": rs, "expected": size})
    rep.passed("minimal", f"span rank {rs}")
    return rep
