"""Tensor-word complexes on the chain coalgebra of a simplicial set.

Words [a1|...|ak] are tuples of letter ids: nondegenerate simplices of
dimension >= 1 (of Z(X) in the inverted setting, of X itself in the
1-reduced setting).  The cobar differential acts as a derivation of the
single-letter rule

    d[c] = -[d c] + sum (-1)^{|c'|} [c'|c'']

over the reduced Alexander-Whitney coproduct, where the internal
differential is the full normalized boundary, or only its inner faces in
the inverted ("hat") setting.  Koszul signs use the shifted letter degree
|a| - 1, which is the unique extension with d^2 = 0.

The bar construction of the resulting tensor algebra lives here too.
"""

from __future__ import annotations

from .homalg import Chain, ComplexSlice, SparseIntMatrix, ZZ
from .simplicial import (
    OpExtension,
    SimplicialError,
    aw_coproduct,
    endpoints,
    face,
    nondeg,
)

Word = tuple  # tuple of letter ids
BarWord = tuple  # tuple of Words


# ---------------------------------------------------------------------------
# Letter tables


class _Alphabet:
    """Per-space cache of everything the word calculus needs per letter."""

    def __init__(self, space, hat):
        if isinstance(space, OpExtension):
            self.X = space.space
            self.op_pairs = dict(space.op_pairs)
        else:
            self.X = space
            self.op_pairs = {}
        self.hat = hat
        self.dim = {}
        self.ends = {}
        self.d_terms = {}
        self.split_terms = {}
        X = self.X
        for d, ids in X.simplices.items():
            if d < 1:
                continue
            for s in ids:
                self.dim[s] = d
                self.ends[s] = endpoints(X, nondeg(s))
                self.d_terms[s] = self._letter_boundary(s, d)
                self.split_terms[s] = tuple(
                    ((-1) ** X.dim(f.base), f.base, b.base)
                    for f, b in aw_coproduct(X, s, reduced=True)
                )

    def _letter_boundary(self, s, d):
        lo, hi = (1, d - 1) if self.hat else (0, d)
        terms = []
        for i in range(lo, hi + 1):
            f = face(self.X, nondeg(s), i)
            if not f.is_degenerate and self.X.dim(f.base) >= 1:
                terms.append(((-1) ** i, f.base))
        return tuple(terms)


def _alphabet(space, hat):
    holder = space.space if isinstance(space, OpExtension) else space
    key = ("_loophomology_alphabet", bool(hat))
    cache = getattr(holder, "_alphabet_cache", None)
    if cache is None:
        cache = {}
        holder._alphabet_cache = cache
    if key not in cache:
        cache[key] = _Alphabet(space, hat)
    return cache[key]


def word_degree(space, w):
    """Degree of a cobar word: the sum of shifted letter dimensions."""
    alpha = _alphabet(space, isinstance(space, OpExtension))
    return sum(alpha.dim[a] - 1 for a in w)


def format_word(w):
    """The serialization [a1|a2|...|ak]; inverse letters carry their ~."""
    return "[" + "|".join(w) + "]"


# ---------------------------------------------------------------------------
# Free reduction


def reduce_word(w, op_pairs):
    """Delete adjacent formally-inverse pairs of 1-simplex letters.

    op is an involution, so both orders (x, x~) and (x~, x) cancel; the
    stack pass yields the unique fully reduced word.
    """
    out = []
    for a in w:
        if out and op_pairs.get(out[-1]) == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


# ---------------------------------------------------------------------------
# Differentials


def truncated_boundary_dA(space, letter, ring=ZZ):
    """Inner-face boundary of a letter: sum_{0<i<n} (-1)^i d_i, normalized."""
    alpha = _alphabet(space, hat=True)
    if letter not in alpha.dim:
        raise SimplicialError(f"{letter!r} is not a letter (dimension >= 1)")
    out = Chain(ring)
    X = alpha.X
    d = alpha.dim[letter]
    for i in range(1, d):
        f = face(X, nondeg(letter), i)
        if not f.is_degenerate:
            out.add(f.base, -1 if i % 2 else 1)
    return out


def _letter_rule(alpha, a):
    """d[a] as (coef, word) pairs: internal boundary plus coproduct splits."""
    terms = [(-c, (b,)) for c, b in alpha.d_terms[a]]
    terms.extend((c, (f, b)) for c, f, b in alpha.split_terms[a])
    return terms


def cobar_differential(space, w, ring=ZZ, hat=None):
    """Differential of a cobar word, as a Chain over reduced words.

    space is a presentation (1-reduced, letters of dimension >= 2) or an
    OpExtension (hat setting, inner-face internal differential, outputs
    re-reduced).  The empty word is the algebra unit and maps to zero.
    """
    if hat is None:
        hat = isinstance(space, OpExtension)
    alpha = _alphabet(space, hat)
    out = Chain(ring)
    for key, c in _cobar_diff_raw(alpha, tuple(w)).items():
        out.add(key, c)
    return out


def _cobar_diff_raw(alpha, w):
    terms = {}
    sign = 1
    for i, a in enumerate(w):
        if a not in alpha.dim:
            raise SimplicialError(f"{a!r} is not in the reduced letter basis")
        for c, piece in _letter_rule(alpha, a):
            new = w[:i] + piece + w[i + 1 :]
            if alpha.op_pairs:
                new = reduce_word(new, alpha.op_pairs)
            coef = sign * c
            terms[new] = terms.get(new, 0) + coef
        sign *= (-1) ** (alpha.dim[a] - 1)
    return {k: v for k, v in terms.items() if v}


# ---------------------------------------------------------------------------
# Word bases


def cobar_basis(space, degree):
    """All cobar words of the given degree over a 1-reduced presentation."""
    X = space.space if isinstance(space, OpExtension) else space
    if not X.is_one_reduced():
        raise SimplicialError(
            f"{X.name}: cobar words without a length cap need a 1-reduced space"
        )
    alpha = _alphabet(space, hat=isinstance(space, OpExtension))
    letters = sorted(a for a in alpha.dim if alpha.dim[a] >= 2)
    words = []

    def extend(prefix, remaining):
        if remaining == 0:
            words.append(tuple(prefix))
            return
        for a in letters:
            da = alpha.dim[a] - 1
            if da <= remaining:
                prefix.append(a)
                extend(prefix, remaining - da)
                prefix.pop()

    if degree == 0:
        return [()]
    extend([], degree)
    return sorted(words, key=lambda w: (len(w), w))


def words_between(space, start, end, degree, max_word_length):
    """Reduced words of one degree whose letters chain start -> end.

    Letters are edges of the 1-skeleton quiver (a letter runs from its
    first to its last vertex); enumeration is depth-first with the length
    cap pruning, returned in (length, word) order.  The empty word appears
    exactly when start == end and degree == 0.
    """
    if max_word_length < 1:
        raise SimplicialError("max_word_length must be >= 1")
    alpha = _alphabet(space, hat=isinstance(space, OpExtension))
    out_edges = {}
    for a, d in alpha.dim.items():
        lo, hi = alpha.ends[a]
        out_edges.setdefault(lo, []).append((a, hi, d - 1))
    for lst in out_edges.values():
        lst.sort()
    words = []

    def extend(prefix, at, deg_left):
        if deg_left == 0 and at == end:
            words.append(tuple(prefix))
        if len(prefix) == max_word_length:
            return
        for a, hi, da in out_edges.get(at, ()):
            if da <= deg_left and not (
                prefix and alpha.op_pairs.get(prefix[-1]) == a
            ):
                prefix.append(a)
                extend(prefix, hi, deg_left - da)
                prefix.pop()

    extend([], start, degree)
    return sorted(words, key=lambda w: (len(w), w))


def hat_cobar_basis(space, degree, max_word_length):
    """Reduced words of one degree based at the basepoint, length capped."""
    base = (space.space if isinstance(space, OpExtension) else space).basepoint
    return words_between(space, base, base, degree, max_word_length)


# ---------------------------------------------------------------------------
# The word algebra and its bar construction


class CobarAlgebra:
    """The tensor algebra of cobar words, with product = concatenation.

    Provides exactly what the bar and Hochschild differentials consume:
    degrees, the internal differential, and the monomial product.
    """

    def __init__(self, space, hat=None):
        self.space = space
        self.hat = isinstance(space, OpExtension) if hat is None else hat
        self.alpha = _alphabet(space, self.hat)

    def degree(self, w):
        return sum(self.alpha.dim[a] - 1 for a in w)

    def differential(self, w):
        """d(w) as a dict {word: coefficient}."""
        return _cobar_diff_raw(self.alpha, tuple(w))

    def multiply(self, u, v):
        w = tuple(u) + tuple(v)
        if self.alpha.op_pairs:
            w = reduce_word(w, self.alpha.op_pairs)
        return w


def bar_degree(algebra, barword):
    return sum(algebra.degree(a) + 1 for a in barword)


def bar_differential(algebra, barword, ring=ZZ):
    """Bar construction differential d1 + d2 on a bar word over the algebra.

    d1 replaces one letter by its internal differential, d2 multiplies one
    adjacent pair; signs use eps_i = |a_1| + ... + |a_i| + i.  Letters must
    lie in the augmentation kernel (no empty cobar word).
    """
    w = tuple(tuple(a) for a in barword)
    if any(len(a) == 0 for a in w):
        raise SimplicialError("bar letters must be non-unit cobar words")
    out = Chain(ring)
    eps = 0  # eps_{i-1} going in
    for i, a in enumerate(w):
        for da, c in algebra.differential(a).items():
            if da:  # unit components die in the augmentation kernel
                out.add(w[:i] + (da,) + w[i + 1 :], -c * (-1) ** eps)
        eps += algebra.degree(a) + 1
        if i + 1 < len(w):
            prod = algebra.multiply(a, w[i + 1])
            if prod:
                out.add(w[:i] + (prod,) + w[i + 2 :], -((-1) ** eps))
    return out


# ---------------------------------------------------------------------------
# Complex slices


def _close_and_build(bases_by_degree, diff_fn, max_degree, truncated_at=None):
    """Assemble a ComplexSlice, closing bases downward under the differential.

    The seeded generator sets need not be closed under d (truncated word
    enumerations are not); any generator appearing in a differential is
    adopted into the lower basis, so the stored matrices form an honest
    subcomplex and d.d = 0 holds exactly.
    """
    bases = {n: list(gens) for n, gens in bases_by_degree.items()}
    diff_cache = {}
    for n in range(max_degree, 0, -1):
        lower = dict.fromkeys(bases.get(n - 1, ()))
        for g in bases.get(n, ()):
            dg = diff_fn(g)
            diff_cache[g] = dg
            for key in dg:
                if key not in lower:
                    lower[key] = None
        bases[n - 1] = list(lower)
    bases = {n: sorted(gens, key=_generator_sort_key) for n, gens in bases.items() if gens}
    diffs = {}
    for n in range(1, max_degree + 1):
        if n not in bases:
            continue
        rows = bases.get(n - 1, ())
        row_index = {g: i for i, g in enumerate(rows)}
        columns = []
        for g in bases[n]:
            dg = diff_cache.get(g)
            if dg is None:
                dg = diff_fn(g)
            columns.append({row_index[k]: c for k, c in dg.items()})
        diffs[n] = SparseIntMatrix.from_columns(len(rows), columns)
    return ComplexSlice(bases, diffs, truncated_at=truncated_at)


def _generator_sort_key(g):
    # Stable order for heterogeneous generator keys (strings, nested tuples).
    def rec(x):
        if isinstance(x, tuple):
            return (1, len(x), tuple(rec(y) for y in x))
        return (0, str(x))

    return rec(g)


def cobar_slice(space, max_degree, max_word_length=None):
    """ComplexSlice of the cobar construction through max_degree.

    For a 1-reduced presentation the bases are exact per degree; for an
    OpExtension a word-length cap is mandatory and the slice is the
    d-closure of the capped enumeration, flagged via ``truncated_at``.
    """
    hat = isinstance(space, OpExtension)
    X = space.space if hat else space
    if hat and not X.is_one_reduced():
        if max_word_length is None:
            raise SimplicialError(
                f"{X.name}: the inverted cobar complex is degreewise infinite; "
                f"a word-length cap is required"
            )
        seeds = {
            n: hat_cobar_basis(space, n, max_word_length)
            for n in range(max_degree + 1)
        }
        truncated_at = max_word_length
    elif hat:
        # 1-reduced: letters carry degree >= 1, so length <= degree is exact.
        seeds = {
            n: hat_cobar_basis(space, n, max(max_degree, 1))
            for n in range(max_degree + 1)
        }
        truncated_at = None
    else:
        seeds = {n: cobar_basis(space, n) for n in range(max_degree + 1)}
        truncated_at = None
    alpha = _alphabet(space, hat)

    def diff(w):
        return _cobar_diff_raw(alpha, w)

    return _close_and_build(seeds, diff, max_degree, truncated_at=truncated_at)


def hochschild_basis(algebra, degree, word_cap=None):
    """Generators (barword, u) of Hoch(A) in one degree, A the word algebra.

    Over a 1-reduced space the basis is exact.  Otherwise ``word_cap``
    bounds the total number of alphabet letters across the bar word and u,
    mirroring the cobar truncation.
    """
    X = algebra.alpha.X
    if word_cap is None and not X.is_one_reduced():
        raise SimplicialError(
            f"{X.name}: Hochschild generators over the inverted algebra need a cap"
        )
    out = []
    if word_cap is None:
        words_of = {d: cobar_basis(algebra.space, d) for d in range(degree + 1)}

        def bar_letters(bound):
            for d in range(1, bound + 1):
                for w in words_of[d]:
                    yield w, d

        def extend(prefix, deg_left):
            for u in words_of.get(deg_left, ()):
                out.append((tuple(prefix), u))
            for w, d in bar_letters(deg_left - 1):
                prefix.append(w)
                extend(prefix, deg_left - d - 1)
                prefix.pop()

        extend([], degree)
    else:
        all_words = []
        for d in range(degree + 1):
            for w in hat_cobar_basis(algebra.space, d, word_cap):
                all_words.append((w, d, len(w)))

        def extend(prefix, deg_left, cap_left):
            for u, du, lu in all_words:
                if du == deg_left and lu <= cap_left:
                    out.append((tuple(prefix), u))
            for w, dw, lw in all_words:
                if 1 <= lw <= cap_left and dw + 1 <= deg_left:
                    prefix.append(w)
                    extend(prefix, deg_left - dw - 1, cap_left - lw)
                    prefix.pop()

        extend([], degree, word_cap)
    return sorted(out, key=_generator_sort_key)
