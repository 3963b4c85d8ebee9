"""Exact sparse linear algebra over Z, Q and F_p, chain-complex slices,
and homology via Smith normal form.

All matrices carry exact integer entries; the coefficient ring only enters
when homology is extracted (Smith normal form over Z, fraction-free rank
over Q, modular rank over F_p).  Everything is deterministic: bases are
ordered lists and every reduction uses a fixed pivot rule.
"""

from __future__ import annotations

import json
from math import gcd


class IncompleteSliceError(ValueError):
    """A homology request needs a differential the slice does not carry."""


# ---------------------------------------------------------------------------
# Coefficient rings


class Ring:
    """Ground ring descriptor: Z, Q, or a prime field F_p."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=None):
        if kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {kind!r}")
        if kind == "Fp":
            if p is None or p < 2 or not _is_prime(p):
                raise ValueError(f"F_p requires a prime modulus, got {p!r}")
        elif p is not None:
            raise ValueError("modulus only makes sense for prime fields")
        self.kind = kind
        self.p = p

    @property
    def is_field(self):
        return self.kind != "Z"

    def normalize(self, c):
        """Canonical representative of an integer coefficient."""
        return c % self.p if self.kind == "Fp" else c

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


ZZ = Ring("Z")
QQ = Ring("Q")


def prime_field(p):
    return Ring("Fp", p)


def parse_ring(text):
    """Parse a ring spec: "Z", "Q", or "F<p>" with p prime."""
    if text == "Z":
        return ZZ
    if text == "Q":
        return QQ
    if text.startswith("F") and text[1:].isdigit():
        return prime_field(int(text[1:]))
    raise ValueError(f"cannot parse ring {text!r} (expected Z, Q or F<p>)")


# ---------------------------------------------------------------------------
# Chains

class Chain:
    """Finite formal sum of generator keys with nonzero coefficients.

    Keys may be any totally ordered hashables; iteration is always sorted,
    so printed chains and derived matrices are reproducible.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {}
        if terms:
            for key, c in terms.items() if isinstance(terms, dict) else terms:
                self.add(key, c)

    def add(self, key, c):
        c = self.ring.normalize(c + self.terms.get(key, 0))
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)
        return self

    def add_chain(self, other, scale=1):
        for key, c in other.terms.items():
            self.add(key, scale * c)
        return self

    def scaled(self, c):
        return Chain(self.ring, [(k, c * v) for k, v in self.terms.items()])

    def coefficient(self, key):
        return self.terms.get(key, 0)

    def items(self):
        return sorted(self.terms.items())

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    __hash__ = None  # chains are mutable accumulators

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for key, c in self.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}*"
            bits.append(f"{sign} {coef}{key}")
        text = " ".join(bits)
        return text[2:] if text.startswith("+ ") else text


# ---------------------------------------------------------------------------
# Sparse integer matrices


class SparseIntMatrix:
    """Immutable-by-convention sparse matrix with exact integer entries."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = dict(entries or {})

    @classmethod
    def from_columns(cls, nrows, columns):
        """Build from a list of columns, each a dict {row_index: value}."""
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    entries[(i, j)] = v
        return cls(nrows, len(columns), entries)

    @classmethod
    def from_rows(cls, rows, ncols):
        entries = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(len(rows), ncols, entries)

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def rows_as_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def cols_as_dicts(self):
        cols = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    @property
    def nnz(self):
        return len(self.entries)

    def to_scipy(self):
        from scipy.sparse import coo_matrix

        if not self.entries:
            return coo_matrix((self.nrows, self.ncols), dtype="int64").tocsr()
        if max(abs(v) for v in self.entries.values()) >= 2**31:
            # differentials carry tiny coefficients; anything larger must not
            # silently wrap in the int64 product
            raise ValueError("matrix entries too large for the int64 fast path")
        rows, cols, data = zip(*((i, j, v) for (i, j), v in self.entries.items()))
        return coo_matrix(
            (data, (rows, cols)), shape=(self.nrows, self.ncols), dtype="int64"
        ).tocsr()

    def __repr__(self):
        return f"SparseIntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# Smith normal form and ranks


def _nearest_quotient(a, v):
    # Quotient q with |a - q v| <= |v| / 2: keeps entries small during SNF.
    q, r = divmod(a, v)
    if 2 * abs(r) > abs(v):
        q += 1
    return q


def smith_normal_form(matrix):
    """Invariant factors and rank of an integer matrix.

    Accepts a SparseIntMatrix or a list of dense rows.  Returns
    ``(factors, rank)`` where factors is the full divisibility chain
    d1 | d2 | ... | d_rank (units included, all positive).

    Pivots are chosen by minimal absolute value, then minimal fill, so the
    reduction is deterministic and coefficient growth stays tame.
    """
    if isinstance(matrix, SparseIntMatrix):
        rows = {i: {} for i in range(matrix.nrows)}
        for (i, j), v in matrix.entries.items():
            rows[i][j] = v
    else:
        rows = {
            i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(matrix)
        }
    rows = {i: r for i, r in rows.items() if r}
    col_index = {}
    for i, r in rows.items():
        for j in r:
            col_index.setdefault(j, set()).add(i)

    def drop_entry(i, j):
        del rows[i][j]
        col_index[j].discard(i)
        if not col_index[j]:
            del col_index[j]
        if not rows[i]:
            del rows[i]

    def set_entry(i, j, v):
        if v:
            if j not in rows.setdefault(i, {}):
                col_index.setdefault(j, set()).add(i)
            rows[i][j] = v
        elif i in rows and j in rows[i]:
            drop_entry(i, j)

    diagonal = []
    while rows:
        # Deterministic pivot: minimal |value|, then minimal fill, then
        # position; a unit pivot with no fill ends the scan early.
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                key = (abs(v), (len(r) - 1) * (len(col_index[j]) - 1), i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
            if best[0][0] == 1 and best[0][1] == 0:
                break
        _, pi, pj = best
        # Clear the pivot column, then the pivot row; a surviving remainder
        # hands the pivot to a strictly smaller entry, so this terminates.
        while True:
            pv = rows[pi][pj]
            others_col = [i for i in col_index[pj] if i != pi]
            if others_col:
                for i in others_col:
                    a = rows[i][pj]
                    q = _nearest_quotient(a, pv)
                    if q:
                        for j, v in list(rows[pi].items()):
                            set_entry(i, j, rows.get(i, {}).get(j, 0) - q * v)
                leftovers = [i for i in col_index.get(pj, set()) if i != pi]
                if leftovers:
                    pi = min(leftovers, key=lambda i: (abs(rows[i][pj]), i))
                continue
            others_row = [j for j in rows[pi] if j != pj]
            if others_row:
                # The pivot column is zero outside the pivot row now, so the
                # column operation col_j -= q * col_pj only touches row pi.
                for j in others_row:
                    a = rows[pi][j]
                    q = _nearest_quotient(a, pv)
                    set_entry(pi, j, a - q * pv)
                leftovers = [j for j in rows.get(pi, {}) if j != pj]
                if leftovers:
                    pj = min(leftovers, key=lambda j: (abs(rows[pi][j]), j))
                continue
            break
        diagonal.append(abs(rows[pi][pj]))
        drop_entry(pi, pj)

    # Repair the divisibility chain: diag(a, b) ~ diag(gcd, lcm).
    factors = [d for d in diagonal if d]
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a:
                    g = gcd(a, b)
                    factors[i], factors[j] = g, a * b // g
                    changed = True
    factors.sort()
    return factors, len(factors)


def rank_mod_p(matrix, p):
    """Rank over F_p by sparse Gaussian elimination."""
    if isinstance(matrix, SparseIntMatrix):
        rows = [
            {j: v % p for j, v in row.items() if v % p}
            for row in matrix.rows_as_dicts()
        ]
    else:
        rows = [
            {j: v % p for j, v in enumerate(row) if v % p} for row in matrix
        ]
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        # Shortest row first limits fill.
        rows.sort(key=len)
        pivot_row = rows.pop(0)
        rank += 1
        j = min(pivot_row)
        inv = pow(pivot_row[j], -1, p)
        pivot_row = {jj: (v * inv) % p for jj, v in pivot_row.items()}
        reduced = []
        for r in rows:
            c = r.get(j)
            if c:
                r = {
                    jj: w
                    for jj in set(r) | set(pivot_row)
                    if (w := (r.get(jj, 0) - c * pivot_row.get(jj, 0)) % p)
                }
            if r:
                reduced.append(r)
        rows = reduced
    return rank


def rank_over_q(matrix):
    """Rank over Q by fraction-free sparse elimination.

    Rows are cross-multiplied exactly and re-normalized by their gcd; row
    scaling never changes the rank, so the result is exact.
    """
    if isinstance(matrix, SparseIntMatrix):
        rows = [dict(r) for r in matrix.rows_as_dicts()]
    else:
        rows = [{j: v for j, v in enumerate(row) if v} for row in matrix]
    rows = [_gcd_normalized(r) for r in rows if r]
    rank = 0
    while rows:
        pivot_idx = min(
            range(len(rows)),
            key=lambda i: (len(rows[i]), min(abs(v) for v in rows[i].values()), i),
        )
        pivot_row = rows.pop(pivot_idx)
        rank += 1
        j = min(pivot_row, key=lambda jj: (abs(pivot_row[jj]), jj))
        pv = pivot_row[j]
        reduced = []
        for r in rows:
            c = r.get(j)
            if c:
                r = {
                    jj: w
                    for jj in set(r) | set(pivot_row)
                    if jj != j and (w := pv * r.get(jj, 0) - c * pivot_row.get(jj, 0))
                }
                r = _gcd_normalized(r)
            if r:
                reduced.append(r)
        rows = reduced
    return rank


def _gcd_normalized(row):
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


# ---------------------------------------------------------------------------
# Complex slices and homology


class ComplexSlice:
    """A finite window of a chain complex.

    bases[n] is the ordered generator list in degree n and diffs[n] the
    matrix of d_n with rows indexed by bases[n-1] and columns by bases[n].
    Degrees absent from ``bases`` are zero modules.
    """

    def __init__(self, bases, diffs, truncated_at=None):
        self.bases = {n: tuple(b) for n, b in bases.items()}
        self.index = {
            n: {g: i for i, g in enumerate(b)} for n, b in self.bases.items()
        }
        self.diffs = dict(diffs)
        self.truncated_at = truncated_at
        for n, mat in self.diffs.items():
            expect_rows = len(self.bases.get(n - 1, ()))
            expect_cols = len(self.bases.get(n, ()))
            if (mat.nrows, mat.ncols) != (expect_rows, expect_cols):
                raise ValueError(
                    f"differential at degree {n} has shape "
                    f"{mat.nrows}x{mat.ncols}, bases demand {expect_rows}x{expect_cols}"
                )

    def degrees(self):
        return sorted(self.bases)

    def differential(self, n):
        if n in self.diffs:
            return self.diffs[n]
        if self.bases.get(n) and self.bases.get(n - 1):
            raise IncompleteSliceError(f"no differential stored at degree {n}")
        return SparseIntMatrix(len(self.bases.get(n - 1, ())), len(self.bases.get(n, ())))


def check_d_squared(sl):
    """Generators whose image under d fails to die under the next d.

    Returns a list of (degree, generator) pairs; empty means every stored
    composite d_{n-1} d_n vanishes identically.
    """
    bad = []
    for n in sl.degrees():
        dn = sl.diffs.get(n)
        dprev = sl.diffs.get(n - 1)
        if dn is None or dprev is None:
            continue
        if dn.ncols == 0 or dprev.nrows == 0 or dn.nnz == 0 or dprev.nnz == 0:
            continue
        product = dprev.to_scipy() @ dn.to_scipy()
        product.eliminate_zeros()
        if product.nnz:
            cols = sorted({int(j) for j in product.tocoo().col})
            bad.extend((n, sl.bases[n][j]) for j in cols)
    return bad


class HomologyEntry:
    __slots__ = ("degree", "free_rank", "torsion")

    def __init__(self, degree, free_rank, torsion=()):
        self.degree = degree
        self.free_rank = free_rank
        self.torsion = tuple(torsion)

    def as_dict(self):
        return {
            "degree": self.degree,
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
        }

    def group_text(self, ring=None):
        symbol = "Z" if ring is None or not ring.is_field else repr(ring)
        parts = []
        if self.free_rank == 1:
            parts.append(symbol)
        elif self.free_rank > 1:
            parts.append(f"{symbol}^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        return (
            isinstance(other, HomologyEntry)
            and (self.degree, self.free_rank, self.torsion)
            == (other.degree, other.free_rank, other.torsion)
        )

    def __repr__(self):
        return f"H_{self.degree} = {self.group_text()}"


def homology_of_slice(sl, degree, ring=ZZ):
    """Homology of the slice in one degree over the requested ring.

    Over Z the result is the free rank together with the invariant factors
    exceeding 1; over a field only the dimension is reported.
    """
    gens = sl.bases.get(degree, ())
    if not gens:
        return HomologyEntry(degree, 0)
    d_in = sl.differential(degree + 1)
    d_out = sl.differential(degree)
    if ring.kind == "Z":
        _, rank_out = smith_normal_form(d_out)
        factors_in, rank_in = smith_normal_form(d_in)
        free = len(gens) - rank_out - rank_in
        torsion = tuple(d for d in factors_in if d > 1)
        return HomologyEntry(degree, free, torsion)
    if ring.kind == "Q":
        rank_out = rank_over_q(d_out)
        rank_in = rank_over_q(d_in)
    else:
        rank_out = rank_mod_p(d_out, ring.p)
        rank_in = rank_mod_p(d_in, ring.p)
    return HomologyEntry(degree, len(gens) - rank_out - rank_in)


class HomologySummary:
    """Per-degree homology of one complex, with serialization helpers."""

    def __init__(self, entries, ring=ZZ, space="", complex_name="", truncated_at=None):
        self.entries = sorted(entries, key=lambda e: e.degree)
        self.ring = ring
        self.space = space
        self.complex_name = complex_name
        self.truncated_at = truncated_at

    def entry(self, degree):
        for e in self.entries:
            if e.degree == degree:
                return e
        return HomologyEntry(degree, 0)

    def to_json_lines(self):
        lines = []
        for e in self.entries:
            record = e.as_dict()
            if self.truncated_at is not None:
                record["truncated_at"] = self.truncated_at
            lines.append(json.dumps(record, sort_keys=True))
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_json_lines(text):
        entries = []
        truncated_at = None
        for line in text.splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            truncated_at = record.get("truncated_at", truncated_at)
            entries.append(
                HomologyEntry(record["degree"], record["free_rank"], record["torsion"])
            )
        return HomologySummary(entries, truncated_at=truncated_at)

    def to_table(self):
        head = f"homology of {self.complex_name}({self.space}) over {self.ring}"
        lines = [head]
        if self.truncated_at is not None:
            lines.append(f"truncated at word length {self.truncated_at}")
        width = max(len(str(e.degree)) for e in self.entries) if self.entries else 1
        for e in self.entries:
            lines.append(f"  H_{e.degree:<{width}}  {e.group_text(self.ring)}")
        return "\n".join(lines) + "\n"
