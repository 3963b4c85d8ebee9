"""Finite simplicial set presentations and their normalized chain coalgebra.

A presentation stores the nondegenerate simplices per dimension plus a face
table whose values are formal simplices: a strictly decreasing degeneracy
word over a nondegenerate base (the Eilenberg-Zilber normal form, which is
unique).  Degenerate simplices are never stored; the simplicial identities
rewrite every face evaluation back to normal form.

Also here: the boundary and Alexander-Whitney structure of normalized
chains, and the extension Z(X) that formally inverts 1-simplices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .homalg import Chain, ComplexSlice, SparseIntMatrix, ZZ


class SimplicialError(ValueError):
    """Malformed simplicial input: bad index, unknown simplex, bad word."""


@dataclass(frozen=True, order=True)
class FormalSimplex:
    """A possibly degenerate simplex s_{j1} s_{j2} ... s_{jk} (base).

    The word is strictly decreasing (j1 > j2 > ... > jk), read as operator
    composition with the rightmost letter applied to the base first.
    """

    degeneracies: tuple[int, ...]
    base: str

    @property
    def is_degenerate(self):
        return bool(self.degeneracies)

    def __str__(self):
        if not self.degeneracies:
            return self.base
        word = "".join(f"s{j}" for j in self.degeneracies)
        return f"{word}({self.base})"


def nondeg(simplex_id):
    return FormalSimplex((), simplex_id)


def canonical_degeneracy(word, base, base_dim):
    """Rewrite an arbitrary degeneracy word to strictly decreasing form.

    Uses s_i s_j = s_{j+1} s_i for i <= j; the result is the unique normal
    form.  Letters are validated against the dimension at their point of
    application (rightmost first).
    """
    canonical = []
    dim = base_dim
    for j in reversed(list(word)):
        if not 0 <= j <= dim:
            raise SimplicialError(
                f"degeneracy index {j} out of range 0..{dim} in word {list(word)}"
            )
        # Insert s_j to the left of the decreasing word `canonical`.
        k = 0
        while k < len(canonical) and j <= canonical[k]:
            canonical[k] += 1
            k += 1
        canonical.insert(k, j)
        dim += 1
    return FormalSimplex(tuple(canonical), base)


class SimplicialSetPresentation:
    """A finite simplicial set given by nondegenerate generators.

    simplices maps each dimension to an ordered list of simplex ids, and
    faces maps (id, i) to the FormalSimplex value of the i-th face.
    Instances are treated as immutable after construction; all derived data
    is cached on the object.
    """

    def __init__(self, name, basepoint, simplices, faces):
        self.name = name
        self.basepoint = basepoint
        self.simplices = {
            int(d): tuple(ids) for d, ids in simplices.items() if len(ids) > 0
        }
        self.faces = dict(faces)
        self._dims = {}
        for d, ids in self.simplices.items():
            for s in ids:
                if s in self._dims:
                    raise SimplicialError(f"duplicate simplex id {s!r}")
                self._dims[s] = d
        self._endpoint_cache = {}
        self._face_cache = {}

    # -- basic queries ----------------------------------------------------

    def dim(self, simplex_id):
        try:
            return self._dims[simplex_id]
        except KeyError:
            raise SimplicialError(f"unknown simplex id {simplex_id!r}") from None

    def total_dim(self, fs):
        return self.dim(fs.base) + len(fs.degeneracies)

    @property
    def top_dim(self):
        return max(self.simplices, default=0)

    def ids(self, d=None):
        if d is None:
            return [s for dd in sorted(self.simplices) for s in self.simplices[dd]]
        return list(self.simplices.get(d, ()))

    def is_one_reduced(self):
        return len(self.simplices.get(0, ())) == 1 and not self.simplices.get(1, ())

    def __repr__(self):
        counts = {d: len(ids) for d, ids in sorted(self.simplices.items())}
        return f"SimplicialSetPresentation({self.name!r}, {counts})"


# ---------------------------------------------------------------------------
# The degeneracy calculus


def face(X, fs, i):
    """The i-th face of a formal simplex, in canonical form.

    Pushes the face through the degeneracy word with the identities
    d_i s_j = s_{j-1} d_i (i < j), = id (i = j, j+1), = s_j d_{i-1} (i > j+1),
    then uses the stored face table on the nondegenerate base.
    """
    n = X.total_dim(fs)
    if n == 0:
        raise SimplicialError(f"a vertex {fs.base!r} has no faces")
    if not 0 <= i <= n:
        raise SimplicialError(f"face index {i} out of range 0..{n} for {fs}")
    key = (fs, i)
    cached = X._face_cache.get(key)
    if cached is not None:
        return cached
    prefix = []
    word = list(fs.degeneracies)
    k = i
    result = None
    while word:
        j = word.pop(0)
        if k < j:
            prefix.append(j - 1)
        elif k in (j, j + 1):
            result = canonical_degeneracy(prefix + word, fs.base, X.dim(fs.base))
            break
        else:
            prefix.append(j)
            k -= 1
    if result is None:
        stored = X.faces.get((fs.base, k))
        if stored is None:
            raise SimplicialError(f"missing face table entry for ({fs.base!r}, {k})")
        result = canonical_degeneracy(
            prefix + list(stored.degeneracies), stored.base, X.dim(stored.base)
        )
    X._face_cache[key] = result
    return result


def endpoints(X, fs):
    """(min, max): first and last vertex of a formal simplex.

    Degeneracies only repeat vertices, so endpoints depend on the base
    alone: min is the iterated last face, max the iterated front face.
    """
    base = fs.base if isinstance(fs, FormalSimplex) else fs
    cached = X._endpoint_cache.get(base)
    if cached is not None:
        return cached
    d = X.dim(base)
    if d == 0:
        result = (base, base)
    else:
        last = face(X, nondeg(base), d)
        first = face(X, nondeg(base), 0)
        result = (endpoints(X, last)[0], endpoints(X, first)[1])
    X._endpoint_cache[base] = result
    return result


def boundary(X, simplex_id, ring=ZZ):
    """Normalized chain boundary: alternating faces, degenerate ones dropped."""
    n = X.dim(simplex_id)
    if n == 0:
        return Chain(ring)
    out = Chain(ring)
    for i in range(n + 1):
        f = face(X, nondeg(simplex_id), i)
        if not f.is_degenerate:
            out.add(f.base, -1 if i % 2 else 1)
    return out


def aw_coproduct(X, simplex_id, reduced=False):
    """Alexander-Whitney coproduct of a nondegenerate simplex.

    Returns the list of (front_j, back_j) pairs, each factor in canonical
    form; pairs with a degenerate factor are zero in normalized chains and
    are omitted.  With reduced=True the two outer terms (a vertex tensor
    the simplex and vice versa) are dropped as well.
    """
    n = X.dim(simplex_id)
    x = nondeg(simplex_id)
    fronts = [None] * (n + 1)
    backs = [None] * (n + 1)
    fronts[n] = x
    for j in range(n, 0, -1):
        fronts[j - 1] = face(X, fronts[j], j)
    backs[0] = x
    for j in range(1, n + 1):
        backs[j] = face(X, backs[j - 1], 0)
    lo, hi = (1, n - 1) if reduced else (0, n)
    pairs = []
    for j in range(lo, hi + 1):
        f, b = fronts[j], backs[j]
        if not f.is_degenerate and not b.is_degenerate:
            pairs.append((f, b))
    return pairs


# ---------------------------------------------------------------------------
# Formal inverses of 1-simplices


OP_SUFFIX = "~"


@dataclass(frozen=True, eq=False)
class OpExtension:
    """Z(X): the presentation X enlarged by a formal inverse per 1-simplex."""

    underlying: SimplicialSetPresentation
    space: SimplicialSetPresentation
    op_pairs: dict

    def op(self, simplex_id):
        return self.op_pairs.get(simplex_id)


def adjoin_inverses(X):
    """Extend X by one fresh 1-simplex x~ per nondegenerate 1-simplex x,
    with endpoints swapped.  No other nondegenerate simplices are added.
    Memoized per presentation, so repeated callers share the letter caches."""
    cached = getattr(X, "_op_extension_cache", None)
    if cached is not None:
        return cached
    edges = list(X.simplices.get(1, ()))
    simplices = {d: list(ids) for d, ids in X.simplices.items()}
    faces = dict(X.faces)
    op_pairs = {}
    for e in edges:
        e_op = e + OP_SUFFIX
        if e_op in X._dims:
            raise SimplicialError(f"id {e_op!r} collides with the op alphabet")
        simplices.setdefault(1, [])
        simplices[1] = list(simplices[1]) + [e_op]
        faces[(e_op, 0)] = X.faces[(e, 1)]
        faces[(e_op, 1)] = X.faces[(e, 0)]
        op_pairs[e] = e_op
        op_pairs[e_op] = e
    Z = SimplicialSetPresentation(f"Z({X.name})", X.basepoint, simplices, faces)
    ext = OpExtension(underlying=X, space=Z, op_pairs=op_pairs)
    X._op_extension_cache = ext
    return ext


# ---------------------------------------------------------------------------
# Validation


def validate(X):
    """All invariant violations of a presentation, as human-readable strings.

    Empty means: faces have the right dimension, degeneracy words are
    canonical and in range, the basepoint is a vertex, and the simplicial
    identities d_i d_j = d_{j-1} d_i (i < j) hold.
    """
    violations = []
    if X.basepoint not in X.simplices.get(0, ()):
        violations.append(f"basepoint {X.basepoint!r} is not a declared 0-simplex")
    for d, ids in sorted(X.simplices.items()):
        if d < 0:
            violations.append(f"negative dimension {d}")
            continue
        for s in ids:
            if d == 0:
                continue
            for i in range(d + 1):
                entry = X.faces.get((s, i))
                if entry is None:
                    violations.append(f"{s}: missing face {i}")
                    continue
                word = entry.degeneracies
                if any(word[k] <= word[k + 1] for k in range(len(word) - 1)):
                    violations.append(
                        f"{s}: face {i} has non-canonical degeneracy word {list(word)}"
                    )
                    continue
                if entry.base not in X._dims:
                    violations.append(f"{s}: face {i} has unknown base {entry.base!r}")
                    continue
                try:
                    total = X.total_dim(entry)
                    canonical_degeneracy(word, entry.base, X.dim(entry.base))
                except SimplicialError as exc:
                    violations.append(f"{s}: face {i}: {exc}")
                    continue
                if total != d - 1:
                    violations.append(
                        f"{s}: face {i} has dimension {total}, expected {d - 1}"
                    )
    if violations:
        return violations
    for d, ids in sorted(X.simplices.items()):
        if d < 2:
            continue
        for s in ids:
            x = nondeg(s)
            for j in range(1, d + 1):
                for i in range(j):
                    left = face(X, face(X, x, j), i)
                    right = face(X, face(X, x, i), j - 1)
                    if left != right:
                        violations.append(
                            f"{s}: identity d_{i} d_{j} = d_{j-1} d_{i} fails "
                            f"({left} != {right})"
                        )
    return violations


# ---------------------------------------------------------------------------
# Normalized chain complex slice


def chains_slice(X, max_degree):
    """The normalized chain complex of X through the given degree."""
    bases = {}
    for d in range(max_degree + 1):
        ids = sorted(X.simplices.get(d, ()))
        if ids:
            bases[d] = ids
    diffs = {}
    for d in range(1, max_degree + 1):
        if d not in bases:
            continue
        rows = bases.get(d - 1, ())
        row_index = {g: i for i, g in enumerate(rows)}
        columns = []
        for s in bases[d]:
            col = {}
            for key, c in boundary(X, s).terms.items():
                col[row_index[key]] = c
            columns.append(col)
        diffs[d] = SparseIntMatrix.from_columns(len(rows), columns)
    return ComplexSlice(bases, diffs)


# ---------------------------------------------------------------------------
# Built-in spaces


def _simple_faces(entries):
    return {
        (s, i): FormalSimplex(tuple(word), base)
        for (s, i), (word, base) in entries.items()
    }


def _point():
    return SimplicialSetPresentation("point", "v", {0: ["v"]}, {})


def _circle():
    faces = _simple_faces({("t", 0): ((), "v"), ("t", 1): ((), "v")})
    return SimplicialSetPresentation("circle", "v", {0: ["v"], 1: ["t"]}, faces)


def _sphere(n):
    # One vertex, one n-simplex, every face the unique degenerate (n-1)-simplex.
    word = tuple(range(n - 2, -1, -1))
    faces = {("s", i): FormalSimplex(word, "v") for i in range(n + 1)}
    return SimplicialSetPresentation(f"sphere{n}", "v", {0: ["v"], n: ["s"]}, faces)


def _torus():
    # One vertex, edges a, b, c and two triangles glued along the diagonal c.
    faces = _simple_faces(
        {
            ("a", 0): ((), "v"),
            ("a", 1): ((), "v"),
            ("b", 0): ((), "v"),
            ("b", 1): ((), "v"),
            ("c", 0): ((), "v"),
            ("c", 1): ((), "v"),
            ("t1", 0): ((), "b"),
            ("t1", 1): ((), "c"),
            ("t1", 2): ((), "a"),
            ("t2", 0): ((), "a"),
            ("t2", 1): ((), "c"),
            ("t2", 2): ((), "b"),
        }
    )
    return SimplicialSetPresentation(
        "torus", "v", {0: ["v"], 1: ["a", "b", "c"], 2: ["t1", "t2"]}, faces
    )


def _boundary_delta3():
    verts = ["0", "1", "2", "3"]
    edges = ["01", "02", "03", "12", "13", "23"]
    tris = ["012", "013", "023", "123"]
    faces = {}
    for e in edges:
        faces[(e, 0)] = nondeg(e[1])
        faces[(e, 1)] = nondeg(e[0])
    for t in tris:
        for i in range(3):
            faces[(t, i)] = nondeg(t[:i] + t[i + 1 :])
    return SimplicialSetPresentation(
        "boundary-delta3", "0", {0: verts, 1: edges, 2: tris}, faces
    )


def _collapsed_delta3():
    # Delta^3 with its 1-skeleton collapsed: one vertex, four 2-simplices,
    # one 3-simplex with all faces nondegenerate.  The smallest 1-reduced
    # space whose chain coalgebra mixes even and odd positive degrees.
    faces = {}
    for q in ("q0", "q1", "q2", "q3"):
        for i in range(3):
            faces[(q, i)] = FormalSimplex((0,), "v")
    for i in range(4):
        faces[("w", i)] = nondeg(f"q{i}")
    return SimplicialSetPresentation(
        "collapsed-delta3", "v", {0: ["v"], 2: ["q0", "q1", "q2", "q3"], 3: ["w"]}, faces
    )


BUILTIN_NAMES = (
    "point",
    "circle",
    "sphere2",
    "sphere3",
    "torus",
    "boundary-delta3",
    "collapsed-delta3",
)


def builtin_space(name):
    makers = {
        "point": _point,
        "circle": _circle,
        "sphere2": lambda: _sphere(2),
        "sphere3": lambda: _sphere(3),
        "torus": _torus,
        "boundary-delta3": _boundary_delta3,
        "collapsed-delta3": _collapsed_delta3,
    }
    if name not in makers:
        raise SimplicialError(
            f"unknown built-in {name!r}; choices: {', '.join(BUILTIN_NAMES)}"
        )
    return makers[name]()


# ---------------------------------------------------------------------------
# JSON input


def presentation_from_json(text, source="<json>"):
    """Parse the JSON simplicial-set schema.

    Top level: name, basepoint, simplices ({dimension: [ids]}), faces
    ({id: [face records 0..n]}) with each record {"deg": [j1 > j2 > ...],
    "base": id}.  Non-canonical degeneracy words are rejected by name.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SimplicialError(f"{source}: not valid JSON: {exc}") from None
    for k in ("name", "basepoint", "simplices", "faces"):
        if k not in data:
            raise SimplicialError(f"{source}: missing top-level field {k!r}")
    simplices = {}
    for dim_text, ids in data["simplices"].items():
        try:
            d = int(dim_text)
        except ValueError:
            raise SimplicialError(
                f"{source}: simplices key {dim_text!r} is not a dimension"
            ) from None
        if not isinstance(ids, list) or not all(isinstance(s, str) for s in ids):
            raise SimplicialError(
                f"{source}: simplices[{dim_text!r}] must be a list of id strings"
            )
        simplices[d] = ids
    dims = {}
    for d, ids in simplices.items():
        for s in ids:
            dims[s] = d
    faces = {}
    for s, records in data["faces"].items():
        if s not in dims:
            raise SimplicialError(f"{source}: faces lists unknown simplex {s!r}")
        d = dims[s]
        if not isinstance(records, list) or len(records) != d + 1:
            raise SimplicialError(
                f"{source}: {s!r} needs exactly {d + 1} face records, "
                f"got {len(records) if isinstance(records, list) else records!r}"
            )
        for i, rec in enumerate(records):
            if not isinstance(rec, dict) or "base" not in rec:
                raise SimplicialError(f"{source}: {s!r} face {i}: bad record {rec!r}")
            word = tuple(rec.get("deg", ()))
            if any(word[k] <= word[k + 1] for k in range(len(word) - 1)):
                raise SimplicialError(
                    f"{source}: {s!r} face {i}: degeneracy word {list(word)} is not "
                    f"strictly decreasing"
                )
            faces[(s, i)] = FormalSimplex(word, rec["base"])
    return SimplicialSetPresentation(data["name"], data["basepoint"], simplices, faces)
