"""Cross-validation suite: every identity the chain models must satisfy.

The checks run in a fixed order and the rendered report is byte-stable, so
two runs on the same inputs diff clean:

1. simplicial identities of the presentation;
2. d.d = 0 for every complex the space supports;
3. term-by-term agreement of the face-operator differential with the
   coalgebra-formula differential on every free-loop generator;
4. the chain-map identity for phi (1-reduced spaces), under the chi sign
   reading selected by a sweep on a discriminating fixture;
5. nilpotency of the local contraction on sampled kernel elements;
6. universal-coefficients consistency of Betti numbers over Q, F2, F3.
"""

from __future__ import annotations

import json
import random

from . import cobar as cobar_mod
from . import loopcomplex as loop_mod
from .homalg import ZZ, Chain, check_d_squared, homology_of_slice, parse_ring
from .loopcomplex import CHI_VARIANTS
from .simplicial import SimplicialError, adjoin_inverses, builtin_space, chains_slice, validate

COMPLEX_NAMES = (
    "chains",
    "cobar",
    "hat-cobar",
    "cohoch",
    "hat-cohoch",
    "hochschild-of-cobar",
)


def complex_requires_one_reduced(name):
    return name in ("cobar", "cohoch")


def build_complex_slice(X, complex_name, max_degree, max_word_length=None):
    """Assemble the requested complex of a presentation through max_degree.

    Hat complexes of spaces that are not 1-reduced demand a word-length
    cap; the returned slice then carries ``truncated_at``.
    """
    one_reduced = X.is_one_reduced()
    if complex_name == "chains":
        return chains_slice(X, max_degree)
    if complex_name == "cobar":
        return cobar_mod.cobar_slice(X, max_degree)
    if complex_name == "hat-cobar":
        return cobar_mod.cobar_slice(
            adjoin_inverses(X), max_degree, max_word_length=max_word_length
        )
    if complex_name == "cohoch":
        return loop_mod.cohoch_slice(X, max_degree, hat=False)
    if complex_name == "hat-cohoch":
        return loop_mod.cohoch_slice(
            adjoin_inverses(X), max_degree, hat=True, max_word_length=max_word_length
        )
    if complex_name == "hochschild-of-cobar":
        if one_reduced:
            return loop_mod.hochschild_slice(X, max_degree)
        return loop_mod.hochschild_slice(
            adjoin_inverses(X), max_degree, hat=True, word_cap=max_word_length
        )
    raise SimplicialError(
        f"unknown complex {complex_name!r}; choices: {', '.join(COMPLEX_NAMES)}"
    )


def supported_complexes(X):
    one_reduced = X.is_one_reduced()
    return [
        name
        for name in COMPLEX_NAMES
        if one_reduced or not complex_requires_one_reduced(name)
    ]


# ---------------------------------------------------------------------------
# The chi sign sweep


_chi_selection_cache = {}


def select_chi_variant(max_degree=5):
    """Pick the chi exponent reading by demanding that phi be a chain map.

    The sweep runs over the Hochschild generators of a 1-reduced fixture
    whose letters mix even and odd degrees (a collapsed 3-simplex), which
    is what separates the two adjacent-index readings; single-generator
    spheres cannot tell them apart.  Returns (variant, details).
    """
    if max_degree in _chi_selection_cache:
        return _chi_selection_cache[max_degree]
    fixture = builtin_space("collapsed-delta3")
    mismatches = {
        variant: len(loop_mod.chi_chain_map_mismatches(fixture, variant, max_degree))
        for variant in CHI_VARIANTS
    }
    passing = [v for v in CHI_VARIANTS if mismatches[v] == 0]
    winner = passing[0] if passing else min(CHI_VARIANTS, key=lambda v: mismatches[v])
    detail = (
        f"sweep on {fixture.name} through degree {max_degree}: "
        + ", ".join(f"{v}: {mismatches[v]} mismatches" for v in CHI_VARIANTS)
    )
    result = (winner, detail, mismatches)
    _chi_selection_cache[max_degree] = result
    return result


# ---------------------------------------------------------------------------
# Report plumbing


class CheckResult:
    __slots__ = ("name", "status", "detail")

    def __init__(self, name, status, detail=""):
        self.name = name
        self.status = status  # "pass" | "fail" | "skip"
        self.detail = detail

    def as_dict(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


class VerifyReport:
    def __init__(self, space_name, max_degree, max_word_length, results, chi_variant):
        self.space_name = space_name
        self.max_degree = max_degree
        self.max_word_length = max_word_length
        self.results = results
        self.chi_variant = chi_variant

    @property
    def all_passed(self):
        return all(r.status != "fail" for r in self.results)

    def to_text(self):
        cap = "-" if self.max_word_length is None else str(self.max_word_length)
        lines = [
            f"verify {self.space_name} (max degree {self.max_degree}, word cap {cap})",
            f"chi exponent reading: {self.chi_variant}",
        ]
        for r in self.results:
            mark = {"pass": "PASS", "fail": "FAIL", "skip": "skip"}[r.status]
            line = f"  {mark}  {r.name}"
            if r.detail:
                line += f"  [{r.detail}]"
            lines.append(line)
        lines.append("result: " + ("OK" if self.all_passed else "FAILED"))
        return "\n".join(lines) + "\n"

    def to_json(self):
        return json.dumps(
            {
                "space": self.space_name,
                "max_degree": self.max_degree,
                "max_word_length": self.max_word_length,
                "chi_variant": self.chi_variant,
                "checks": [r.as_dict() for r in self.results],
                "ok": self.all_passed,
            },
            sort_keys=True,
            indent=2,
        ) + "\n"


# ---------------------------------------------------------------------------
# The individual checks


def _check_simplicial(X):
    violations = validate(X)
    if violations:
        return CheckResult("simplicial-identities", "fail", violations[0])
    return CheckResult("simplicial-identities", "pass")


def _check_d_squared(X, max_degree, cap):
    results = []
    slices = {}
    for name in supported_complexes(X):
        try:
            sl = build_complex_slice(X, name, max_degree, max_word_length=cap)
        except SimplicialError as exc:
            results.append(CheckResult(f"d-squared:{name}", "skip", str(exc)))
            continue
        slices[name] = sl
        bad = check_d_squared(sl)
        if bad:
            degree, gen = bad[0]
            results.append(
                CheckResult(
                    f"d-squared:{name}",
                    "fail",
                    f"{len(bad)} generators, first at degree {degree}: {gen}",
                )
            )
        else:
            sizes = sum(len(b) for b in sl.bases.values())
            results.append(
                CheckResult(f"d-squared:{name}", "pass", f"{sizes} generators")
            )
    return results, slices


def _check_differential_agreement(X, slices):
    sl = slices.get("hat-cohoch")
    if sl is None:
        return CheckResult("face-vs-formula-differential", "skip", "no hat complex")
    space = adjoin_inverses(X)
    mismatched = 0
    first = None
    total = 0
    for n in sl.degrees():
        if n == 0:
            continue
        for gen in sl.bases[n]:
            total += 1
            lhs = loop_mod.necklical_differential(space, gen)
            rhs = loop_mod.cohoch_differential(space, gen, hat=True)
            if lhs != rhs:
                mismatched += 1
                if first is None:
                    first = gen
    if mismatched:
        return CheckResult(
            "face-vs-formula-differential",
            "fail",
            f"{mismatched}/{total} generators disagree, first "
            + loop_mod.format_loop_generator(first),
        )
    return CheckResult(
        "face-vs-formula-differential", "pass", f"{total} generators agree"
    )


def _check_phi_chain_map(X, max_degree, chi_variant):
    if not X.is_one_reduced():
        return CheckResult("phi-chain-map", "skip", "skipped: not 1-reduced")
    bad = loop_mod.chi_chain_map_mismatches(X, chi_variant, max_degree)
    if bad:
        return CheckResult(
            "phi-chain-map", "fail", f"{len(bad)} generators, first {bad[0]!r}"
        )
    return CheckResult("phi-chain-map", "pass", f"variant {chi_variant}")


def _check_contraction(X, max_degree, samples=50, max_power=6, seed=2026):
    if not X.is_one_reduced():
        return CheckResult("contraction-nilpotency", "skip", "skipped: not 1-reduced")
    algebra = cobar_mod.CobarAlgebra(X)
    degree_cap = min(max_degree, 5)
    kernel = []
    for n in range(degree_cap + 1):
        for b, u in loop_mod.hochschild_basis(algebra, n):
            if u == () and loop_mod.in_rho_kernel(b):
                kernel.append(b)
    if not kernel:
        return CheckResult("contraction-nilpotency", "pass", "kernel empty")
    rng = random.Random(seed)

    def homotopy_minus_id(chain):
        out = Chain(ZZ)
        out.add_chain(
            loop_mod.contraction_s_chain(algebra, _bar_d(algebra, chain)), 1
        )
        out.add_chain(_bar_d(algebra, loop_mod.contraction_s_chain(algebra, chain)), 1)
        out.add_chain(chain, -1)
        return out

    checked = 0
    while checked < samples:
        sample = Chain(ZZ)
        for _ in range(rng.randint(1, 3)):
            sample.add(rng.choice(kernel), rng.randint(-3, 3))
        if sample.is_zero:
            continue
        current = sample
        for _ in range(max_power):
            current = homotopy_minus_id(current)
            if current.is_zero:
                break
        if not current.is_zero:
            return CheckResult(
                "contraction-nilpotency",
                "fail",
                f"sample did not vanish within {max_power} iterations",
            )
        checked += 1
    return CheckResult(
        "contraction-nilpotency", "pass", f"{checked} samples, power <= {max_power}"
    )


def _bar_d(algebra, chain):
    out = Chain(ZZ)
    for key, c in chain.terms.items():
        out.add_chain(cobar_mod.bar_differential(algebra, key), c)
    return out


def _check_universal_coefficients(X, slices, max_degree):
    results = []
    fields = [parse_ring("Q"), parse_ring("F2"), parse_ring("F3")]
    for name in sorted(slices):
        sl = slices[name]
        top = max_degree - 1
        ok = True
        detail = ""
        for n in range(top + 1):
            dims = [homology_of_slice(sl, n, ring).free_rank for ring in fields]
            if not (dims[0] <= dims[1] and dims[0] <= dims[2]):
                ok = False
                detail = f"degree {n}: Q {dims[0]}, F2 {dims[1]}, F3 {dims[2]}"
                break
        results.append(
            CheckResult(
                f"universal-coefficients:{name}",
                "pass" if ok else "fail",
                detail or f"degrees 0..{top}",
            )
        )
    return results


# ---------------------------------------------------------------------------


def run_verify(space, max_degree, max_word_length=None):
    """Run the whole suite on a presentation or built-in name.

    When the presentation itself is invalid, the remaining checks are
    skipped rather than run on garbage data; the failure is the report.
    """
    X = builtin_space(space) if isinstance(space, str) else space
    chi_variant, chi_detail, _ = select_chi_variant()
    results = [_check_simplicial(X)]
    if results[0].status == "fail":
        results.append(
            CheckResult("remaining-checks", "skip", "presentation invalid")
        )
        return VerifyReport(X.name, max_degree, max_word_length, results, chi_variant)
    d2_results, slices = _check_d_squared(X, max_degree, max_word_length)
    results.extend(d2_results)
    results.append(_check_differential_agreement(X, slices))
    results.append(CheckResult("chi-exponent-sweep", "pass", chi_detail))
    results.append(_check_phi_chain_map(X, max_degree, chi_variant))
    results.append(_check_contraction(X, max_degree))
    results.extend(_check_universal_coefficients(X, slices, max_degree))
    return VerifyReport(X.name, max_degree, max_word_length, results, chi_variant)
