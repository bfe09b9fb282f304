"""Oriented rewrite rules, matching, and the identity verifier.

A rule's pattern is a single term.  Matching a pattern against a host term
unifies the pattern's non-constant factors with a contiguous run of the
host's non-constant factors (operator application order is significant) and
the pattern's constant factors with any of the host's constant factors
(metric spinors commute with everything).  Pattern labels are match
variables; a pattern dummy must map onto a host dummy contracted entirely
inside the matched region.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import IdentityError, WeightError
from .canon import canonicalize, light_fold
from .expr import Expr, Factor, Idx, IndexKind, Term
from .kernels import KernelTable
from .weights import expr_weight, free_signature


@dataclass(frozen=True)
class RewriteRule:
    name: str
    pattern: Term
    replacement: Expr
    side_conditions: tuple[str, ...] = ()

    def validate(self, table: KernelTable) -> None:
        pattern_expr = Expr((self.pattern,))
        pat_free = free_signature(pattern_expr)
        if not self.replacement.is_zero:
            if free_signature(self.replacement) != pat_free:
                raise IdentityError(
                    f"rule {self.name!r}: pattern and replacement free indices differ"
                )
            if expr_weight(pattern_expr, table) != expr_weight(self.replacement, table):
                raise WeightError(
                    f"rule {self.name!r}: pattern and replacement weights differ"
                )


@dataclass
class Match:
    word_slice: tuple[int, int]          # positions into the host word list
    const_used: tuple[int, ...]          # positions into the host constant list
    mapping: dict[str, str]
    sign: int = 1


def _split(term: Term, table: KernelTable) -> tuple[list[int], list[int]]:
    word, consts = [], []
    for pos, factor in enumerate(term.factors):
        kernel = table.get(factor.kernel)
        if kernel is not None and kernel.constant:
            consts.append(pos)
        else:
            word.append(pos)
    return word, consts


import itertools as _itertools


def _permutation_sign(perm: tuple[int, ...]) -> int:
    sign, seen = 1, [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _pattern_arrangements(factor: Factor, table: KernelTable):
    """All index arrangements of a pattern factor allowed by the kernel's
    declared symmetries, with the associated sign."""
    kernel = table.get(factor.kernel)
    arrangements = [(factor.indices, 1)]
    if kernel is None:
        return arrangements
    for group, antisym in [(g, False) for g in kernel.sym_groups] + [
        (g, True) for g in kernel.antisym_groups
    ]:
        new = []
        for indices, sign in arrangements:
            for perm in _itertools.permutations(range(len(group))):
                out = list(indices)
                for slot, src in zip(group, perm):
                    out[slot] = indices[group[src]]
                s = _permutation_sign(perm) if antisym else 1
                new.append((tuple(out), sign * s))
        arrangements = new
    # deterministic, unique
    seen = set()
    unique = []
    for indices, sign in arrangements:
        key = tuple((i.name, i.up) for i in indices)
        if key not in seen:
            seen.add(key)
            unique.append((indices, sign))
    return unique


def _unify_options(pat: Factor, host: Factor, mapping: dict[str, str],
                   table: KernelTable):
    """Yield (mapping, sign) for every way the pattern factor unifies with the
    host factor modulo the kernel's declared symmetries."""
    if pat.kernel != host.kernel or len(pat.indices) != len(host.indices):
        return
    for indices, sign in _pattern_arrangements(pat, table):
        new_map = dict(mapping)
        ok = True
        for p, h in zip(indices, host.indices):
            if p.up != h.up or p.kind is not h.kind:
                ok = False
                break
            bound = new_map.get(p.name)
            if bound is None:
                new_map[p.name] = h.name
            elif bound != h.name:
                ok = False
                break
        if ok:
            yield new_map, sign


def _groups_on_factors(term: Term, factor_set: set[int]):
    inside, outside = [], []
    for mode, positions in term.groups:
        touched = {f for f, _ in positions}
        if touched <= factor_set:
            inside.append((mode, positions))
        elif touched & factor_set:
            return None
        else:
            outside.append((mode, positions))
    return inside, outside


def match_term(term: Term, rule: RewriteRule, table: KernelTable) -> Match | None:
    host_word, host_consts = _split(term, table)
    pat_word, pat_consts = _split(rule.pattern, table)
    census = term.index_census()

    pw = len(pat_word)
    for start in range(len(host_word) - pw + 1):

        def unify_word(k: int, mapping: dict[str, str], sign: int):
            if k == pw:
                yield mapping, sign
                return
            pat_f = rule.pattern.factors[pat_word[k]]
            host_f = term.factors[host_word[start + k]]
            for new_map, s in _unify_options(pat_f, host_f, mapping, table):
                yield from unify_word(k + 1, new_map, sign * s)

        def unify_consts(k: int, mapping: dict[str, str], used: tuple[int, ...], sign: int):
            if k == len(pat_consts):
                yield mapping, used, sign
                return
            pat_f = rule.pattern.factors[pat_consts[k]]
            for pos in host_consts:
                if pos in used:
                    continue
                for new_map, s in _unify_options(pat_f, term.factors[pos], mapping, table):
                    yield from unify_consts(k + 1, new_map, used + (pos,), sign * s)

        for word_map, word_sign in unify_word(0, {}, 1):
            for mapping, used, sign in unify_consts(0, word_map, (), word_sign):
                matched_factors = {host_word[start + k] for k in range(pw)} | set(used)
                span = _groups_on_factors(term, matched_factors)
                if span is None:
                    continue
                inside, _ = span
                if not _groups_match(rule.pattern, term, inside, mapping,
                                     matched_factors, host_word, start, pat_word,
                                     used, pat_consts):
                    continue
                pat_census = rule.pattern.index_census()
                sound = True
                for name, occs in pat_census.items():
                    if len(occs) != 2:
                        continue
                    image = mapping[name]
                    host_occs = census.get(image, [])
                    if len(host_occs) != 2 or any(
                        pos[0] not in matched_factors for pos, _ in host_occs
                    ):
                        sound = False
                        break
                if not sound:
                    continue
                return Match((start, start + pw), tuple(used), mapping, sign)
    return None


def _groups_match(pattern, term, host_inside, mapping, matched_factors,
                  host_word, start, pat_word, used, pat_consts):
    """Host groups inside the match must be the images of pattern groups."""
    factor_map = {}
    for k, pw_pos in enumerate(pat_word):
        factor_map[pw_pos] = host_word[start + k]
    for k, pc_pos in enumerate(pat_consts):
        factor_map[pc_pos] = used[k]
    pattern_groups = {
        (mode, tuple(sorted((factor_map[f], s) for f, s in positions)))
        for mode, positions in pattern.groups
    }
    host_groups = {
        (mode, tuple(sorted(positions))) for mode, positions in host_inside
    }
    return pattern_groups == host_groups


_FRESH = [0]


def _freshen(name: str, kind: IndexKind) -> str:
    _FRESH[0] += 1
    new = f"~r{_FRESH[0]}"
    return new + "'" if kind is IndexKind.PRIMED else new


def apply_match(term: Term, rule: RewriteRule, match: Match, table: KernelTable) -> list[Term]:
    host_word, host_consts = _split(term, table)
    i, j = match.word_slice
    seg_positions = [host_word[k] for k in range(i, j)]
    removed = set(seg_positions) | set(match.const_used)
    anchor = seg_positions[0] if seg_positions else (
        host_word[i] if i < len(host_word) else len(term.factors)
    )

    prefix = [p for p in range(len(term.factors)) if p < anchor and p not in removed]
    suffix = [p for p in range(len(term.factors)) if p >= anchor and p not in removed]

    mapping = dict(match.mapping)
    out: list[Term] = []
    for repl in rule.replacement.terms:
        local = dict(mapping)
        new_factors: list[Factor] = []
        for factor in repl.factors:
            indices = []
            for idx in factor.indices:
                name = local.get(idx.name)
                if name is None:
                    name = _freshen(idx.name, idx.kind)
                    local[idx.name] = name
                indices.append(Idx(name, idx.kind, idx.up))
            new_factors.append(Factor(factor.kernel, tuple(indices)))
        factors = (
            [term.factors[p] for p in prefix]
            + new_factors
            + [term.factors[p] for p in suffix]
        )
        offset = len(prefix)
        position_of = {p: n for n, p in enumerate(prefix)}
        position_of.update({p: offset + len(new_factors) + n for n, p in enumerate(suffix)})
        groups = []
        for mode, positions in term.groups:
            if all(f in position_of for f, _ in positions):
                groups.append((mode, tuple((position_of[f], s) for f, s in positions)))
        for mode, positions in repl.groups:
            groups.append((mode, tuple((offset + f, s) for f, s in positions)))
        coeff = term.coeff * repl.coeff * match.sign / rule.pattern.coeff
        out.append(Term(coeff, tuple(factors), tuple(groups)))
    return out


@dataclass
class TraceStep:
    step: int
    rule: str
    term_index: int
    terms_after: int

    def render(self) -> str:
        return f"step {self.step}: {self.rule} on term {self.term_index} -> {self.terms_after} terms"


@dataclass
class VerificationReport:
    name: str
    success: bool
    trace: list[TraceStep] = field(default_factory=list)
    residual: Expr = Expr.zero()
    error: str | None = None

    def render(self) -> str:
        lines = [f"identity: {self.name}", f"status: {'ok' if self.success else 'FAILED'}"]
        if self.error:
            lines.append(f"error: {self.error}")
        for step in self.trace:
            lines.append(step.render())
        if not self.success and not self.residual.is_zero:
            lines.append(f"residual: {self.residual!r}")
        return "\n".join(lines) + "\n"


def apply_rules(expr: Expr, rules: list[RewriteRule], table: KernelTable,
                max_steps: int = 200) -> tuple[Expr, list[TraceStep]]:
    trace: list[TraceStep] = []
    expr = light_fold(expr, table)
    seen: set[tuple] = set()
    for step in range(1, max_steps + 1):
        hit = None
        for rule in rules:
            for ti, term in enumerate(expr.terms):
                match = match_term(term, rule, table)
                if match is not None:
                    hit = (rule, ti, term, match)
                    break
            if hit:
                break
        if hit is None:
            break
        rule, ti, term, match = hit
        new_terms = apply_match(term, rule, match, table)
        expr = Expr(expr.terms[:ti] + tuple(new_terms) + expr.terms[ti + 1 :])
        expr = light_fold(expr, table)
        trace.append(TraceStep(step, rule.name, ti, len(expr.terms)))
        key = tuple(repr(t) for t in expr.terms)
        if key in seen:
            break
        seen.add(key)
    return expr, trace


def verify_identity(lhs: Expr, rhs: Expr, rules: list[RewriteRule],
                    table: KernelTable, name: str = "identity") -> VerificationReport:
    """Success iff canonicalize(rewrite(lhs - rhs)) vanishes."""
    if not lhs.is_zero and not rhs.is_zero:
        if free_signature(lhs) != free_signature(rhs):
            raise IdentityError(f"{name}: free indices differ between sides")
        if expr_weight(lhs, table) != expr_weight(rhs, table):
            raise WeightError(f"{name}: weights differ between sides")
    diff = lhs - rhs
    rewritten, trace = apply_rules(diff, rules, table)
    residual = canonicalize(rewritten, table)
    return VerificationReport(name, residual.is_zero, trace, residual)
