"""Corpus assembly and mechanical verification of the classification claims.

Each verify target walks a corpus (catalog defaults plus any ingested
directory), computes the invariants it needs, and emits deterministic
PASS/FAIL/SKIP blocks.  Exit codes: 0 all pass, 1 any fail, 2 skips only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from .autorbits import (
    automorphism_generators,
    characteristic_subgroups,
    is_at_group,
    orbit_partition,
)
from .catalog import GroupDescriptor, build, descriptor, extension_family
from .errors import CapacityError, GroupFileError
from .groupfile import load_group_file
from .perm import PermGroup, enumerate_elements, resolve_element_cap
from .report import VerdictReport, format_bool, format_set
from .structure import (
    direct_power,
    is_abelian,
    is_elementary_abelian,
    is_simple,
    is_solvable,
    find_isomorphism,
    multiplicative_order,
    p_part,
    prime_factors,
    quotient,
    spectrum,
)

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

VERIFY_TARGETS = (
    "theorem-a",
    "theorem-b",
    "stroppel-ineq",
    "lemma-2-3",
    "lemma-2-4",
    "prop-2-7",
    "lm-three",
    "at-consistency",
)

# catalog groups + extension families + the product instances the lemmas name
DEFAULT_CORPUS = (
    "C1", "E2^1", "E3^2", "E5^1", "E2^4",
    "C6", "C7", "S3", "A4", "S4",
    "A5", "PSL2(4)", "PSL2(5)", "S5",
    "PSL2(7)", "A6", "PSL2(9)", "PGL2(7)", "S6", "PGL2(9)", "M10",
    "PSL2(8)", "ASL24A", "ASL24B", "PGammaL2(9)", "PGammaL2(8)",
    "DP(A5,C7)", "DP(A6,C7)", "DP(PSL2(7),C11)", "DP(PSL2(8),C11)",
    "POW(A5,2)", "PSL3(4)",
)

THEOREM_A_NAMES = ("A5", "A6", "PSL2(7)", "PSL2(8)")
LEMMA_21_NAMES = THEOREM_A_NAMES + ("PSL3(4)",)


class GroupAnalysis:
    """Lazily computed invariants of one group, shared across targets."""

    def __init__(self, desc: GroupDescriptor, cap: int):
        self.desc = desc
        self.cap = cap
        self.group = desc.to_group()
        self._table = None
        self._table_failed = None
        self._solvable = None
        self._partition = None

    @property
    def name(self) -> str:
        return self.desc.name

    @property
    def order(self) -> int:
        return self.group.order()

    @property
    def solvable(self) -> bool:
        if self._solvable is None:
            self._solvable = is_solvable(self.group)
        return self._solvable

    @property
    def capacity_note(self) -> str | None:
        if self.order > self.cap:
            return f"order {self.order} exceeds element cap {self.cap}"
        return None

    @property
    def table(self):
        if self._table is None and self._table_failed is None:
            try:
                self._table = enumerate_elements(self.group, cap=self.cap)
            except CapacityError as exc:
                self._table_failed = str(exc)
        return self._table

    @property
    def partition(self):
        if self._partition is None:
            T = self.table
            if T is None:
                raise CapacityError(self.order, self.cap)
            self._partition = orbit_partition(T, automorphism_generators(T))
        return self._partition

    @property
    def omega(self) -> int:
        return len(self.partition)

    @property
    def spectrum(self) -> tuple[int, ...]:
        return spectrum(self.table)

    @property
    def simple(self) -> bool:
        return is_simple(self.table)

    @property
    def at_group(self) -> bool:
        return is_at_group(self.table, self.partition)

    def characteristic_records(self):
        T = self.table
        return characteristic_subgroups(T, automorphism_generators(T))


_ANALYSES: dict[tuple, GroupAnalysis] = {}


def analysis_for(desc: GroupDescriptor, cap: int) -> GroupAnalysis:
    key = (desc.degree, tuple(g.images for g in desc.generators), cap)
    if key not in _ANALYSES:
        _ANALYSES[key] = GroupAnalysis(desc, cap)
    return _ANALYSES[key]


def analysis_for_group(G: PermGroup, cap: int) -> GroupAnalysis:
    desc = GroupDescriptor(G.name or "anonymous", G.degree, G.order(), G.generators, "derived")
    return analysis_for(desc, cap)


def default_corpus() -> list[GroupDescriptor]:
    return [descriptor(name) for name in DEFAULT_CORPUS]


def load_corpus_dir(path) -> tuple[list[GroupDescriptor], list[str]]:
    """Descriptors from *.group files (sorted by filename) plus parse diagnostics."""
    out, errors = [], []
    for f in sorted(Path(path).glob("*.group")):
        try:
            out.append(load_group_file(f))
        except GroupFileError as exc:
            errors.append(f"error: {exc}")
    return out, errors


# -- reports (info / scan) ----------------------------------------------------


def report_for(desc: GroupDescriptor, cap: int | None = None, with_timing: bool = False) -> VerdictReport:
    cap = resolve_element_cap(cap)
    t0 = time.monotonic()
    a = analysis_for(desc, cap)
    rep = VerdictReport(
        name=a.name, degree=a.group.degree, order=a.order, solvable=a.solvable,
    )
    if a.table is None:
        rep.capacity_note = a.capacity_note
    else:
        rep.simple = a.simple
        rep.spectrum = a.spectrum
        rep.omega = a.omega
        rep.at_group = a.at_group
        rep.characteristic_orders = tuple(r.order for r in a.characteristic_records())
        rep.orbit_census = a.partition.census()
    lines, _fail = claim_lines(a)
    rep.claim_lines = tuple(lines)
    if with_timing:
        rep.timing_ms = (time.monotonic() - t0) * 1000.0
    return rep


def claim_lines(a: GroupAnalysis) -> tuple[list[str], bool]:
    """Check declared claims against computed invariants."""
    lines = []
    any_fail = False
    for key, claimed in a.desc.claims:
        if key == "order":
            computed = a.order
        elif key == "solvable":
            computed = a.solvable
        elif a.table is None:
            lines.append(f"claim {key}: {SKIP} ({a.capacity_note})")
            continue
        elif key == "omega":
            computed = a.omega
        elif key == "simple":
            computed = a.simple
        elif key == "at":
            computed = a.at_group
        elif key == "spectrum":
            computed = a.spectrum
        else:
            lines.append(f"claim {key}: {FAIL} (unknown key)")
            any_fail = True
            continue
        ok = computed == claimed
        if isinstance(claimed, bool):
            shown_claim, shown_comp = format_bool(claimed), format_bool(computed)
        elif isinstance(claimed, tuple):
            shown_claim, shown_comp = format_set(claimed), format_set(computed)
        else:
            shown_claim, shown_comp = str(claimed), str(computed)
        verdict = PASS if ok else FAIL
        any_fail |= not ok
        lines.append(f"claim {key}: declared {shown_claim}, computed {shown_comp} -> {verdict}")
    return lines, any_fail


# -- verify targets --------------------------------------------------------------


class _Run:
    """Accumulates verdict blocks and the exit code for one verify run."""

    def __init__(self, target: str, cap: int, max_order: int | None, timeout_secs: float | None):
        self.cap = cap
        self.max_order = max_order
        self.deadline = None if timeout_secs is None else time.monotonic() + timeout_secs
        self.lines: list[str] = [f"target: {target}", f"element_cap: {cap}"]
        self.counts = {PASS: 0, FAIL: 0, SKIP: 0}

    def block(self, header_lines: list[str]) -> None:
        self.lines.append("")
        self.lines.extend(header_lines)

    def verdict(self, verdict: str, evidence: str) -> None:
        self.counts[verdict] += 1
        self.lines.append(f"verdict: {verdict}")
        self.lines.append(f"evidence: {evidence}")

    def extra(self, line: str) -> None:
        self.lines.append(line)

    def note_claims(self, a: GroupAnalysis) -> None:
        lines, any_fail = claim_lines(a)
        for ln in lines:
            self.lines.append(ln)
            if "-> FAIL" in ln or ln.endswith("(unknown key)"):
                self.counts[FAIL] += 1
            elif f": {SKIP}" in ln:
                self.counts[SKIP] += 1
            else:
                self.counts[PASS] += 1

    def over_budget(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def guard(self, a: GroupAnalysis) -> str | None:
        """Reason to skip this group, or None."""
        if self.max_order is not None and a.order > self.max_order:
            return f"order {a.order} exceeds --max-order {self.max_order}"
        if self.over_budget():
            return "timeout budget exhausted"
        if a.table is None:
            return a.capacity_note
        return None

    def finish(self) -> tuple[str, int]:
        self.lines.append("")
        self.lines.append(
            f"summary: pass={self.counts[PASS]} fail={self.counts[FAIL]} skip={self.counts[SKIP]}"
        )
        if self.counts[FAIL]:
            code = 1
        elif self.counts[SKIP]:
            code = 2
        else:
            code = 0
        self.lines.append(f"exit: {code}")
        return "\n".join(self.lines) + "\n", code


def _witness_evidence(witness) -> str:
    pairs = ", ".join(
        f"{s.cycle_string()}->{t.cycle_string()}"
        for s, t in zip(witness.source_generators, witness.image_elements)
    )
    return f"generator images {pairs} (graph order {witness.graph_order})"


def _isomorphic_to_named(a: GroupAnalysis, names, cap) -> tuple[str, str] | None:
    for name in names:
        ref = build(name)
        if ref.order() != a.order:
            continue
        witness = find_isomorphism(a.group, ref, cap=cap)
        if witness is not None:
            return name, _witness_evidence(witness)
    return None


def _corpus_run(run: _Run, corpus, applicable, check) -> None:
    """Shared walk: guard each group, test applicability, emit verdicts."""
    for desc in corpus:
        a = analysis_for(desc, run.cap)
        run.block([f"group: {a.name}", f"order: {a.order}"])
        run.note_claims(a)
        reason = run.guard(a)
        if reason is not None:
            run.verdict(SKIP, reason)
            continue
        applies, why_not = applicable(a)
        if not applies:
            run.verdict(PASS, f"vacuous: {why_not}")
            continue
        check(run, a)


def _run_theorem_a(run: _Run, corpus) -> None:
    def applicable(a):
        if a.solvable:
            return False, "solvable"
        if a.omega > 5:
            return False, f"omega {a.omega} > 5"
        return True, None

    def check(run, a):
        run.extra(f"omega: {a.omega}")
        hit = _isomorphic_to_named(a, THEOREM_A_NAMES, run.cap)
        if hit is None:
            run.verdict(FAIL, f"nonsolvable with omega {a.omega} <= 5 but isomorphic to none of {', '.join(THEOREM_A_NAMES)}")
        else:
            run.verdict(PASS, f"isomorphic to {hit[0]}; {hit[1]}")

    _corpus_run(run, corpus, applicable, check)


def _run_theorem_b(run: _Run, corpus) -> None:
    def applicable(a):
        if a.solvable:
            return False, "solvable"
        if a.omega != 6:
            return False, f"omega {a.omega} != 6"
        return True, None

    def check(run, a):
        run.extra(f"omega: {a.omega}")
        hit = _isomorphic_to_named(a, ("PSL3(4)",), run.cap)
        if hit is not None:
            run.verdict(PASS, f"isomorphic to PSL3(4); {hit[1]}")
            return
        for rec in a.characteristic_records():
            if rec.order in (1, a.order):
                continue
            sub = PermGroup(rec.subgroup.generators, name=f"{a.name}#char{rec.order}")
            if not is_elementary_abelian(sub) or rec.order != p_part(rec.order, 2):
                continue
            Q = quotient(a.group, rec, cap=run.cap)
            witness = find_isomorphism(Q, build("A5"), cap=run.cap)
            if witness is not None:
                run.verdict(
                    PASS,
                    f"characteristic elementary abelian 2-subgroup of order {rec.order} "
                    f"with quotient isomorphic to A5; {_witness_evidence(witness)}",
                )
                return
        run.verdict(FAIL, "omega 6 nonsolvable, not PSL3(4), and no characteristic elementary abelian 2-subgroup with A5 quotient")

    _corpus_run(run, corpus, applicable, check)


def _run_stroppel(run: _Run, corpus) -> None:
    def applicable(a):
        return True, None

    def check(run, a):
        records = [r for r in a.characteristic_records() if r.order not in (1, a.order)]
        if not records:
            run.verdict(PASS, "vacuous: no proper nontrivial characteristic subgroup")
            return
        for rec in records:
            sub = PermGroup(rec.subgroup.generators, name=f"{a.name}#char{rec.order}")
            ka = analysis_for_group(sub, run.cap)
            Q = quotient(a.group, rec, cap=run.cap)
            qa = analysis_for_group(Q, run.cap)
            lhs = a.omega
            rhs = ka.omega + qa.omega - 1
            ok = lhs >= rhs
            run.extra(f"char_subgroup_order: {rec.order}")
            run.verdict(
                PASS if ok else FAIL,
                f"omega(G)={lhs} >= omega(K)={ka.omega} + omega(G/K)={qa.omega} - 1 = {rhs}",
            )

    _corpus_run(run, corpus, applicable, check)


def _run_lemma_2_3(run: _Run, corpus) -> None:
    def applicable(a):
        if is_abelian(a.group) or not a.simple:
            return False, "not nonabelian simple"
        return True, None

    def check(run, a):
        P = direct_power(a.group, 2, name=f"POW({a.name},2)")
        pa = analysis_for_group(P, run.cap)
        reason = run.guard(pa)
        if reason is not None:
            run.verdict(SKIP, f"POW({a.name},2): {reason}")
            return
        primes = prime_factors(pa.order)
        ok_primes = len(primes) >= 3
        run.extra(f"power_order: {pa.order}")
        run.verdict(
            PASS if ok_primes else FAIL,
            f"prime_set(POW)={{{','.join(str(p) for p in primes)}}} has {len(primes)} >= 3 members",
        )
        ok_omega = pa.omega >= 7
        run.verdict(PASS if ok_omega else FAIL, f"omega(POW({a.name},2)) = {pa.omega} >= 7")

    _corpus_run(run, corpus, applicable, check)


def _run_lemma_2_4(run: _Run, corpus) -> None:
    for name in THEOREM_A_NAMES:
        N = build(name)
        p = 7 if 7 not in set(prime_factors(N.order())) else 11
        dp_name = f"DP({name},C{p})"
        a = analysis_for(descriptor(dp_name), run.cap)
        run.block([f"group: {dp_name}", f"order: {a.order}"])
        reason = run.guard(a)
        if reason is not None:
            run.verdict(SKIP, reason)
            continue
        ok = a.omega >= 8
        run.verdict(PASS if ok else FAIL, f"omega({dp_name}) = {a.omega} >= 8 with {p} coprime to |{name}|")


def _run_prop_2_7(run: _Run, corpus) -> None:
    for name in THEOREM_A_NAMES:
        base_order = build(name).order()
        for M in extension_family(name):
            p = M.order() // base_order
            a = analysis_for_group(M, run.cap)
            run.block([f"group: {M.name}", f"order: {a.order}", f"extension_of: {name}", f"prime: {p}"])
            reason = run.guard(a)
            if reason is not None:
                run.verdict(SKIP, reason)
                continue
            if name == "PSL2(8)" and p == 7:
                ok = a.omega >= 7
                run.verdict(
                    PASS if ok else FAIL,
                    f"documented branch: verified via direct product, omega = {a.omega} >= 7",
                )
                continue
            spec = a.spectrum
            ok = len(spec) >= 6
            run.verdict(
                PASS if ok else FAIL,
                f"|spectrum| = {len(spec)} >= 6, spectrum {format_set(spec)}",
            )


def _run_lm_three(run: _Run, corpus) -> None:
    def applicable(a):
        if a.omega != 3:
            return False, f"omega {a.omega} != 3"
        primes = prime_factors(a.order)
        if len(primes) == 1:
            return False, "prime power order"
        return True, None

    def check(run, a):
        primes = prime_factors(a.order)
        if len(primes) != 2:
            run.verdict(FAIL, f"|G| = {a.order} has {len(primes)} prime divisors, not of the form p^n q")
            return
        T = a.table
        for p in primes:
            q = [r for r in primes if r != p][0]
            if a.order // p_part(a.order, p) != q:
                continue
            from .structure import sylow_subgroup

            P = sylow_subgroup(T, p)
            chain = P.bsgs()
            normal = all(
                chain.contains(gpg)
                for n in P.generators
                for gpg in (g.inverse() * n * g for g in a.group.generators)
            )
            if not normal or not is_elementary_abelian(P):
                continue
            ordmod = multiplicative_order(p, q)
            if ordmod == q - 1:
                run.verdict(
                    PASS,
                    f"|G| = {p}^n*{q}; normal elementary abelian Sylow {p}-subgroup of order "
                    f"{P.order()}; {p} has multiplicative order {ordmod} = {q}-1 mod {q}",
                )
                return
        run.verdict(FAIL, "no prime assignment gives a normal elementary abelian Sylow subgroup with primitive root condition")

    _corpus_run(run, corpus, applicable, check)


def _run_at_consistency(run: _Run, corpus) -> None:
    def applicable(a):
        if a.solvable:
            return False, "solvable"
        if not a.at_group:
            return False, "not an AT-group"
        if a.omega > 6:
            return False, f"omega {a.omega} > 6"
        return True, None

    def check(run, a):
        run.extra(f"omega: {a.omega}")
        hit = _isomorphic_to_named(a, LEMMA_21_NAMES, run.cap)
        if hit is None:
            run.verdict(FAIL, f"nonsolvable AT-group with omega {a.omega} <= 6 not isomorphic to any of {', '.join(LEMMA_21_NAMES)}")
        else:
            run.verdict(PASS, f"isomorphic to {hit[0]}; {hit[1]}")

    _corpus_run(run, corpus, applicable, check)


_TARGET_RUNNERS = {
    "theorem-a": _run_theorem_a,
    "theorem-b": _run_theorem_b,
    "stroppel-ineq": _run_stroppel,
    "lemma-2-3": _run_lemma_2_3,
    "lemma-2-4": _run_lemma_2_4,
    "prop-2-7": _run_prop_2_7,
    "lm-three": _run_lm_three,
    "at-consistency": _run_at_consistency,
}


def run_verify(
    target: str,
    corpus_dir=None,
    cap: int | None = None,
    max_order: int | None = None,
    timeout_secs: float | None = None,
) -> tuple[str, int]:
    """Run one verify target; returns (report text, exit code)."""
    if target not in _TARGET_RUNNERS:
        raise ValueError(f"unknown verify target {target!r} (choose from {', '.join(VERIFY_TARGETS)})")
    cap = resolve_element_cap(cap)
    corpus = default_corpus()
    parse_errors: list[str] = []
    if corpus_dir is not None:
        extra, parse_errors = load_corpus_dir(corpus_dir)
        corpus = corpus + extra
    run = _Run(target, cap, max_order, timeout_secs)
    for err in parse_errors:
        run.extra(err)
        run.counts[SKIP] += 1
    _TARGET_RUNNERS[target](run, corpus)
    return run.finish()
