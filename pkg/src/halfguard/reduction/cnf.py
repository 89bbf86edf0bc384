"""3SAT formulas: a tiny DIMACS reader and a truth-table check."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import List, Tuple

Literal = Tuple[int, bool]  # (variable index from 1, True for a positive literal)


class CnfError(ValueError):
    kind = "CnfError"


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: Tuple[Tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise CnfError("formula needs at least one variable")
        if not self.clauses:
            raise CnfError("formula needs at least one clause")
        for c in self.clauses:
            if len(c) != 3:
                raise CnfError(f"clause {c} does not have exactly 3 literals")
            for v, _ in c:
                if not 1 <= v <= self.num_vars:
                    raise CnfError(f"variable {v} out of range 1..{self.num_vars}")

    @property
    def n(self) -> int:
        return self.num_vars

    @property
    def m(self) -> int:
        return len(self.clauses)

    def evaluate(self, assignment) -> bool:
        return all(any(assignment[v - 1] == pos for v, pos in c) for c in self.clauses)

    def satisfiable(self) -> bool:
        return any(self.evaluate(a) for a in itertools.product((False, True), repeat=self.n))

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        for c in self.clauses:
            lines.append(" ".join(str(v if pos else -v) for v, pos in c) + " 0")
        return "\n".join(lines) + "\n"


def formula(num_vars: int, clauses) -> CnfFormula:
    """Build from signed-integer clauses, e.g. formula(1, [(1, 1, 1), (-1, -1, -1)])."""
    return CnfFormula(num_vars, tuple(tuple((abs(l), l > 0) for l in c) for c in clauses))


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: List[List[int]] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: bad problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if header is None:
        raise CnfError("missing problem line")
    n, m = header
    if len(clauses) != m:
        raise CnfError(f"header declares {m} clauses, found {len(clauses)}")
    for k, c in enumerate(clauses, 1):
        if len(c) != 3:
            raise CnfError(f"clause {k} has {len(c)} literals; exactly 3 are required")
        for lit in c:
            if abs(lit) > n:
                raise CnfError(f"clause {k}: variable {abs(lit)} exceeds declared {n}")
    return formula(n, clauses)


def random_formula(n: int, m: int, seed: int) -> CnfFormula:
    rng = random.Random(seed)
    return formula(n, [tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3)) for _ in range(m)])
