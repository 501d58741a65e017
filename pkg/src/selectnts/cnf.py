"""CNF formulas, DIMACS input/output and assignment checking.

Literals are stored internally as codes ``2 * (v - 1) + neg`` so that a
literal and its negation differ only in the lowest bit. Everything that
crosses the package boundary uses signed, 1-based DIMACS integers.
"""

from pathlib import Path
from typing import NamedTuple

import numpy as np


class DimacsError(ValueError):
    """Base class for rejected DIMACS input."""


class MissingHeader(DimacsError):
    pass


class HeaderClauseCountMismatch(DimacsError):
    pass


class VariableOutOfRange(DimacsError):
    pass


class EmptyClause(DimacsError):
    pass


class MalformedToken(DimacsError):
    pass


class Literal(NamedTuple):
    variable: int
    positive: bool

    @classmethod
    def from_dimacs(cls, lit):
        return cls(abs(int(lit)), lit > 0)

    def to_dimacs(self):
        return self.variable if self.positive else -self.variable


def encode(lits):
    """Signed DIMACS literals -> internal literal codes."""
    lits = np.asarray(lits, dtype=np.int64)
    return (2 * (np.abs(lits) - 1) + (lits < 0)).astype(np.int32)


def decode(codes):
    codes = np.asarray(codes, dtype=np.int64)
    var = (codes >> 1) + 1
    return np.where(codes & 1, -var, var)


class Formula:
    """Immutable CNF instance in CSR layout.

    ``lits[starts[c]:starts[c+1]]`` holds the literal codes of clause ``c``;
    ``occ[occ_starts[L]:occ_starts[L+1]]`` holds the ids of the clauses
    containing literal code ``L``, in increasing order. ``taut[c]`` marks
    clauses containing both polarities of some variable; they are always
    satisfied and the search engines never select them.
    """

    __slots__ = ("n", "m", "lits", "starts", "occ", "occ_starts", "taut")

    def __init__(self, n, lits, starts):
        n = int(n)
        lits = np.ascontiguousarray(lits, dtype=np.int32)
        starts = np.ascontiguousarray(starts, dtype=np.int64)
        m = len(starts) - 1
        lengths = np.diff(starts)
        cid = np.repeat(np.arange(m, dtype=np.int64), lengths)

        # drop repeated literals, keeping first appearance order
        key = cid * (2 * n) + lits
        _, first = np.unique(key, return_index=True)
        first.sort()
        lits = lits[first]
        cid = cid[first]
        lengths = np.bincount(cid, minlength=m)
        starts = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(lengths, out=starts[1:])

        vkey = cid * n + (lits >> 1)
        uniq_vars = np.unique(vkey)
        nvars = np.bincount(uniq_vars // max(n, 1), minlength=m) if m else np.zeros(0, np.int64)
        taut = nvars < lengths

        order = np.argsort(lits, kind="stable")
        occ = cid[order].astype(np.int32)
        occ_starts = np.zeros(2 * n + 1, dtype=np.int64)
        np.cumsum(np.bincount(lits, minlength=2 * n), out=occ_starts[1:])

        for name, value in (
            ("n", n),
            ("m", m),
            ("lits", lits),
            ("starts", starts),
            ("occ", occ),
            ("occ_starts", occ_starts),
            ("taut", taut),
        ):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("Formula is immutable")

    @classmethod
    def from_clauses(cls, n, clauses):
        """Build from an iterable of clauses of signed DIMACS literals."""
        clauses = [list(map(int, c)) for c in clauses]
        lengths = np.array([len(c) for c in clauses], dtype=np.int64)
        flat = np.fromiter(
            (lit for c in clauses for lit in c), dtype=np.int64, count=int(lengths.sum())
        )
        return cls._from_dimacs_flat(int(n), flat, lengths)

    @classmethod
    def _from_dimacs_flat(cls, n, flat, lengths):
        empty = np.flatnonzero(lengths == 0)
        if len(empty):
            raise EmptyClause(f"clause {int(empty[0])} has no literals")
        if np.any(flat == 0):
            raise MalformedToken("literal 0 inside a clause")
        bad = np.flatnonzero(np.abs(flat) > n)
        if len(bad):
            raise VariableOutOfRange(f"literal {int(flat[bad[0]])} outside 1..{n}")
        starts = np.zeros(len(lengths) + 1, dtype=np.int64)
        np.cumsum(lengths, out=starts[1:])
        return cls(n, encode(flat), starts)

    @property
    def ratio(self):
        return self.m / self.n if self.n else float("nan")

    @property
    def max_clause_len(self):
        return int(np.diff(self.starts).max()) if self.m else 0

    @property
    def clauses(self):
        dimacs = decode(self.lits)
        return [dimacs[self.starts[c]:self.starts[c + 1]].tolist() for c in range(self.m)]

    def clause(self, c):
        return decode(self.lits[self.starts[c]:self.starts[c + 1]]).tolist()

    def clause_literals(self, c):
        return [Literal.from_dimacs(x) for x in self.clause(c)]

    def clause_variables(self, c):
        return [abs(x) for x in self.clause(c)]

    def occurrences(self, lit):
        """Clause ids containing the signed DIMACS literal ``lit``."""
        code = 2 * (abs(lit) - 1) + (lit < 0)
        return self.occ[self.occ_starts[code]:self.occ_starts[code + 1]]

    def __eq__(self, other):
        if not isinstance(other, Formula):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.starts, other.starts)
            and np.array_equal(self.lits, other.lits)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.lits.tobytes(), self.starts.tobytes()))

    def __repr__(self):
        return f"Formula(n={self.n}, m={self.m})"


def parse_dimacs(text):
    """Parse a DIMACS CNF document (``bytes`` or ``str``) into a Formula.

    ``c`` lines are comments and clauses may span lines. A trailing clause
    missing its terminating ``0`` at end of input is accepted; a ``%`` line
    (SATLIB convention) ends the clause section.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8", errors="replace")
    header = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        if line[0] == "%":
            break
        if line[0] == "p":
            if header is not None:
                raise MalformedToken(f"line {lineno}: second header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedToken(f"line {lineno}: bad header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedToken(f"line {lineno}: bad header {line!r}") from None
            if n < 0 or m < 0:
                raise MalformedToken(f"line {lineno}: negative counts in header")
            header = (n, m)
            continue
        if header is None:
            raise MissingHeader(f"line {lineno}: clause data before 'p cnf' header")
        body.append(line)
    if header is None:
        raise MissingHeader("no 'p cnf' header found")
    n, m = header

    tokens = " ".join(body).split()
    try:
        values = np.fromiter(map(int, tokens), dtype=np.int64, count=len(tokens))
    except ValueError:
        bad = next(t for t in tokens if not _is_int(t))
        raise MalformedToken(f"token {bad!r} is not an integer") from None

    zeros = np.flatnonzero(values == 0)
    ends = zeros
    if len(values) and (not len(zeros) or zeros[-1] != len(values) - 1):
        ends = np.append(zeros, len(values))
    begins = np.concatenate(([0], zeros + 1))[: len(ends)]
    lengths = ends - begins
    if len(lengths) != m:
        raise HeaderClauseCountMismatch(f"header declares {m} clauses, found {len(lengths)}")
    flat = values[values != 0]
    return Formula._from_dimacs_flat(n, flat, lengths)


def _is_int(tok):
    try:
        int(tok)
    except ValueError:
        return False
    return True


def read_dimacs(path):
    return parse_dimacs(Path(path).read_bytes())


def write_dimacs(f, comments=()):
    """Serialize to DIMACS bytes; ``comments`` become leading ``c`` lines."""
    out = [f"c {c}" for c in comments]
    out.append(f"p cnf {f.n} {f.m}")
    for clause in f.clauses:
        out.append(" ".join(map(str, clause)) + " 0")
    return ("\n".join(out) + "\n").encode("ascii")


def clause_satisfied(f, a):
    """Boolean mask over clauses: True where ``a`` satisfies the clause."""
    a = np.asarray(a, dtype=bool)
    if len(a) != f.n:
        raise ValueError(f"assignment has {len(a)} entries, formula has {f.n} variables")
    if f.m == 0:
        return np.zeros(0, dtype=bool)
    vals = a[f.lits >> 1] != (f.lits & 1).astype(bool)
    return np.logical_or.reduceat(vals, f.starts[:-1])


def check_assignment(f, a):
    """Ids of the clauses left unsatisfied by ``a``; empty iff ``a`` is a model."""
    return np.flatnonzero(~clause_satisfied(f, a)).tolist()


def model_to_dimacs(a):
    a = np.asarray(a, dtype=bool)
    var = np.arange(1, len(a) + 1)
    return np.where(a, var, -var).tolist()


def assignment_from_dimacs(lits, n):
    """Inverse of :func:`model_to_dimacs`; unmentioned variables default to False."""
    a = np.zeros(n, dtype=bool)
    for lit in lits:
        if lit > 0:
            a[lit - 1] = True
    return a


def format_solution(model=None):
    """SAT-competition output: ``s`` status line plus a ``v`` model line."""
    if model is None:
        return "s UNKNOWN\n"
    lits = model_to_dimacs(model)
    return "s SATISFIABLE\nv " + " ".join(map(str, lits + [0])) + "\n"


def parse_solution(text, n):
    """Read ``s``/``v`` lines back; returns the model or None for UNKNOWN."""
    status = None
    lits = []
    for line in text.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            lits.extend(int(t) for t in line[2:].split() if t != "0")
    if status != "SATISFIABLE":
        return None
    return assignment_from_dimacs(lits, n)
