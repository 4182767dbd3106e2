"""CNF data model and DIMACS front-end.

Literals are signed integers as in DIMACS: +v / -v for variable v >= 1.
A Formula is immutable after construction and safe to share between
concurrent readers.  The solver core uses a packed literal encoding
(2v for +v, 2v+1 for -v); `encode`/`decode` convert between the two.
"""

from dataclasses import dataclass, field


class DimacsError(ValueError):
    """Base class for DIMACS parsing failures."""


class MalformedHeader(DimacsError):
    pass


class LiteralOutOfRange(DimacsError):
    pass


class UnterminatedClause(DimacsError):
    pass


def neg(lit):
    """Negate a signed literal (an involution)."""
    return -lit


def encode(lit):
    """Signed literal -> packed code: +v -> 2v, -v -> 2v+1."""
    return (lit << 1) if lit > 0 else (((-lit) << 1) | 1)


def decode(code):
    """Packed code -> signed literal."""
    var = code >> 1
    return -var if code & 1 else var


@dataclass(frozen=True)
class Clause:
    """A disjunction of distinct, non-complementary literals."""

    literals: tuple
    learned: bool = False
    lbd: int = 0

    def __len__(self):
        return len(self.literals)

    def __contains__(self, lit):
        return lit in self.literals


class Formula:
    """A parsed CNF instance.

    num_literal_occurrences is the total clause size over all stored
    clauses; it is fixed at parse time and drives the large/small
    formula split in the phase schedulers.  Empty input clauses are
    not stored as Clause objects (a Clause has size >= 1); they are
    counted and make the formula trivially unsatisfiable.
    """

    def __init__(self, num_vars, clauses, num_empty_clauses=0, num_tautologies_dropped=0):
        self.num_vars = num_vars
        self.clauses = tuple(clauses)
        self.num_empty_clauses = num_empty_clauses
        self.num_tautologies_dropped = num_tautologies_dropped
        self.num_literal_occurrences = sum(len(c) for c in self.clauses)
        occ = {}
        for idx, c in enumerate(self.clauses):
            for lit in c.literals:
                occ.setdefault(lit, []).append(idx)
        self._occurrences = {lit: tuple(ids) for lit, ids in occ.items()}

    @classmethod
    def from_clauses(cls, num_vars, clause_lits):
        """Build a Formula from iterables of signed literals, applying the
        same normalization as the parser (dedup, tautology drop)."""
        clauses = []
        empty = 0
        tautologies = 0
        for lits in clause_lits:
            norm = _normalize(lits, num_vars)
            if norm is None:
                tautologies += 1
            elif not norm:
                empty += 1
            else:
                clauses.append(Clause(tuple(norm)))
        return cls(num_vars, clauses, empty, tautologies)

    @property
    def trivially_unsat(self):
        return self.num_empty_clauses > 0

    def occurrences(self, lit):
        """Clauses containing `lit` (a signed literal), in input order."""
        return tuple(self.clauses[i] for i in self._occurrences.get(lit, ()))

    def evaluate(self, model):
        """True iff `model` (1-indexed sequence of booleans) satisfies
        every stored clause and the formula has no empty clause."""
        if self.num_empty_clauses:
            return False
        for c in self.clauses:
            for lit in c.literals:
                v = model[abs(lit)]
                if v is (lit > 0):
                    break
            else:
                return False
        return True

    def to_dimacs(self):
        """Serialize back to DIMACS text."""
        lines = ["p cnf %d %d" % (self.num_vars, len(self.clauses) + self.num_empty_clauses)]
        for c in self.clauses:
            lines.append(" ".join(str(l) for l in c.literals) + " 0")
        lines.extend("0" for _ in range(self.num_empty_clauses))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, Formula):
            return NotImplemented
        return (self.num_vars == other.num_vars
                and self.num_empty_clauses == other.num_empty_clauses
                and tuple(c.literals for c in self.clauses) == tuple(c.literals for c in other.clauses))

    def __repr__(self):
        return "Formula(vars=%d, clauses=%d, lit_occurrences=%d)" % (
            self.num_vars, len(self.clauses), self.num_literal_occurrences)


def _normalize(lits, num_vars):
    """Dedup literals preserving order; None for tautologies."""
    seen = set()
    out = []
    for lit in lits:
        if lit == 0 or abs(lit) > num_vars:
            raise LiteralOutOfRange("literal %d out of range for %d variables" % (lit, num_vars))
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return out


def parse_dimacs(text):
    """Parse a DIMACS CNF document into a Formula.

    Comment lines start with 'c'; the header is "p cnf <vars> <clauses>".
    The header clause count is advisory: we parse to EOF.  Clauses may
    span lines; '\\r\\n' endings are accepted.  A line starting with '%'
    (SATLIB end marker) terminates the clause section.
    """
    num_vars = None
    clauses = []
    empty = 0
    tautologies = 0
    pending = []

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if num_vars is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise MalformedHeader("expected 'p cnf <vars> <clauses>', got: %r" % line)
            try:
                num_vars = int(parts[2])
                declared_clauses = int(parts[3])
            except ValueError:
                raise MalformedHeader("non-numeric header counts in: %r" % line) from None
            if num_vars < 0 or declared_clauses < 0:
                raise MalformedHeader("negative counts in header: %r" % line)
            continue
        if line.startswith("%"):
            break
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError("unexpected token %r in clause section" % tok) from None
            if lit == 0:
                norm = _normalize(pending, num_vars)
                if norm is None:
                    tautologies += 1
                elif not norm:
                    empty += 1
                else:
                    clauses.append(Clause(tuple(norm)))
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise LiteralOutOfRange(
                        "literal %d exceeds declared %d variables" % (lit, num_vars))
                pending.append(lit)

    if num_vars is None:
        raise MalformedHeader("no 'p cnf' header found")
    if pending:
        raise UnterminatedClause("EOF before terminating 0: %r" % (pending,))
    return Formula(num_vars, clauses, empty, tautologies)
