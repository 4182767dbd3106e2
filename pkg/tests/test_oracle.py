import itertools
import random

import pytest

from phasesat import oracle
from phasesat.cnf import Formula
from phasesat.oracle import RandomCnfSpec, TooManyVariables, brute_force, generate


def php_clauses(pigeons, holes):
    """Pigeonhole principle: pigeons > holes makes it unsatisfiable.
    Variable (p, h) -> index p*holes - holes + h."""
    def var(p, h):
        return (p - 1) * holes + h
    clauses = [[var(p, h) for h in range(1, holes + 1)] for p in range(1, pigeons + 1)]
    for h in range(1, holes + 1):
        for p1, p2 in itertools.combinations(range(1, pigeons + 1), 2):
            clauses.append([-var(p1, h), -var(p2, h)])
    return pigeons * holes, clauses


def test_sat_returns_lexicographically_first_model():
    f = Formula.from_clauses(2, [[1, 2], [-1]])
    assert brute_force(f) == [None, False, True]


def test_unsat_pair():
    f = Formula.from_clauses(1, [[1], [-1]])
    assert brute_force(f) is None


def test_pigeonhole_3_2_unsat():
    n, clauses = php_clauses(3, 2)
    assert n == 6
    assert brute_force(Formula.from_clauses(n, clauses)) is None


def test_pigeonhole_3_3_sat():
    n, clauses = php_clauses(3, 3)
    f = Formula.from_clauses(n, clauses)
    model = brute_force(f)
    assert model is not None and f.evaluate(model)


def test_model_is_lexicographic_minimum():
    # check against explicit enumeration on small instances
    rng = random.Random(2)
    for _ in range(25):
        n = rng.randint(1, 6)
        f = generate(RandomCnfSpec(n, rng.randint(1, 12), min(3, n), rng.getrandbits(32)))
        expected = None
        for bits in itertools.product([False, True], repeat=n):
            model = [None] + list(bits)
            if f.evaluate(model):
                expected = model
                break
        assert brute_force(f) == expected


def test_empty_clause_is_unsat():
    f = Formula.from_clauses(2, [[1], []])
    assert brute_force(f) is None


def test_too_many_variables():
    f = Formula.from_clauses(27, [[1, 2]])
    with pytest.raises(TooManyVariables):
        brute_force(f)


def test_large_var_count_within_cap():
    f = Formula.from_clauses(26, [[26], [-26, 25]])
    model = brute_force(f)
    assert model[26] is True and model[25] is True
    assert all(v is False for v in model[1:25])


def test_generate_deterministic():
    spec = RandomCnfSpec(3, 5, 3, seed=42)
    assert generate(spec) == generate(spec)


def test_generate_distinct_vars_per_clause():
    f = generate(RandomCnfSpec(5, 21, 3, seed=9))
    assert len(f.clauses) == 21
    for c in f.clauses:
        assert len({abs(l) for l in c.literals}) == 3


def test_generate_rejects_bad_specs():
    with pytest.raises(ValueError):
        generate(RandomCnfSpec(3, 5, clause_len=4))
    with pytest.raises(ValueError):
        generate(RandomCnfSpec(0, 5))
    with pytest.raises(ValueError):
        generate(RandomCnfSpec(27, 5))
    with pytest.raises(ValueError):
        generate(RandomCnfSpec(3, 0))
