import itertools
import random

import pytest

from flyauto.automata import (FuncAutomaton, Metrics, NondeterministicError, SignatureError,
                              cached, conj, constant_automaton, determinize, disj, image,
                              instrument_ndeg, inverse_image, map_output, negate, pairing,
                              restrict, run_det, run_nondet, within_Fk)
from flyauto.corpus import all_terms_F2, random_term
from flyauto.graphprops import Card, IsEmpty, Sgl, Stable
from flyauto.setterms import (Compl, Identity, Projection, Union, Var, set_term_relabelling)
from flyauto.termprops import (counter_example_automaton, counter_example_term, height_automaton)
from flyauto.terms import OPLUS, AddUndir, annotate, leaf_positions, positions, term
from flyauto.values import ERROR


def random_assignment(rng, t, s):
    leaves = leaf_positions(t)
    return tuple(frozenset(u for u in leaves if rng.random() < 0.5) for _ in range(s))


def test_run_det_examples():
    r = run_det(height_automaton(), term("oplus(1, oplus(2,2))"))
    assert r.state == 3 and r.output == 3
    assert run_det(Card(), term("oplus(1[1], oplus(2[1],2[1]))")).output == 3
    m = Metrics()
    r = run_det(Sgl(), term("empty"), metrics=m)
    assert m.transitions == 1


def test_trace_and_metrics_json():
    m = Metrics()
    r = run_det(Card(), term("oplus(1[1],2[0])"), trace=True, metrics=m)
    assert r.trace[()] == 1 and r.trace[(2,)] == 0
    assert set(m.as_dict()) == {"max_state_size", "ndeg", "transitions"}
    assert '"transitions": 3' in m.to_json()


def test_signature_errors():
    with pytest.raises(SignatureError):
        run_det(Card(), term("oplus(1,2)"))
    with pytest.raises(SignatureError):
        run_det(restrict(Stable(), within_Fk(2)), term("oplus(1[1],3[0])"))
    assert run_det(restrict(Stable(), within_Fk(2)), term("oplus(1[1],2[0])")).output


def test_nondet_deterministic_wrapper_is_singleton():
    t = term("add(1,2,oplus(1,oplus(2,2)))")
    A = height_automaton()
    m = Metrics()
    r = run_nondet(A, t, trace=True, metrics=m)
    assert all(len(S) == 1 for S in r.trace.values())
    assert m.ndeg == 1 and instrument_ndeg(A, t) == 1


def test_projection_of_sgl():
    A = image(Projection(1, 0), Sgl())
    assert not A.deterministic
    t = term("oplus(1,oplus(2,2))")
    r = run_nondet(A, t)
    assert set(r.state) == {0, 1}
    assert r.output is True
    assert run_nondet(A, term("empty")).output is False


def test_counter_example_ndeg():
    A = image(Projection(1, 0, "term"), counter_example_automaton())
    t = counter_example_term(6)
    r = run_nondet(A, t)
    assert len(r.state) >= 2 ** 7


def test_determinization_matches_brute_force_runs():
    """Root set of run_nondet equals the set of root states of all runs."""
    A = image(Projection(2, 0), _pair_width2())
    for t in all_terms_F2(5):
        leaves = leaf_positions(t)
        roots = set()
        for bits in itertools.product(range(4), repeat=len(leaves)):
            X = frozenset(u for u, b in zip(leaves, bits) if b & 1)
            Y = frozenset(u for u, b in zip(leaves, bits) if b & 2)
            q = run_det(A.inner, annotate(t, (X, Y))).state
            if q is not ERROR:
                roots.add(q)
        assert set(run_nondet(A, t).state) == roots


def _pair_width2():
    """(|X| capped, |Y| capped): a small deterministic automaton over 2 Booleans."""
    def step(sym, w, qs):
        x = sum(q[0] for q in qs) + (w[0] if w else 0)
        y = sum(q[1] for q in qs) + (w[1] if w else 0)
        if x > 1:
            return ERROR
        return (x, min(y, 2))
    return FuncAutomaton(step, width=2, name="pair")


def test_product_and_negation():
    rng = random.Random(0)
    for _ in range(50):
        t = random_term(rng, rng.randint(1, 6), k=3)
        X = random_assignment(rng, t, 1)
        ta = annotate(t, X)
        p = run_det(Sgl(), ta).output
        q = run_det(Stable(), ta).output
        assert run_det(conj(Sgl(), Stable()), ta).output == (p and q)
        assert run_det(disj(Sgl(), Stable()), ta).output == (p or q)
        assert run_det(negate(Sgl()), ta).output == (not p)
        assert run_det(negate(negate(Stable())), ta).output == q
        assert run_det(conj(Stable(), constant_automaton(True, 1)), ta).output == q
        assert run_det(pairing(Card(), Stable()), ta).output == (len(X[0]), q)


def test_negate_needs_determinism():
    with pytest.raises(NondeterministicError):
        negate(image(Projection(1, 0), Sgl()))
    with pytest.raises(NondeterministicError):
        run_det(image(Projection(1, 0), Sgl()), term("1"))


def test_map_output():
    nonempty = map_output(lambda n: n >= 1, Card(), acceptor=True)
    assert run_det(nonempty, term("oplus(1[0],2[1])")).output is True
    assert run_det(nonempty, term("oplus(1[0],2[0])")).output is False
    # k(D) = max(D) over a determinized set-valued run
    A = determinize(image(Projection(1, 0), Card()), output="set")
    assert max(run_det(A, term("oplus(1,oplus(2,3))")).output) == 3


def test_error_is_absorbing():
    autos = [conj(Sgl(), Stable()), negate(Sgl()), pairing(Card(), Sgl()),
             inverse_image(set_term_relabelling([Compl(Var(1))], 1), Sgl())]
    for A in autos:
        good = run_det(A, term("1[0]")).state
        assert A.delta(OPLUS, (), (ERROR, good)) is ERROR
        assert A.delta(OPLUS, (), (good, ERROR)) is ERROR
        assert A.delta(AddUndir(1, 2), (), (ERROR,)) is ERROR


def test_inverse_image_set_term():
    """h^-1(A_Card) for S = X1 ∪ X3ᶜ computes |X1 ∪ X3ᶜ|."""
    h = set_term_relabelling([Union((Var(1), Compl(Var(3))))], 3)
    A = inverse_image(h, Card())
    assert A.deterministic
    rng = random.Random(2)
    for _ in range(50):
        t = random_term(rng, rng.randint(1, 6), k=2)
        X = random_assignment(rng, t, 3)
        V = set(leaf_positions(t))
        assert run_det(A, annotate(t, X)).output == len(X[0] | (V - X[2]))


def test_identity_relabellings():
    rng = random.Random(4)
    for _ in range(100):
        t = random_term(rng, rng.randint(1, 6), k=3)
        X = random_assignment(rng, t, 1)
        ta = annotate(t, X)
        assert run_det(inverse_image(Identity(1), Card()), ta).output == run_det(Card(), ta).output
        assert run_nondet(image(Identity(1), Sgl()), ta).output == run_det(Sgl(), ta).output


def test_image_and_inverse_image_languages_exhaustive():
    """h(L(A)) = L(h(A)) and h^-1(L(A)) = L(h^-1(A)) over F2, |t| ≤ 6."""
    h = set_term_relabelling([Compl(Var(1))], 1)
    A = Stable()
    img, inv = image(h, A), inverse_image(h, A)
    for t in all_terms_F2(6):
        leaves = leaf_positions(t)
        for bits in itertools.product((0, 1), repeat=len(leaves)):
            X = frozenset(u for u, b in zip(leaves, bits) if b)
            ta = annotate(t, (X,))
            Xc = frozenset(leaves) - X
            assert run_det(inv, ta).output == run_det(A, annotate(t, (Xc,))).output
            # h is a bijection on annotations, so t*X ∈ h(L(A)) iff t*Xᶜ ∈ L(A)
            assert run_nondet(img, ta).output == run_det(A, annotate(t, (Xc,))).output


def test_cached_is_transparent():
    rng = random.Random(9)
    A = cached(conj(Sgl(), Stable()))
    for _ in range(200):
        t = random_term(rng, rng.randint(1, 5), k=2)
        ta = annotate(t, random_assignment(rng, t, 1))
        assert run_det(A, ta).output == run_det(conj(Sgl(), Stable()), ta).output
    assert A.hits > 0


def test_empty_term_positions():
    assert positions(term("empty")) == [((), term("empty"))]
    assert run_det(IsEmpty(), term("empty")).output is True
