import itertools

import pytest

from quota_trees.dfa import (
    accepts_word,
    class_sizes,
    dfa_equivalent,
    dfa_graph,
    dfa_isomorphic,
    expand_dfa,
    feasible_class_sizes,
    minimize_dfa,
    quotient_map,
    reachable_states,
)
from quota_trees.exceptions import InfeasibleError, QuotaSpecError
from quota_trees.graph import adjacency_matrix
from quota_trees.models import Dfa

# state 1 repeats state 0, state 4 is unreachable
REDUNDANT = Dfa(
    alphabet=("a", "b"),
    delta=((1, 2), (0, 2), (0, 3), (3, 3), (4, 0)),
    initial=0,
    accepts=(0, 1, 2),
)


def _words(longest: int):  # type: ignore
    for length in range(longest + 1):
        yield from itertools.product("ab", repeat=length)


def test_dfa_graph(fibonacci_dfa: Dfa) -> None:
    """
    Test dfa_graph function.

    GIVEN the minimal Fibonacci DFA
    WHEN its transition graph is built
    THEN edge ids follow (state, symbol) order and the dead state has two loops

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    graph = dfa_graph(fibonacci_dfa)

    assert adjacency_matrix(graph) == [[1, 1, 0], [1, 0, 1], [0, 0, 2]]
    assert (graph.edges[3].src, graph.edges[3].dst) == (1, 2)
    assert graph.names == ("A", "B", "C")


def test_accepts_word(fibonacci_dfa: Dfa) -> None:
    """
    Test accepts_word function.

    GIVEN the Fibonacci DFA, which rejects words containing bb
    WHEN words are run
    THEN exactly the words without bb are accepted

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    assert accepts_word(fibonacci_dfa, "")
    assert accepts_word(fibonacci_dfa, "abab")
    assert not accepts_word(fibonacci_dfa, "abba")
    counts = [
        sum(1 for word in itertools.product("ab", repeat=length) if accepts_word(fibonacci_dfa, word))  # noqa: E501
        for length in range(7)
    ]
    assert counts == [1, 2, 3, 5, 8, 13, 21]

    with pytest.raises(QuotaSpecError, match="not in the alphabet"):
        accepts_word(fibonacci_dfa, "abc")


def test_feasible_class_sizes(fibonacci_dfa: Dfa) -> None:
    """
    Test feasible_class_sizes function.

    GIVEN the Fibonacci DFA and class sizes (x, y, z) in 1..4
    WHEN feasibility is checked
    THEN exactly the sizes with x >= y are feasible, bad sizes are refused

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    for sizes in itertools.product(range(1, 5), repeat=3):
        assert feasible_class_sizes(fibonacci_dfa, sizes) == (sizes[0] >= sizes[1])

    with pytest.raises(QuotaSpecError, match="class sizes given"):
        feasible_class_sizes(fibonacci_dfa, (1, 1))
    with pytest.raises(QuotaSpecError, match="positive"):
        feasible_class_sizes(fibonacci_dfa, (1, 0, 1))


@pytest.mark.parametrize("seed", range(20))
def test_expand_dfa(seed: int, fibonacci_dfa: Dfa) -> None:
    """
    Test expand_dfa function.

    GIVEN the Fibonacci DFA and class sizes (3, 2, 3)
    WHEN it is expanded with a seed
    THEN the result is connected, minimizes back and accepts the same words

    :param seed: expansion seed.
    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    expanded = expand_dfa(fibonacci_dfa, (3, 2, 3), seed)

    assert expanded.state_count == 8
    assert len(reachable_states(expanded)) == 8
    assert class_sizes(expanded) == (3, 2, 3)
    assert dfa_isomorphic(minimize_dfa(expanded), fibonacci_dfa)
    assert dfa_equivalent(expanded, fibonacci_dfa)
    for word in _words(8):
        assert accepts_word(expanded, word) == accepts_word(fibonacci_dfa, word)


def test_expand_dfa_is_deterministic(fibonacci_dfa: Dfa) -> None:
    """
    Test expand_dfa function.

    GIVEN a fixed seed
    WHEN the expansion runs twice
    THEN the automata are equal and state names follow their classes

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    first = expand_dfa(fibonacci_dfa, (4, 3, 2), 17)

    assert first == expand_dfa(fibonacci_dfa, (4, 3, 2), 17)
    assert first.names is not None
    assert first.names[0] == "A_1"
    assert sorted(first.names) == ["A_1", "A_2", "A_3", "A_4", "B_1", "B_2", "B_3", "C_1", "C_2"]  # noqa: E501



def test_expand_dfa_names_do_not_collide() -> None:
    """
    Test expand_dfa function.

    GIVEN states named A and A1 and eleven copies of A
    WHEN the automaton is expanded
    THEN the eleventh copy of A and the first copy of A1 get different names
    """
    dfa = Dfa(
        alphabet=("a", "b"),
        delta=((0, 1), (0, 1)),
        initial=0,
        accepts=(1,),
        names=("A", "A1"),
    )
    expanded = expand_dfa(dfa, (11, 1), 3)

    assert expanded.names is not None
    assert len(set(expanded.names)) == 12
    assert "A_11" in expanded.names
    assert "A1_1" in expanded.names
    assert dfa_equivalent(expanded, dfa)

def test_expand_dfa_infeasible(fibonacci_dfa: Dfa) -> None:
    """
    Test expand_dfa function.

    GIVEN class sizes with fewer A states than B states
    WHEN the expansion runs
    THEN InfeasibleError is raised

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    with pytest.raises(InfeasibleError, match="not feasible"):
        expand_dfa(fibonacci_dfa, (1, 2, 1), 0)


def test_minimize_redundant_dfa(fibonacci_dfa: Dfa) -> None:
    """
    Test minimize_dfa and quotient_map functions.

    GIVEN a DFA with a repeated state and an unreachable state
    WHEN it is minimized
    THEN the Fibonacci DFA comes back and the unreachable state has no class

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    minimal, classes = quotient_map(REDUNDANT)

    assert classes == (0, 0, 1, 2, None)
    assert minimal.delta == fibonacci_dfa.delta
    assert minimal.accepts == fibonacci_dfa.accepts
    assert minimize_dfa(REDUNDANT) == minimal
    assert class_sizes(REDUNDANT) == (2, 1, 1)
    assert minimize_dfa(minimal) == minimal


def test_dfa_equivalence(fibonacci_dfa: Dfa) -> None:
    """
    Test dfa_equivalent and dfa_isomorphic functions.

    GIVEN the Fibonacci DFA, a redundant copy and the DFA accepting everything
    WHEN they are compared
    THEN only the copy is equivalent, and different alphabets are refused

    :param fibonacci_dfa: fixture with the Fibonacci DFA.
    """
    everything = Dfa(alphabet=("a", "b"), delta=((0, 0),), accepts=(0,))
    other_alphabet = Dfa(alphabet=("a", "c"), delta=((0, 0),), accepts=(0,))

    assert dfa_equivalent(REDUNDANT, fibonacci_dfa)
    assert not dfa_isomorphic(REDUNDANT, fibonacci_dfa)
    assert not dfa_equivalent(everything, fibonacci_dfa)

    with pytest.raises(QuotaSpecError, match="alphabets differ"):
        dfa_equivalent(other_alphabet, everything)
    with pytest.raises(QuotaSpecError, match="alphabets differ"):
        dfa_isomorphic(other_alphabet, everything)
