"""
Quota-based DFA expansion and the automaton utilities that verify it.

A connected DFA maps onto its minimal DFA, and the sizes of the preimages
of the minimal states are exactly the quotas of a quota tree in the
minimal DFA's graph rooted at its initial state. Expansion grows such a
tree with random search and fills every transition the tree does not fix
with a random state of the class the minimal DFA prescribes.
"""
import logging
from collections import deque
from typing import Deque, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from quota_trees.exceptions import InfeasibleError, QuotaSpecError
from quota_trees.feasibility import achievable
from quota_trees.graph import from_pairs
from quota_trees.models import Dfa, Discipline, MultiGraph, SearchConfig, Vector
from quota_trees.search import quota_search
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)


def dfa_graph(dfa: Dfa) -> MultiGraph:
    """
    Transition graph of a DFA, one edge per (state, symbol).

    Edge ids run in (state, symbol index) order, so edge state*|alphabet| + k
    reads symbol k.

    :param dfa: automaton.
    :return: multigraph with out-degree |alphabet| everywhere.
    """
    pairs = [
        (state, target)
        for state, row in enumerate(dfa.delta)
        for target in row
    ]
    return from_pairs(dfa.state_count, pairs, names=dfa.names)


def accepts_word(dfa: Dfa, word: Sequence[str]) -> bool:
    """
    Run the automaton on a word.

    :param dfa: automaton.
    :param word: sequence of alphabet symbols.
    :raises QuotaSpecError: on a symbol outside the alphabet.
    :return: True when the word is accepted.
    """
    column = {symbol: index for index, symbol in enumerate(dfa.alphabet)}
    state = dfa.initial
    for symbol in word:
        if symbol not in column:
            raise QuotaSpecError(f"symbol {symbol!r} is not in the alphabet")
        state = dfa.delta[state][column[symbol]]
    return state in dfa.accepts


def reachable_states(dfa: Dfa) -> List[int]:
    """
    States reachable from the initial state in breadth-first symbol order.

    :param dfa: automaton.
    :return: states in discovery order, the initial state first.
    """
    order = [dfa.initial]
    seen = {dfa.initial}
    queue: Deque[int] = deque(order)
    while queue:
        state = queue.popleft()
        for target in dfa.delta[state]:
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    return order


def _refine(dfa: Dfa, states: List[int]) -> Dict[int, int]:
    """Hopcroft partition refinement, returns a block label per state."""
    accepting = frozenset(state for state in states if state in dfa.accepts)
    rejecting = frozenset(states) - accepting
    partition: Set[frozenset] = {block for block in (accepting, rejecting) if block}
    block_of = {state: block for block in partition for state in block}

    predecessors: Dict[Tuple[int, int], Set[int]] = {}
    for state in states:
        for symbol, target in enumerate(dfa.delta[state]):
            predecessors.setdefault((symbol, target), set()).add(state)

    worklist: Set[frozenset] = set()
    if len(partition) == 2:
        worklist.add(min(partition, key=len))
    while worklist:
        splitter = worklist.pop()
        for symbol in range(len(dfa.alphabet)):
            hit: Dict[frozenset, Set[int]] = {}
            for target in splitter:
                for state in predecessors.get((symbol, target), ()):
                    hit.setdefault(block_of[state], set()).add(state)
            for block, overlap in hit.items():
                if len(overlap) == len(block):
                    continue
                inner = frozenset(overlap)
                outer = block - inner
                partition.discard(block)
                partition.update((inner, outer))
                for state in inner:
                    block_of[state] = inner
                for state in outer:
                    block_of[state] = outer
                if block in worklist:
                    worklist.discard(block)
                    worklist.update((inner, outer))
                else:
                    worklist.add(min((inner, outer), key=len))

    labels: Dict[frozenset, int] = {}
    return {
        state: labels.setdefault(block_of[state], len(labels))
        for state in states
    }


def quotient_map(dfa: Dfa) -> Tuple[Dfa, Tuple[Optional[int], ...]]:
    """
    Minimal DFA of the connected part and the map of every state onto it.

    Minimal states are numbered breadth first from the initial state in
    symbol order. Each minimal state takes the name of its first reached
    member.

    :param dfa: automaton.
    :return: minimal DFA and per-state class, None for unreachable states.
    """
    states = reachable_states(dfa)
    block = _refine(dfa, states)

    representative: Dict[int, int] = {}
    for state in states:
        representative.setdefault(block[state], state)
    order: List[int] = [block[dfa.initial]]
    number = {block[dfa.initial]: 0}
    queue: Deque[int] = deque(order)
    while queue:
        current = queue.popleft()
        for target in dfa.delta[representative[current]]:
            label = block[target]
            if label not in number:
                number[label] = len(order)
                order.append(label)
                queue.append(label)

    minimal = Dfa(
        alphabet=dfa.alphabet,
        delta=tuple(
            tuple(number[block[target]] for target in dfa.delta[representative[label]])
            for label in order
        ),
        initial=0,
        accepts=tuple(
            number[label] for label in order if representative[label] in dfa.accepts
        ),
        names=None
        if dfa.names is None
        else tuple(dfa.names[representative[label]] for label in order),
    )
    classes = tuple(
        number[block[state]] if state in block else None
        for state in range(dfa.state_count)
    )
    return minimal, classes


def minimize_dfa(dfa: Dfa) -> Dfa:
    """
    Minimal DFA accepting the same language.

    :param dfa: automaton, unreachable states are dropped first.
    :return: minimal DFA in canonical breadth-first numbering.
    """
    minimal, _ = quotient_map(dfa)
    logger.debug(f"minimized {dfa.state_count} states to {minimal.state_count}")
    return minimal


def class_sizes(dfa: Dfa) -> Vector:
    """
    Number of reachable states over every minimal state.

    :param dfa: automaton.
    :return: class sizes in canonical minimal numbering.
    """
    minimal, classes = quotient_map(dfa)
    sizes = [0] * minimal.state_count
    for label in classes:
        if label is not None:
            sizes[label] += 1
    return tuple(sizes)


def _check_alphabets(first: Dfa, second: Dfa) -> None:
    if first.alphabet != second.alphabet:
        raise QuotaSpecError(
            f"alphabets differ: {list(first.alphabet)} and {list(second.alphabet)}",
        )


def dfa_equivalent(first: Dfa, second: Dfa) -> bool:
    """
    Whether two DFAs accept the same language.

    Walks the reachable pairs of the product automaton.

    :param first: automaton.
    :param second: automaton over the same alphabet.
    :raises QuotaSpecError: when the alphabets differ.
    :return: True for equal languages.
    """
    _check_alphabets(first, second)
    start = (first.initial, second.initial)
    seen = {start}
    queue: Deque[Tuple[int, int]] = deque([start])
    while queue:
        left, right = queue.popleft()
        if (left in first.accepts) != (right in second.accepts):
            return False
        for pair in zip(first.delta[left], second.delta[right]):
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


def _shape(dfa: Dfa) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
    states = reachable_states(dfa)
    number = {state: index for index, state in enumerate(states)}
    return (
        tuple(tuple(number[target] for target in dfa.delta[state]) for state in states),
        tuple(number[state] for state in states if state in dfa.accepts),
    )


def dfa_isomorphic(first: Dfa, second: Dfa) -> bool:
    """
    Whether the connected parts of two DFAs are equal up to renaming states.

    Breadth-first numbering from the initial state is canonical for a
    connected deterministic automaton, so comparing the renumbered tables
    decides isomorphism.

    :param first: automaton.
    :param second: automaton over the same alphabet.
    :raises QuotaSpecError: when the alphabets differ.
    :return: True when isomorphic.
    """
    _check_alphabets(first, second)
    return _shape(first) == _shape(second)


def _checked_sizes(dfa: Dfa, sizes: Sequence[int]) -> Vector:
    if len(sizes) != dfa.state_count:
        raise QuotaSpecError(
            f"{len(sizes)} class sizes given for {dfa.state_count} states",
        )
    if any(size < 1 for size in sizes):
        raise QuotaSpecError("class sizes must be positive")
    return tuple(sizes)


def feasible_class_sizes(dfa: Dfa, sizes: Sequence[int]) -> bool:
    """
    Whether some connected DFA has the given class sizes over dfa.

    This is the exact achievability of the sizes as quotas with one start
    at the initial state.

    :param dfa: minimal automaton.
    :param sizes: wanted class size per state.
    :raises QuotaSpecError: on a length mismatch or a nonpositive size.
    :return: True when feasible.
    """
    sizes = _checked_sizes(dfa, sizes)
    portfolio = tuple(int(state == dfa.initial) for state in range(dfa.state_count))
    return achievable(dfa_graph(dfa), sizes, portfolio)


def expand_dfa(dfa: Dfa, sizes: Sequence[int], seed: int) -> Dfa:  # noqa: WPS210
    """
    Random connected DFA whose quotient onto dfa has the given class sizes.

    A random-discipline quota search lays out a spanning tree of the new
    states; every transition the tree leaves open gets a uniformly chosen
    state from the class dfa prescribes. The result is equivalent to dfa;
    it is not uniformly distributed over all such DFAs.

    :param dfa: minimal automaton.
    :param sizes: class size per state of dfa.
    :param seed: seed of the generator driving search and completion.
    :raises InfeasibleError: when the sizes are not feasible.
    :return: expanded automaton, state 0 initial.
    """
    if not feasible_class_sizes(dfa, sizes):
        raise InfeasibleError(f"class sizes {tuple(sizes)} are not feasible")
    sizes = tuple(sizes)
    rng = np.random.default_rng(seed)
    graph = dfa_graph(dfa)
    portfolio = tuple(int(state == dfa.initial) for state in range(dfa.state_count))
    report = quota_search(
        graph,
        sizes,
        portfolio,
        SearchConfig(discipline=Discipline.RANDOM, seed=seed),
        rng=rng,
    )
    if not report.succeeded:
        raise InfeasibleError(f"search left quota {report.residual}")

    width = len(dfa.alphabet)
    nodes = report.forest.nodes
    image = [node.image for node in nodes]
    delta: List[List[Optional[int]]] = [[None] * width for _ in nodes]
    for node in nodes:
        if node.parent is not None and node.parent_edge is not None:
            delta[node.parent][node.parent_edge % width] = node.node_id

    members: List[List[int]] = [[] for _ in range(dfa.state_count)]
    for node in nodes:
        members[node.image].append(node.node_id)
    for state, row in enumerate(delta):
        for symbol, target in enumerate(row):
            if target is None:
                candidates = members[dfa.delta[image[state]][symbol]]
                row[symbol] = candidates[int(rng.integers(len(candidates)))]

    rank = {node_id: index for group in members for index, node_id in enumerate(group)}
    expanded = Dfa(
        alphabet=dfa.alphabet,
        delta=tuple(tuple(int(target) for target in row if target is not None) for row in delta),  # noqa: E501
        initial=0,
        accepts=tuple(node.node_id for node in nodes if node.image in dfa.accepts),
        names=tuple(
            f"{dfa.state_name(node.image)}_{rank[node.node_id] + 1}" for node in nodes
        ),
    )
    logger.info(f"expanded {dfa.state_count} states to {expanded.state_count}")
    return expanded
