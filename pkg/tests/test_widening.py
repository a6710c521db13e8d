import itertools

from helpers import chain_leq, chain_widen, escalating_chain_tree, grid_intervals, walk
from widenkit import (
    BOTTOM,
    CONVERGED,
    POS_INF,
    Converged,
    Interval,
    Next,
    classic_to_tree,
    interval_leq,
    interval_widen_brutal,
    make_node,
    singleton,
    step,
)


class TestMakeNode:
    def test_terminal_node_always_converges(self):
        terminal = make_node(POS_INF, lambda v: CONVERGED)
        assert terminal.proposal is POS_INF
        for v in (1, 5, POS_INF):
            assert isinstance(step(terminal, v), Converged)

    def test_dishonest_node_is_constructible_but_detectable(self):
        # nothing stops the construction; the walker's leaf check flags it
        broken = make_node(singleton(0), lambda v: CONVERGED)
        answer = step(broken, Interval(0, 9))
        assert isinstance(answer, Converged)
        assert not interval_leq(Interval(0, 9), broken.proposal)

    def test_chain_escalation(self):
        tree = escalating_chain_tree()
        mid = step(tree, 2)
        assert isinstance(mid, Next) and mid.node.proposal == 3
        after = step(mid.node, 4)
        assert isinstance(after, Next) and after.node.proposal is POS_INF


class TestClassicToTree:
    def test_brutal_interval_step(self):
        root = classic_to_tree(interval_widen_brutal, interval_leq, singleton(0))
        answer = step(root, Interval(0, 1))
        assert isinstance(answer, Next)
        assert answer.node.proposal == Interval(0, POS_INF)

    def test_converges_on_own_label(self):
        root = classic_to_tree(interval_widen_brutal, interval_leq, singleton(0))
        assert isinstance(step(root, singleton(0)), Converged)

    def test_chain_operator(self):
        root = classic_to_tree(chain_widen, chain_leq, 1)
        answer = step(root, 2)
        assert isinstance(answer, Next)
        assert answer.node.proposal is POS_INF


class TestStepContract:
    def test_purity_same_query_same_answers(self):
        root = classic_to_tree(interval_widen_brutal, interval_leq, singleton(0))
        seq = [Interval(0, 1), Interval(-2, 1), singleton(0)]
        done1, props1, _ = walk(root, seq, interval_leq)
        done2, props2, _ = walk(root, seq, interval_leq)
        assert done1 == done2
        assert props1 == props2

    def test_fig_tree_root_steps(self):
        tree = escalating_chain_tree()
        first = step(tree, 2)
        assert isinstance(first, Next) and first.node.proposal == 3
        again = step(tree, 2)
        assert isinstance(again, Next) and again.node.proposal == 3


class TestTerminationAtDeskScale:
    def test_brutal_tree_converges_within_three_queries(self):
        # three queries from any interval root; bottom roots burn one extra
        # query absorbing the first value
        grid = grid_intervals(1)  # endpoints {-inf, -1..1, +inf}
        for start in grid:
            root = classic_to_tree(interval_widen_brutal, interval_leq, start)
            limit = 4 if start is BOTTOM else 3
            for seq in itertools.product(grid, repeat=limit):
                converged, _, consumed = walk(root, seq, interval_leq)
                assert converged, f"no convergence from {start!r} on {seq!r}"
                assert len(consumed) <= limit

    def test_classic_labels_ascend(self):
        # when the operator keeps its first argument below the result, path
        # labels ascend along any query sequence
        grid = grid_intervals(1)
        root = classic_to_tree(interval_widen_brutal, interval_leq, BOTTOM)
        for seq in itertools.product(grid, repeat=3):
            _, props, _ = walk(root, seq, interval_leq)
            for earlier, later in zip(props, props[1:]):
                assert interval_leq(earlier, later)
