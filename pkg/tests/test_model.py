import random

import pytest
from hypothesis import given, strategies as st

from culturesim import RunConfig, all_actions, fitness, neighbors, new_world
from culturesim.model import STILL, KnowledgeTable, validate_action

from oracle import reference_table

actions = st.tuples(*[st.sampled_from((-1, 0, 1))] * 6)


def test_fitness_examples():
    assert fitness((0, 0, 0, 0, 0, 0)) == 0
    assert fitness((1, 1, -1, 1, -1, 1)) == 10
    assert fitness((0, 1, 1, 0, 0, 0)) == 2


def test_fitness_matches_brute_force():
    table = reference_table()
    assert len(table) == 729
    for action, expected in table:
        assert fitness(action) == expected, action


def test_landscape_extremes():
    values = [fitness(a) for a in all_actions()]
    assert min(values) == 0 and max(values) == 10
    assert values.count(10) == 16
    assert values.count(0) == 1
    assert fitness(STILL) == 0


@given(actions)
def test_fitness_is_pure_and_bounded(a):
    assert 0 <= fitness(a) <= 10
    assert fitness(a) == fitness(tuple(a))


@pytest.mark.parametrize("bad", [(0,) * 5, (0, 0, 0, 0, 0, 2), (0,) * 7])
def test_invalid_actions_rejected(bad):
    with pytest.raises(ValueError):
        validate_action(bad)
    with pytest.raises(ValueError):
        fitness(bad)


def test_all_actions_ternary_order():
    acts = all_actions()
    assert acts[0] == (-1,) * 6
    assert acts[364] == STILL
    assert acts[-1] == (1,) * 6
    assert len(set(acts)) == 729


def test_new_world_defaults():
    w = new_world(RunConfig(seed=123))
    assert w.n_agents == 100
    assert all(a.current_action == STILL and a.current_fitness == 0 for a in w.agents)
    assert all(row == [0.0, 0.0, 0.0] for a in w.agents for row in a.knowledge.q)
    assert len({a.current_action for a in w.agents}) == 1
    assert w.iteration == 0
    assert w.leader_id is None
    assert not any(a.is_leader for a in w.agents)


def test_new_world_with_leader():
    cfg = RunConfig(broadcast_enabled=True, leader_p_invent=0.9, leader_r_change=1.0, seed=7)
    w = new_world(cfg)
    leaders = [a for a in w.agents if a.is_leader]
    assert len(leaders) == 1 and leaders[0].id == w.leader_id
    assert leaders[0].p_invent == 0.9 and leaders[0].r_change == 1.0
    assert all(a.p_invent == cfg.follower_p_invent for a in w.agents if not a.is_leader)
    assert new_world(cfg).leader_id == w.leader_id


def test_leader_choice_is_spread_over_grid():
    ids = {new_world(RunConfig(broadcast_enabled=True, seed=s)).leader_id for s in range(300)}
    assert len(ids) > 80


def test_new_world_is_reproducible():
    cfg = RunConfig(broadcast_enabled=True, seed=99)
    assert new_world(cfg) == new_world(cfg)


def test_neighbors_wrap_around():
    w = new_world(RunConfig())
    assert neighbors(w, w.agent_id(0, 0)) == [
        w.agent_id(9, 0),
        w.agent_id(1, 0),
        w.agent_id(0, 9),
        w.agent_id(0, 1),
    ]


@pytest.mark.parametrize("width,height", [(10, 10), (3, 3), (7, 4), (5, 12)])
def test_neighbor_relation_is_4_regular_and_symmetric(width, height):
    w = new_world(RunConfig(width=width, height=height))
    for i in range(w.n_agents):
        nb = neighbors(w, i)
        assert len(set(nb)) == 4
        assert i not in nb
        for j in nb:
            assert i in neighbors(w, j)


def test_neighbors_rejects_bad_id():
    w = new_world(RunConfig())
    with pytest.raises(IndexError):
        neighbors(w, 100)


def test_knowledge_table_update():
    k = KnowledgeTable(alpha=0.1)
    k.observe(STILL, 0.0)
    assert k.q == [[0.0] * 3 for _ in range(6)]
    a = (1, 1, -1, 1, -1, 1)
    k.observe(a, 10.0)
    for i, v in enumerate(a):
        assert k.get(i, v) == pytest.approx(1.0)
    assert k.get(0, 0) == 0.0


def test_knowledge_alpha_range():
    with pytest.raises(ValueError):
        KnowledgeTable(alpha=0.0)
