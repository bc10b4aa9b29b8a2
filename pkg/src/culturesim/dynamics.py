"""One synchronous round of invention, imitation and learning."""

from __future__ import annotations

import enum
import random
from collections.abc import Sequence

from .model import N_PARTS, Action, Agent, World, fitness, neighbors

DEFAULT_EPSILON = 0.1


class Decision(enum.Enum):
    INVENT = "invent"
    IMITATE = "imitate"


def decide(agent: Agent, rng: random.Random) -> Decision:
    # exactly one draw, whatever p_invent is
    return Decision.INVENT if rng.random() < agent.p_invent else Decision.IMITATE


def n_changed(r_change: float) -> int:
    """Number of components an invention rewrites."""
    return max(1, round(r_change * N_PARTS))


def invent(agent: Agent, rng: random.Random, epsilon: float = DEFAULT_EPSILON) -> Action:
    """Rewrite ``n_changed(r_change)`` distinct components of the agent's action.

    Each chosen component moves to one of its two other values, picked with
    probability proportional to ``knowledge + epsilon``. The agent is not
    modified.
    """
    action = list(agent.current_action)
    q = agent.knowledge.q
    for i in rng.sample(range(N_PARTS), n_changed(agent.r_change)):
        old = action[i]
        a, b = [v for v in (-1, 0, 1) if v != old]
        wa = q[i][a + 1] + epsilon
        wb = q[i][b + 1] + epsilon
        action[i] = a if rng.random() * (wa + wb) < wa else b
    return tuple(action)


def candidate_pool(world: World, agent_id: int, actions: Sequence[Action] | None = None) -> list[tuple[int, Action]]:
    """Actions visible to an agent: its four neighbours, plus the leader when
    broadcasting. ``actions`` is the iteration-start snapshot (defaults to the
    world's current actions)."""
    if actions is None:
        actions = world.actions()
    ids = neighbors(world, agent_id)
    if world.broadcast_enabled and world.leader_id is not None and agent_id != world.leader_id:
        if world.leader_id not in ids:
            ids.append(world.leader_id)
    return [(i, actions[i]) for i in ids]


def imitate(agent: Agent, pool: Sequence[tuple[int, Action]]) -> Action:
    """Copy the fittest candidate if it strictly beats the agent's own action.

    Ties between candidates go to the lowest agent id.
    """
    if not pool:
        raise ValueError("candidate pool is empty")
    best_id, best_action = None, None
    best_fit = agent.current_fitness
    for cid, action in sorted(pool, key=lambda c: c[0]):
        f = fitness(action)
        if f > best_fit:
            best_id, best_action, best_fit = cid, action, f
    return agent.current_action if best_id is None else best_action


def update_knowledge(agent: Agent, observations: Sequence[tuple[Action, float]]) -> Agent:
    """Fold observed (action, fitness) pairs into the agent's knowledge, in order."""
    for action, value in observations:
        agent.knowledge.observe(action, value)
    return agent


def step(world: World) -> World:
    """Advance the world one iteration, in place.

    Every agent reads the iteration-start actions; new actions are committed
    together once all agents have chosen. Agents act, and draw from the
    random stream, in id order.
    """
    snapshot = world.actions()
    fits = [a.current_fitness for a in world.agents]
    rng = world.rng
    chosen: list[Action] = []
    decisions: list[Decision] = []
    for agent in world.agents:
        pool = candidate_pool(world, agent.id, snapshot)
        decision = decide(agent, rng)
        decisions.append(decision)
        if decision is Decision.INVENT:
            new = invent(agent, rng, world.epsilon)
        else:
            new = imitate(agent, pool)
        observations = [(a, fits[i]) for i, a in pool]
        observations.append((new, fitness(new)))
        update_knowledge(agent, observations)
        chosen.append(new)
    for agent, action in zip(world.agents, chosen):
        agent.set_action(action)
    world.last_decisions = decisions
    world.iteration += 1
    return world
