"""Action space, fitness landscape, agents and the grid world."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .config import RunConfig

N_PARTS = 6
BODY_PARTS = ("head", "left_arm", "right_arm", "left_leg", "right_leg", "hips")
VALUES = (-1, 0, 1)
STILL: tuple[int, ...] = (0,) * N_PARTS
MAX_FITNESS = 10.0

HEAD, LEFT_ARM, RIGHT_ARM, LEFT_LEG, RIGHT_LEG, HIPS = range(N_PARTS)

Action = tuple[int, ...]


def validate_action(action) -> Action:
    action = tuple(int(v) for v in action)
    if len(action) != N_PARTS:
        raise ValueError(f"action must have {N_PARTS} components, got {len(action)}")
    if any(v not in VALUES for v in action):
        raise ValueError(f"action components must be in {{-1, 0, 1}}: {action}")
    return action


def _score(a: Action) -> float:
    score = sum(abs(v) for v in a)
    if a[LEFT_ARM] != 0 and a[LEFT_ARM] == -a[RIGHT_ARM]:
        score += 2
    if a[LEFT_LEG] != 0 and a[LEFT_LEG] == -a[RIGHT_LEG]:
        score += 2
    return float(score)


def all_actions() -> list[Action]:
    """Every action, ordered by ternary encoding (-1 < 0 < +1, head most significant)."""
    return list(itertools.product(VALUES, repeat=N_PARTS))


# 729 entries; lookups dominate the inner loop of a run.
_FITNESS: dict[Action, float] = {a: _score(a) for a in all_actions()}


def fitness(action: Action) -> float:
    """Effectiveness of an action: one point per moving part, plus 2 for each
    anti-symmetric limb pair (arms, legs). Still scores 0, the maximum is 10."""
    try:
        return _FITNESS[action]
    except KeyError:
        return _FITNESS[validate_action(action)]


class KnowledgeTable:
    """Running fitness estimate per (component, value).

    ``q[i][v + 1]`` tracks how effective value ``v`` at component ``i`` has
    looked in observed actions.
    """

    __slots__ = ("q", "alpha")

    def __init__(self, alpha: float = 0.1):
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {alpha}")
        self.alpha = alpha
        self.q = [[0.0, 0.0, 0.0] for _ in range(N_PARTS)]

    def get(self, component: int, value: int) -> float:
        return self.q[component][value + 1]

    def observe(self, action: Action, value: float) -> None:
        alpha = self.alpha
        for row, v in zip(self.q, action):
            k = v + 1
            row[k] += alpha * (value - row[k])

    def copy(self) -> KnowledgeTable:
        other = KnowledgeTable(self.alpha)
        other.q = [row[:] for row in self.q]
        return other

    def __eq__(self, other):
        if not isinstance(other, KnowledgeTable):
            return NotImplemented
        return self.alpha == other.alpha and self.q == other.q

    def __repr__(self):
        return f"KnowledgeTable(alpha={self.alpha}, q={self.q})"


@dataclass(eq=True)
class Agent:
    id: int
    row: int
    col: int
    p_invent: float
    r_change: float
    knowledge: KnowledgeTable
    current_action: Action = STILL
    current_fitness: float = 0.0
    is_leader: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p_invent <= 1.0:
            raise ValueError(f"p_invent must be in [0, 1], got {self.p_invent}")
        if not 0.0 < self.r_change <= 1.0:
            raise ValueError(f"r_change must be in (0, 1], got {self.r_change}")

    def set_action(self, action: Action) -> None:
        self.current_action = action
        self.current_fitness = fitness(action)


@dataclass
class World:
    width: int
    height: int
    agents: list[Agent]
    broadcast_enabled: bool
    rng: random.Random = field(compare=False, repr=False)
    leader_id: int | None = None
    iteration: int = 0
    epsilon: float = 0.1
    # id-indexed decisions of the most recent step, for inspection
    last_decisions: list = field(default_factory=list, compare=False, repr=False)
    _neighbors: list[list[int]] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        self._neighbors = [
            [
                self.agent_id(r - 1, c),
                self.agent_id(r + 1, c),
                self.agent_id(r, c - 1),
                self.agent_id(r, c + 1),
            ]
            for r, c in (divmod(i, self.width) for i in range(self.width * self.height))
        ]

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def leader(self) -> Agent | None:
        return None if self.leader_id is None else self.agents[self.leader_id]

    def agent_id(self, row: int, col: int) -> int:
        return (row % self.height) * self.width + (col % self.width)

    def actions(self) -> list[Action]:
        return [a.current_action for a in self.agents]


def neighbors(world: World, agent_id: int) -> list[int]:
    """Toroidal von Neumann neighbours in the order north, south, west, east."""
    if not 0 <= agent_id < world.n_agents:
        raise IndexError(f"agent id {agent_id} out of range")
    return list(world._neighbors[agent_id])


def new_world(config: RunConfig) -> World:
    """Everyone standing still with blank knowledge; the leader, if any, is
    the first draw from the run's random stream."""
    config.validate()
    rng = random.Random(config.seed)
    n = config.width * config.height
    leader_id = rng.randrange(n) if config.broadcast_enabled else None
    agents = []
    for i in range(n):
        lead = i == leader_id
        r, c = divmod(i, config.width)
        agents.append(
            Agent(
                id=i,
                row=r,
                col=c,
                p_invent=config.leader_p_invent if lead else config.follower_p_invent,
                r_change=config.leader_r_change if lead else config.follower_r_change,
                knowledge=KnowledgeTable(config.alpha),
                is_leader=lead,
            )
        )
    return World(
        width=config.width,
        height=config.height,
        agents=agents,
        broadcast_enabled=config.broadcast_enabled,
        rng=rng,
        leader_id=leader_id,
        epsilon=config.epsilon,
    )
