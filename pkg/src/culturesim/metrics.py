"""Society-level measurements taken from a world snapshot."""

from __future__ import annotations

from dataclasses import dataclass

from .model import World


@dataclass(frozen=True)
class IterationStats:
    iteration: int
    mean_fitness: float
    diversity: int
    best_fitness: float
    leader_action_share: float


def mean_fitness(world: World) -> float:
    return sum(a.current_fitness for a in world.agents) / world.n_agents


def diversity(world: World) -> int:
    """Number of distinct actions currently implemented."""
    return len({a.current_action for a in world.agents})


def best_fitness(world: World) -> float:
    return max(a.current_fitness for a in world.agents)


def leader_action_share(world: World) -> float:
    """Fraction of agents (leader included) doing exactly what the leader does; 0 without a leader."""
    leader = world.leader
    if leader is None:
        return 0.0
    target = leader.current_action
    return sum(a.current_action == target for a in world.agents) / world.n_agents


def collect(world: World) -> IterationStats:
    return IterationStats(
        iteration=world.iteration,
        mean_fitness=mean_fitness(world),
        diversity=diversity(world),
        best_fitness=best_fitness(world),
        leader_action_share=leader_action_share(world),
    )
