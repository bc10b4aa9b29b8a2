"""Agent-based model of cultural evolution with a broadcasting leader."""

from .config import ConfigError, RunConfig, parse_config
from .dynamics import Decision, candidate_pool, decide, imitate, invent, step, update_knowledge
from .metrics import IterationStats, collect, diversity, mean_fitness
from .model import STILL, Agent, KnowledgeTable, World, all_actions, fitness, neighbors, new_world

__version__ = "0.1.0"
