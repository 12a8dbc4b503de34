"""Deterministic, seedable AI-race wargame engine.

Four teams (two states, two AI corporations) race through a two-lane tech
tree toward radically transformative AI under a commit-reveal turn loop,
playable by scripted agents, hot-seat humans or distributed teams through
the bundled session server.
"""

__version__ = "0.1.0"
