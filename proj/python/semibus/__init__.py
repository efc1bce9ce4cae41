"""Semi-dynamic bus routing engine.

The heavy lifting lives in the C++ extension; this package re-exports it.

    from semibus import Engine

    engine = Engine.build("events.csv", "stations.csv", "schedule.csv",
                          "shortcuts.csv", "boardings.csv")
    route = engine.propose("07:30", t_p=25, pa_min=0.8, sims=100, seed=7)
"""

from ._core import Engine, SemibusError, __version__

__all__ = ["Engine", "SemibusError", "__version__"]
