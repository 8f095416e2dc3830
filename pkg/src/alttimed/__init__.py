"""Two-way one-clock alternating timed automata, PnEMTL and GQMSO with exact
semantics, the interval-word abstraction and translations between them."""

__version__ = "0.1.0"
