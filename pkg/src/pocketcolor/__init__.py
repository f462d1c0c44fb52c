"""pocketcolor: list-coloring via deletable pockets, with a LOCAL-model simulator."""

__version__ = "0.1.0"
