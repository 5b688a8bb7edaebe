"""Search for symmetric GF(2) rank decompositions of matrix-multiplication
tensors by compiling existence questions to CNF-SAT."""

__version__ = "0.1.0"
