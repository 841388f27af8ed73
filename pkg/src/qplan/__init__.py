"""Conditional planning via quantified Boolean formulae: domain model,
plan encodings, a QDPLL solver, plan extraction/simulation/verification,
benchmark generators and a command-line workbench."""

__version__ = "0.1.0"
