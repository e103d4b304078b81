"""cqgkit: exact symbolic workbench for compact quantum groups at the
Hopf *-algebra level."""

__version__ = "0.1.0"
