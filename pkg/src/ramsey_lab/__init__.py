"""ramsey_lab: exact bounds, constructions and random-host experiments
for linear-size Ramsey results on cycle families."""

__version__ = "0.1.0"
