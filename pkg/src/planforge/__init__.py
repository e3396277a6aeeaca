"""Floor-plan generation, thermal assessment and EnergyPlus input synthesis."""

__version__ = "0.1.0"
