"""Mod-2 Steenrod algebra machinery for certified Lagrangian
intersection lower bounds: admissible-basis arithmetic, forced
vanishing on Conley indices, filtered Morse homology, characteristic
classes and square-chain bound certificates."""

__version__ = "0.1.0"
