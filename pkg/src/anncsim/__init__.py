"""anncsim: deterministic simulator of a hybrid-plasticity neuromorphic core.

Subpackages cover the analog-core building blocks (neurons, synapse array,
synapse drivers), the timed playback executor driving a simulated chip, the
plasticity engine with the reward-modulated learning kernel, a Monte-Carlo
offset-calibration workflow, and interface-timing checks.
"""

__version__ = "0.1.0"
