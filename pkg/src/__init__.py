"""
boxkit - pedestrian detection toolkit

Anchor generation, soft-label anchor assignment with adaptive
(visible/full) matching, the Center-IoU regression loss, Cosine-NMS and
Caltech-style miss-rate evaluation.
"""

__version__ = "0.1.0"
