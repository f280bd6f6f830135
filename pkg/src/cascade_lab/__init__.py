"""Linear input/output analysis of weakly activated signaling cascades."""
from ._backend import BACKEND
from .model import (Cascade, DecayingExp, DesignResult, Impulse, InputMoments,
                    Peak, Rect, Sampled, SignalMetrics, Sinc, Trajectory, validate)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Cascade", "DecayingExp", "DesignResult", "Impulse",
    "InputMoments", "Peak", "Rect", "Sampled", "SignalMetrics", "Sinc",
    "Trajectory", "validate",
]
