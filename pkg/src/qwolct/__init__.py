"""Two-sided quaternion offset linear canonical transforms and their windowed form."""
from .errors import *  # noqa: F401,F403
from .grid import GridSpec, QField, inner, l2_norm, modulate, pairwise_sum, parity, shift
from .kernel import OlctParams
from .qolct import (
    FreqGrid,
    QSpectrum,
    plancherel_ratio,
    qolct,
    qolct_degenerate,
    qolct_forward,
    qolct_forward_fast,
    qolct_inverse,
)
from .qwolct import (
    CoeffTensor,
    WindowSpec,
    analyze,
    check_linearity,
    check_modulation,
    check_parity,
    check_time_shift,
    check_window_shift,
    coeff_inner,
    energy,
    streamed_energy,
    synthesize,
)

__version__ = "0.1.0"
