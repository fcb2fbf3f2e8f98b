"""Discrepancy modulo one, exponential-sum discrepancy bounds, and exact
finite checks of the smoothing argument behind them."""
from .bounds import (
    BoundReport,
    GaraevParams,
    InadmissibleParams,
    corollary_params,
    erdos_turan_rhs,
    garaev_W,
    leveque_bound,
    montgomery_rhs,
    optimize_params,
    remark_ratio,
)
from .discrepancy import Interval, count_in_interval, extreme_discrepancy, star_discrepancy
from .expsums import ExpSumTable, exp_sum, exp_sum_table, geometric_sum
from .sequences import RationalSequence, SequencePoints, SequenceSpec, generate

__version__ = "0.1.0"
