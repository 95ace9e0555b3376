"""jumpctl: irreversible-investment controls under jump sensors.

Simulates compound Poisson reward paths, calibrates the optimal investment
barriers for the predictable / threshold-sensor / perfect-sensor information
regimes, builds the resulting ladlag controls, and values them by Monte
Carlo.
"""

__version__ = "0.1.0"

from .barrier import (
    NEG_INF,
    BarrierQuery,
    BarrierTable,
    build_table,
    optional_barrier,
    predictable_barrier,
    resolve_regime,
    sensor_barrier,
)
from .calibration import (
    Constants,
    EstimationError,
    McConfig,
    McEstimate,
    SampleBank,
    SensorConstants,
    calibrate_constants,
    compute_b,
    compute_b_running_sup,
    hitting_functional,
    make_bank,
    optional_functional,
    sample_T0,
    sensor_constants,
)
from .control import (
    BarrierPath,
    LadlagControl,
    barrier_path,
    constant_control,
    running_sup_control,
    toy_control,
)
from .integral import (
    PiecewisePath,
    TwoArgFixture,
    ValueReport,
    cadlag_approximation,
    closed_form_value,
    cs_integral,
    fubini_check,
    lower_star_integral,
    star_integral,
    star_integral_tail,
    truncate_control,
    value_of_control,
)
from .paths import (
    EventPath,
    JumpLaw,
    ModelParams,
    PathBatch,
    RiskAtoms,
    discrete_law,
    gaussian_mixture_law,
    reward_at,
    risk_atoms,
    simulate_batch,
    simulate_path,
    uniform_law,
)
from .sensor import (
    ETA_OPTIONAL,
    ETA_PREDICTABLE,
    ObservedPath,
    SensorSpec,
    failure_prob,
    observe,
    projected_reward,
)
from .toy import ToyConfig, toy_sweep, toy_value_exact, toy_value_mc
