"""Correlated spiral imaging: OAM transition amplitudes, joint spectra and reconstructions."""

from .amplitudes import (
    AmplitudeTable, QuadratureGrid, build_grid, compute_amplitude, compute_table, gram_matrix,
)
from .detection import RecoveredAmplitude, SinglesRates, invert_rates, simulate_counts, singles_rates
from .errors import (
    CsiError, DegenerateDistributionError, InconsistentRatesError, PgmError, ResourceLimitError,
    UndefinedCorrelationError,
)
from .experiments import (
    RotationTrialConfig, centered_catalog, rotational_insensitivity, silhouette, symmetry_audit,
    translation_sweep,
)
from .imaging import image_error, phase_spectrum, reconstruct
from .modes import BeamGeometry, ModeIndex, laguerre, mode_field, normalization
from .scene import SceneTransform, TransmissionMap, load_raster, make_shape, save_raster
from .spectra import SpdcSource, joint_spectrum, marginals, mutual_information, zero_diagonal

__version__ = "0.1.0"
