"""Directional statistics on spheres and rotations.

Library layers: ``special`` (Bessel machinery), ``geometry`` (charts, maps,
projections), ``distributions`` (density family), ``estimation`` (fits and
the mean-direction test), ``wrapped`` (wrapped tangent laws), ``sampling``
(seeded generators), and ``cli`` (the batch front end).
"""

from .distributions import (
    FiducialSpec,
    SampleSummary,
    VmfParams,
    axial_suff_stat_density,
    bingham_log_density,
    bingham_normalizer,
    fiducial_conditional_density,
    fisher_colatitude_density,
    matrix_fisher_log_density,
    matrix_fisher_normalizer,
    suff_stat_density,
    suff_stat_polynomial,
    vmf_log_density,
)
from .errors import (
    ConvergenceError,
    DegenerateDataError,
    MissingDataError,
    ParseError,
    SphstatsError,
)
from .estimation import (
    AxialFitResult,
    FitMethod,
    FitResult,
    MeanDirectionTest,
    fit_axial_mle,
    fit_fisher_known_axis,
    fit_fisher_known_pole,
    fit_mle,
    fit_sme,
    summarize,
    test_mean_direction,
)
from .geometry import (
    PolarAngles,
    RotationElement,
    angle_between,
    axis_representative,
    exp_map_sphere,
    from_polar,
    lambert_project,
    log_map_sphere,
    quat_to_rotation,
    rotation_to_quat,
    to_polar,
    unit_vector,
)
from .sampling import (
    SeededStream,
    sample_haar_so3,
    sample_uniform_sphere,
    sample_vmf,
    sample_wrapped_sphere,
)
from .special import (
    bessel_i,
    cos_marginal_normalizer,
    inverse_mean_resultant,
    log_bessel_i,
    mean_resultant_fn,
    vmf_log_normalizer,
)
from .wrapped import (
    ModeDiagnostics,
    WrappedSpec,
    WrappedValue,
    mode_count,
    wrapped_circle_density,
    wrapped_colatitude_density,
    wrapped_so3_density,
    wrapped_sphere_density,
)

__version__ = "0.1.0"
