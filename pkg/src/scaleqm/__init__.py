"""Scaled complex-number structures and their quantum mechanics on grids.

The package has three layers:

* algebra of scale-labelled numbers and vectors (:mod:`scaleqm.scaled_numbers`,
  :mod:`scaleqm.scaled_hilbert`);
* scaling fields over periodic grids and the single-/n-particle operators
  they modify (:mod:`scaleqm.scaling_field`, :mod:`scaleqm.single_particle`,
  :mod:`scaleqm.multi_particle`);
* named numerical check suites and a CLI that runs them and writes
  deterministic CSV/JSON reports (:mod:`scaleqm.checks`, :mod:`scaleqm.cli`).
"""

from .errors import (
    ContractError,
    EigensolverError,
    FieldConstructionError,
    GridMismatchError,
    InvalidScaleError,
    NotAMemberError,
    PeriodicityError,
    ResourceLimitError,
    ScaleQMError,
)
from .scaled_numbers import (
    REFERENCE_SCALE,
    NaturalSubset,
    ScaledNumber,
    StructureScale,
    corresponding_number,
    natural_subset_value,
    project_conj,
    project_div,
    project_mul,
    rescale_value,
    value_map,
)
from .scaled_hilbert import (
    ScaledVector,
    corresponding_vector,
    project_inner,
    project_scalar_mul,
)
from .scaling_field import (
    FIELD_PRESETS,
    Grid,
    ScalingField,
    build_field,
    compose_scale,
    connection_factor,
    load_gamma_table,
    multi_rho,
    preset_field,
)
from .single_particle import (
    PhysicalParams,
    PotentialField,
    WavePacket,
    build_hamiltonian,
    eigen_pairs,
    eigen_spectrum,
    gaussian_packet,
    kinetic_apply,
    match_spectra,
    momentum_apply,
    momentum_representation,
    plane_wave_packet,
    positive_sign_params,
    scale_packet,
    well_potential,
    zero_potential,
)
from .multi_particle import (
    CoalescenceReport,
    EntangledState,
    ParticleMasses,
    coalesce_check,
    exchange,
    kinetic_apply_n,
    product_state,
    scale_entangled,
    slater_state,
    total_momentum_apply,
)
from .checks import CheckResult, run_axioms, run_entangled, run_momentum, run_single, run_spectrum

__version__ = "0.1.0"
