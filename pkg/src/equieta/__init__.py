"""equieta: representation-ring arithmetic, equivariant characteristic
forms, and reduced eta invariants on explicit model geometries."""

from .groups import (
    CharacterTable,
    ClassFunction,
    FiniteGroup,
    VirtualCharacter,
    build_group,
    decompose,
    dual,
    inner_product,
    reconstruct,
    regular_character,
    table_to_csv,
    table_to_json,
    tensor,
    virtual_from_class_function,
)
from .torus import (
    KPointDescription,
    TorusElement,
    k_point,
    project,
    torus_act,
    torus_add,
    torus_distance,
    torus_equal,
)
from .clifford import (
    CliffordModule,
    EquivFactorTable,
    SpinLift,
    a_factor,
    build_clifford,
    element_factor,
    mq_thom_integral,
    spin_lift,
    supertrace,
)
from .series import (
    ChernRoot,
    ChernRootSpec,
    FormSeries,
    a_hat_series,
    ch_series,
    fixed_point_contribution,
    pfaffian_block,
    series_add,
    series_eval,
    series_invert,
    series_mul,
    series_pretty,
    spinor_difference_series,
)
from .eta import (
    ArithmeticSpectrum,
    SpectrumFamily,
    XiResult,
    spectral_flow,
    spectrum_from_json,
    spectrum_to_json,
    xi_closed_form,
    xi_reduced,
    xi_result,
    xi_smoothed_oracle,
)
from .geometry import (
    CircleGeometry,
    ProductGeometry,
    SphereGeometry,
    circle_from_quotient,
    circle_spectrum,
    cylinder_variation,
    free_pushforward,
    product_pushforward,
    sphere_index_character,
    trivial_action_decomposition,
)
from .suites import RunConfig, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
