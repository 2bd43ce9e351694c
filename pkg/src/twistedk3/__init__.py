"""Exact lattice and stability-wall arithmetic for twisted K3 surfaces.

A workbench for the lattice side of a twisted degree-2 K3 surface: integral
quadratic forms, the extended cohomology pairing, twisted transcendental and
Picard lattices, exact central charges, and the wall/chamber bookkeeping of
the associated one-parameter stability family.  All arithmetic is exact.
"""

from .scalars import (
    ComplexQE,
    Ordering,
    Phase,
    QuadExt,
    RadicandMismatchError,
    format_quadext,
    parse_quadext,
    phase_cmp,
    qe_arith,
    qe_sign,
    rational_sqrt,
)
from .lattices import (
    E8_NEG_GRAM,
    Gram,
    Lattice,
    RepresentKind,
    RepresentVerdict,
    U_GRAM,
    direct_sum,
    full_lattice,
    gram,
    k3_gram,
    orthogonal_complement,
    rank_one,
    represents,
    signature,
    standard_gram,
    sublattice_span,
)
from .mukai import (
    BField,
    MukaiVector,
    brauer_kernel,
    exp_class,
    mukai_gram,
    mukai_pairing,
    mukai_vector,
    picard_generators,
    twist_by,
    twisted_picard,
    twisted_transcendental,
)
from .scenario import (
    CLIFFORD_EVEN_TWISTS,
    CLIFFORD_ODD_TWISTS,
    Scenario,
    ScenarioError,
    bundle_vector,
    chi_p2,
    default_scenario,
    line_vector,
    load_scenario,
    scenario_from_json,
    scenario_to_json,
    slope,
    slope_threshold,
    spherical_s,
)
from .stability import (
    AlignedChargesError,
    ChargeParams,
    catalogue,
    catalogue_wall,
    central_charge,
    chamber_report,
    charge_coeffs,
    charge_params,
    destabilizer_scan,
    epsilon_bound,
    hodge_index_check,
    im_ratio,
    re_closed_form,
    spherical_real_floor,
    wall_between,
)
from .battery import Report, ReportEntry, run_battery

__version__ = "0.1.0"
