"""Computing in W-hyperbolic, smooth hyperbolic and product metric spaces."""

from .core import (
    HalfPlane,
    PNorm,
    Point,
    Product,
    SpaceDescriptor,
    check_point,
    combine,
    dist,
    midpoint,
    pi_value,
    quasilinearize,
)
from .errors import (
    CapabilityError,
    ConfigError,
    DegenerateError,
    DomainError,
    GeometryError,
    NonconvergenceError,
    RangeError,
    SamplerError,
    ShapeError,
)
from .moduli import (
    Kind,
    Modulus,
    catalog_modulus,
    cat0_g_modulus,
    cat0_omega_modulus,
    cat0_uc_modulus,
    clarkson_uc_modulus,
    combine_g,
    combine_m,
    combine_omega,
    combine_uc,
    constant_modulus,
    g_as_m,
)
from .probes import (
    CheckReport,
    SampleSpec,
    Witness,
    check_cat0,
    check_modulus,
    check_smooth_axioms,
    check_w_axioms,
    find_witness,
    recheck_witness,
    sample_ball,
)
from .resolvent import (
    Compose,
    Constant,
    HalfPlaneIsometry,
    Identity,
    NonexpansiveMap,
    ProductMap,
    ResolventResult,
    Towards,
    apply_map,
    contraction_probe,
    lipschitz_probe,
    resolvent_path,
    solve_resolvent,
)

__version__ = "0.1.0"
