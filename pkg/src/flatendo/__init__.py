"""Exact computations with affine maps of flat (infra-abelian) manifolds."""
from .affine import AffineMap, compose, inverse
from .endo import (
    EndoStatus,
    SpectralClass,
    classify_spectrum,
    conjugation_endo,
    fixed_point,
    hirsch_check,
    holonomy_image_check,
    linearize_at_fixed_point,
    realize_endo,
    well_defined_witness,
)
from .errors import FlatendoError, InputError, InvariantViolation
from .io import group_from_json, group_to_json, load_group, load_map
from .group import CrystGroup, GroupElement, build_group, center_lattice, member, orbit_equal, torsion_witness
from .linalg import Matrix, char_poly, solve_exact
from .poly import Poly
from .quotient import FinAbGroup, QuotientMap, abelianization, finite_quotient, induced_on_quotient
from .search import ObstructionReport, enumerate_candidates, obstruction_search
from .snf import integer_kernel, integer_solve, smith_normal_form

__version__ = "0.1.0"
