"""Minimal extension sheaves and piecewise polynomial functions on rational fans."""

from .fan import (Cone, Fan, FanError, Subfan, boundary_fan, is_complete, is_purely_top,
                  is_simplicial, skeleton, star_complement, subfan_as_fan)
from .fanio import parse_fan, parse_plf, serialize_fan, serialize_plf
from .mes import (MESAtlas, TruncationWarning, build_mes, corrupt_atlas, dump_atlas, global_E_dims,
                  global_ih_dims, is_equivariantly_formal, local_poincare, restriction_consistency,
                  torsion_witness, verify_axioms)
from .poly import Poly, substitute
from .sections import (PLF, PiecewiseSection, PoincareVector, SRPresentation, courant_basis,
                       lift_fan_by_plf, mayer_vietoris_coker, mod_m_dims, multiply, sections_A,
                       sr_hilbert, sr_presentation, sr_quotient_hilbert)
