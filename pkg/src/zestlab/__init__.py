"""zestlab: twisted doubles of Z_q x Z_p, their link invariants, and cyclic zesting."""
from __future__ import annotations

from .cyclotomic import CycMatrix, CycNum, arith, conjugate, root_of_unity, to_complex
from .group import GroupElem, GroupSpec, conjugacy_classes, irreps_of_G, make_group, projective_irrep
from .twisted_double import (ModularData, SimpleLabel, check_modularity, enumerate_simples, modular_data,
                             omega, s_matrix, t_matrix, theta_cochain, verlinde_fusion)

__version__ = "0.1.0"
