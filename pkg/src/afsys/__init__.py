"""Finite-model engine for affine spaces, systems, and institutions."""

__version__ = "0.1.0"

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    PROFILES,
    Signature,
    check_laws,
    enumerate_homs,
    is_homomorphism,
    make_algebra,
)
from .errors import (
    AfsysError,
    BudgetExceededError,
    DirectionalityError,
    MalformedMapError,
    SignatureMismatchError,
    VacuousFamilyError,
)
from .topology import (
    AffineSpace,
    AffineSystem,
    AffineTheory,
    SystemMorphism,
    is_separated,
    is_space,
    is_system,
    vickers_axiom_check,
)
from .functors import (
    TheoryMorphism,
    afsys_apply,
    counit_eps,
    counit_system,
    e_loc,
    e_space,
    loc,
    pt,
    spat,
    variable_basis_coproduct_gap,
)
from .institutions import (
    AffineInstitution,
    ElementaryInstitution,
    InstitutionMorphism,
    check_elementary,
    check_inst_morphism,
    entailment_closure,
    geo,
    spatial_completion,
    theory_lattice,
    theory_system,
)
from .dsl import Workspace, parse, parse_file, print_workspace
from .report import EntityReport, emit_report
