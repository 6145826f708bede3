"""Exact computations with tilting complexes over quiver algebras with relations,
and with G-graded derived equivalences of skew group algebras."""
from .exact import GF, QQ, Field, FpElement, Matrix
from .algebra import FiniteAlgebra, IdempotentLiftFailure, NonSplitQuotient
from .quiver import (Automorphism, GroupAction, InfiniteDimensional, InfiniteGroup,
                     MalformedRelation, PathAlgebra, Quiver, SkewGroupAlgebra)
from .modules import (Inconclusive, ModuleMap, Representation, hom_dim, hom_space, injective,
                      is_isomorphic, is_self_injective, nakayama_module, nakayama_permutation,
                      projective, projective_cover, simple, syzygy, twist)
from .complexes import (ChainMap, ComplexInconclusive, ProjComplex, cone, decompose, derived_hom,
                        direct_sum, hom_homotopy, hom_total_complex, iso_complex, minimize,
                        nakayama_complex, projective_resolution, shift, summand_inventory,
                        twist_complex)
from .tilting import (ConditionFails, GenerationUndecided, HypothesisFails, OrthogonalityFails,
                      SearchExhausted, TiltingReport, abe_hoshino_complete, check_conditions,
                      construct_orthogonal, dg_endo_cohomology, endomorphism_algebra,
                      require_tilting, verify_tilting)
from .graded import (graded_tilting_direct, graded_tilting_via_identity_component, invariance,
                     okuyama_precheck)
from .specfile import ParseError, SpecFile, load, parse_spec, serialize_spec

__version__ = "0.1.0"
