"""Computable embedding and norm theory for free Banach lattices over
finite distributive lattices.

The package decides, with constructive witnesses, whether a sublattice pair
is complemented, locally complemented, or has the homomorphism-extension
property; computes certified lower and factor-2 upper bounds for the
free-Banach-lattice norm of lattice expressions and radial functions; and
ships quantitative reproduction suites for two counterexample pairs.
"""

from .errors import (EpsilonOutOfRange, GeneratorNotInSublattice,
                     LatticeError, LatticeNotBounded, NonMonotoneValues,
                     NotALattice, NotDistributive, NotLocallyComplemented,
                     SizeCapExceeded)
from .lattice import (BirkhoffEmbedding, FiniteLattice, Sublattice,
                      birkhoff_embed, bound_extension, build_lattice, chain,
                      diamond, enumerate_sublattices, is_chain, is_filter,
                      is_ideal, lattice_from_json, lattice_to_json,
                      lattices_isomorphic, product, sublattice_closure,
                      to_dot)
from .homs import (ChainColoring, RealHom, VectorHom, coloring_from_json,
                   coloring_to_json, enumerate_chain_colorings,
                   extend_coloring, extend_real_hom, extension_colorings,
                   radial_decompose, real_hom_from_json, real_hom_to_json,
                   realize_hom, restrict_and_normalize)
from .embeddings import (EmbeddingReport, ExtensionPropertyReport,
                         LocalComplementReport, analyze_pair,
                         explore_l1n_extension, extend_vector_hom,
                         extension_property, extension_property_bruteforce,
                         fast_path_loc_comp, find_retraction,
                         local_complement_check, random_vector_hom,
                         validate_local_witness)
from .expressions import (Expr, Gen, Join, Meet, Scale, Sum, eval_expr,
                          format_sexpr, parse_sexpr)
from .norms import (AdmissibleTuple, ExpressionFunction, LowerBound,
                    NormEstimate, RadialFunction, RestrictedFunction,
                    SearchParams, admissibility, estimate_norm, evaluate,
                    expression_function, grid_oracle_norm, lower_bound,
                    push_forward, search_lower_bound, supnorm_K, upper_bound)
from .gridpair import (GridPairFixture, build_gap_fixture, build_grid_pair,
                       sample_neighborhood_homs)
from .repro import CheckResult, ReproReport, repro_diamond_pair, repro_grid_pair

__version__ = "0.1.0"
