"""Matchings between subsets of groups and between subspaces of algebras.

Group side: bijections f from A to B with a*f(a) never landing back in A,
their multiplicity functions, acyclicity, coset obstructions, matchings of
tuples relative to a normal subgroup, and prime-field families without
acyclic matchings.  Linear side: matched bases, strong matchings, and
scaling certificates for subspaces of Laurent and structure-constant
algebras over the rationals.  All arithmetic is exact.
"""

from .groups import (CyclicGroup, FreeAbelianGroup, Group, GroupTooLargeError,
                     GroupValidationError, Homomorphism, InfiniteClosureError,
                     ProductGroup, Subgroup, TableGroup, WindowOverflowError,
                     coset, enumerate_subgroups, generated_subgroup,
                     group_from_json)
from .matching import (AcyclicSearch, Matching, MatchingEnumeration,
                       MatchingExistsError, MultiplicityFunction,
                       PairValidationError, SizeCapError, SubsetPair,
                       compatibility_graph, enumerate_matchings,
                       find_acyclic_matching, find_matching, hall_violator,
                       is_acyclic)
from .criteria import (CosetWitness, Prop14Witness, counterexample_pair,
                       is_coset_free, prop_1_4_condition)
from .relative import (MultiplicityMismatchError, RelativeMatching,
                       TupleOfElements, find_relative_matching,
                       lift_support_matching, push_forward,
                       relative_hall_violator, verify_hom_transfer)
from .primes import (PrimePreconditionError, PrimeVerdict, ScanRecord,
                     ScanReport, acyclic_property_scan, check_prop_2_2,
                     check_prop_2_3, family_table, is_prime, lemma_2_1_audit,
                     multiplicative_order, quadratic_residues,
                     two_power_subset)
from .algebra import (AlgebraElement, Ambient, AmbientError, LaurentAmbient,
                      NotInvertibleError, StructureConstantAmbient, Subspace,
                      ambient_from_json, divide, echelonize, element_from_dense,
                      intersect, invert, minkowski_span, random_subspace,
                      subspace_from_json, subspace_sum)
from .linear import (DichotomyVerdict, InvariantViolationError,
                     LinearAcyclicResult, LinearIso, MatchBasisInconclusiveError,
                     MatchBasisResult, OrderedBasis, ProductWitness,
                     StrongMatchingReport, StrongMatchingRequiredError,
                     TranslateWitness, UnityInTargetError, contains_translate,
                     find_acyclic_linear_matching, find_scaling, is_equivalent,
                     is_matched_basis, lemma_4_3_check, linear_hall_violator,
                     match_basis, members_with_products_in, random_ordered_basis,
                     strong_matching_exists, strong_matching_report,
                     violating_basis_pair)

__version__ = "0.1.0"
