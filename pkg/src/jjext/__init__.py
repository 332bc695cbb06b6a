"""Exact computations with Jacobi-Jordan algebras and their extensions."""

from .algebra import (CommAssocAlgebra, JJAlgebra, abelian, adjoint_action, current_algebra, dual_action,
                      heisenberg3, is_antiderivation, is_isomorphic, is_left_module, is_morphism,
                      is_right_module, nilpotent_plane, verify_jj, zero_algebra)
from .classify import (FlagDatum, FlagWitness, H2Result, RecursiveResult, check_flag_datum,
                       check_flag_equivalence, classify_h2_codim1, compose_witnesses,
                       enumerate_flag_data, find_flag_witness, flag_extension, flag_to_datum,
                       invert_witness, recursive_classify, transport_flag)
from .errors import BudgetExceeded, ConditionFailed, DimensionMismatch, InputError, JJError
from .extend import (ExtendingDatum, are_equivalent, canonical_datum, check_extending,
                     check_morphism_pair, transport_datum, unified_product)
from .galois import (GaloisGroup, GaloisPair, GroupAction, artin_reconstruct, check_galois_pair,
                     enumerate_galois_group, hilbert_kernel_check, invariants_and_trace)
from .io import load, save
from .linalg import GF, QQ, BilinearMap, Field, LinearMap, enumerate_invertible, enumerate_vectors, solve_linear
from .products import (CrossedSystem, MatchedPair, SkewCrossedSystem, SupersolvableDatum,
                       bicrossed_product, check_crossed_system, check_matched_pair, check_skew_crossed,
                       check_supersolvable_datum, crossed_product, factorize, is_supersolvable,
                       semidirect_product, skew_crossed_product, supersolvable_extension)
from .report import Report

__all__ = [name for name in dir() if not name.startswith("_")]
