"""Exact computation in finite and free nonassociative loops."""

__version__ = "0.1.0"

from .terms import (Gen, Node, Op, Term, TermSyntaxError, associator, commutator,  # noqa: E402
                    deviation, deviation_value, enumerate_alphas, eval_term,
                    parse_term, power, print_term)
from .loops import (CayleyLoop, IntegersLoop, LoopError, NormalSubloop,  # noqa: E402
                    bracket_NL, centre, check_axioms, load_loop, normal_closure,
                    quotient, subloop_closure)
from .catalog import catalog, catalog_names  # noqa: E402
from .series import (Filtration, ca_filtration, compare_series,  # noqa: E402
                     lower_central_series, naive_filtration)
from .graded import (check_akivis, graded_associator, graded_bracket,  # noqa: E402
                     graded_deviation, graded_group)
from .higman import (AbVector, HigmanElement, HigmanLoop, delta_eval,  # noqa: E402
                     higman_witness)
