#
# (c) 2026, pyCMono contributors
#
# Created: 02.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
"""
Conditionally monotone (c-monotone) probability: convolutions of pairs of distributions, their cumulants, the
mixed moments of the c-monotone product, convolution semigroups, and limit theorems.
```
from cmono import AtomicMeasure, moments_of, cmonotone_cumulants
bernoulli = AtomicMeasure([(-1, '1/2'), (1, '1/2')])
cmonotone_cumulants(moments_of(bernoulli, 4), moments_of(AtomicMeasure.delta(0), 4))
```
"""
from .errors import CMonoError, ValidationError, NumericalError
from .config import Settings, settings
from .measures import (AtomicMeasure, Arcsine, Kesten, MonotonePoisson, Cauchy, MomentSeq, kesten_from_sigma_r,
                       moments_of, dilate, parse_measure, dump_measure)
from .analytic_compiler import AnalyticMap
from .transforms import RationalMap, h_of_atomic, measure_from_h, named_h, stieltjes_density, locate_atoms
from .cumulants import (CumulantSeq, cmonotone_cumulants, monotone_cumulants, boolean_cumulants,
                        free_and_cfree_cumulants, moments_from_cmonotone, moments_from_cfree)
from .pair_convolutions import (MeasurePair, Vtua, Xi, monotone_convolve, boolean_convolve, orthogonal_convolve,
                                deformed_convolve, cmonotone_convolve, cfree_convolve, parse_transform)
from .mixed_moments import AlgebraSpec, Word, eval_pair
from .semigroups import PickField, integrate_flow, verify_semigroup_law, is_infinitely_divisible, nth_root
from .limits import clt_iterate, poisson_iterate, limit_law_moments, limit_law_density

__version__ = '0.1.0'
