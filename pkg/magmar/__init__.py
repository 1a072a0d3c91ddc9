"""

The main routines of this package are:

* :func:`parse_model_string <magmar.model.parse_model_string>`
* :func:`simulate <magmar.model.simulate>`
* :func:`neg_log_likelihood <magmar.model.neg_log_likelihood>`
* :func:`fit <magmar.estimation.fit>`
* :func:`select <magmar.estimation.select>`
* :func:`pseudo_observations <magmar.data.pseudo_observations>`

Example import and usage:

>>> from magmar import load_csv, growth_rates, pseudo_observations, \\
...                    fit, simulate
>>>
>>> raw = load_csv('cpi.csv')
>>> u, marginal = pseudo_observations(growth_rates(raw))
>>> result = fit('MAGMAR(4,1)-ging-t', u)
>>> result.aic, result.bic
>>>
>>> path, innovations = simulate(result.spec, 1000, seed=1)
"""

from magmar.model import (parse_model_string, format_model_string, simulate,
                          recover_innovations, neg_log_likelihood,
                          conditional_density, MagmarSpec, PseudoSeries)
from magmar.copula import CopulaSpec
from magmar.estimation import fit, select, information_criteria
from magmar.data import (load_csv, growth_rates, pseudo_observations,
                         back_transform, diagnostics)
