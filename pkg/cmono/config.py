#
# (c) 2026, pyCMono contributors
#
# Created: 02.10.2026
# Updated: 16.10.2026
#
# License: Apache 2.0
#
"""
Process-wide defaults for orders, caps and tolerances.  Every function that uses one of these values also takes an
explicit override, so the global `settings` object only matters when nothing else is said.
"""
import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Settings:
    series_order: int = 8
    max_series_order: int = 12
    degree_cap: int = 256
    nc_cap: int = 12
    monotone_cap: int = 9
    lnc_cap: int = 8
    word_degree_cap: int = 12
    float_tol: float = 1e-8
    psd_tol: float = 1e-10
    flow_rtol: float = 1e-12
    flow_atol: float = 1e-14
    ladder_eps0: float = 1e-2
    ladder_steps: int = 7
    ladder_tol: float = 1e-6
    bisection_tol: float = 1e-12
    derivative_step: float = 1e-6
    branch_margin: float = 1e-14
    mp_dps: int = 40
    density_points: int = 400
    threads: int = 1

    @classmethod
    def from_env(cls, environ=None):
        """
        Build the settings from `CMONO_THREADS`, `CMONO_DEGREE_CAP`, and `CMONO_ORDER`.  Malformed values are
        ignored in favour of the defaults.
        """
        environ = os.environ if environ is None else environ
        values = {}
        for key, field in (('CMONO_THREADS', 'threads'),
                           ('CMONO_DEGREE_CAP', 'degree_cap'),
                           ('CMONO_ORDER', 'series_order')):
            try:
                value = int(environ[key])
            except (KeyError, ValueError):
                continue
            if value > 0:
                values[field] = value
        if values.get('series_order', 0) > cls.max_series_order:
            values['series_order'] = cls.max_series_order
        return cls(**values)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


settings = Settings.from_env()
