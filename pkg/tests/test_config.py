#
# (c) 2026, pyCMono contributors
#
# Created: 19.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
import dataclasses

import pytest

from cmono.config import Settings


class TestSettings:

    def test_defaults(self):
        s = Settings.from_env({})
        assert s == Settings()
        assert s.series_order == 8
        assert s.threads == 1

    def test_environment(self):
        s = Settings.from_env({'CMONO_THREADS': '4', 'CMONO_DEGREE_CAP': '64', 'CMONO_ORDER': '10'})
        assert (s.threads, s.degree_cap, s.series_order) == (4, 64, 10)

    def test_order_is_capped(self):
        assert Settings.from_env({'CMONO_ORDER': '20'}).series_order == 12

    @pytest.mark.parametrize('value', ['four', '0', '-2', ''])
    def test_malformed_values_are_ignored(self, value):
        assert Settings.from_env({'CMONO_THREADS': value}).threads == 1

    def test_frozen(self):
        with pytest.raises(dataclasses.FrozenInstanceError):
            Settings().threads = 2
