#
# (c) 2026, pyCMono contributors
#
# Created: 08.10.2026
# Updated: 08.10.2026
#
# License: Apache 2.0
#
from hypothesis import settings

settings.register_profile('cmono', deadline=None, max_examples=30)
settings.load_profile('cmono')
