#
# (c) 2026, pyCMono contributors
#
# Created: 16.10.2026
# Updated: 16.10.2026
#
# License: Apache 2.0
#
import sys

from .cli import main

sys.exit(main())
