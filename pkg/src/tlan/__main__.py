# -*- coding: utf-8 -*-

import sys

from tlan.cli import main

sys.exit(main())
