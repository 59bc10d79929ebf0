# -*- coding: utf-8 -*-
import sys

from mcar_system.main import main

sys.exit(main())
