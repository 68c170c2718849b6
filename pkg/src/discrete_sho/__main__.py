import sys

from discrete_sho.cli import main

sys.exit(main())
