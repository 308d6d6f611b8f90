import sys

from two_photon_cqed.cli import main

sys.exit(main())
