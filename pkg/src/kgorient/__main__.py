import sys

from kgorient.cli import main

sys.exit(main())
