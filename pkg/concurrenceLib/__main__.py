import sys

from .code.Cli import main

sys.exit(main())
