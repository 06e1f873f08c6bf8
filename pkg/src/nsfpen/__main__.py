import sys

from nsfpen.cli import main

sys.exit(main())
