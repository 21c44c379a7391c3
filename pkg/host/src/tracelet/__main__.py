import sys

from .launch import launch

sys.exit(launch(sys.argv[1:]))
