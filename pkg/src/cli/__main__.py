# External imports
import sys

# Internal Imports
from src.cli.main import main


sys.exit(main())
