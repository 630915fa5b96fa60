from heistorsor.cli import main
import sys

sys.exit(main())
