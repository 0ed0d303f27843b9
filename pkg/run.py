import sys

from qbattery.cli import main

if __name__ == "__main__":
    sys.exit(main())
