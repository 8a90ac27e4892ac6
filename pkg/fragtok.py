# fragtok.py
# =================================
# CLI エントリポイント: python fragtok.py <train|dict|tokenize|hash|dataset|stats|analogues> ...
# ---------------------------------
import sys

from lib.cli import main

if __name__ == "__main__":
    sys.exit(main())
