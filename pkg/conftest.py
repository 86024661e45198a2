import os
import sys

# src layout: make the package importable when running pytest straight from
# a checkout, without an install
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))
