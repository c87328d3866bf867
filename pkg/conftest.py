import pathlib
import sys

# allow running the tests straight from a checkout, no install needed
sys.path.insert(0, str(pathlib.Path(__file__).parent / "src"))
