"""
Experiment Runner

Usage:
    python scripts/tiletree.py all --config configs/tiny.json --out runs/tiny
"""
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
