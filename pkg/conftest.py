# conftest.py

import sys
from pathlib import Path

# Permite importar src.deadcore_app a partir da raiz do repositório
ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
