import faulthandler
import sys

# Ativa o handler de falhas. Imprime o traceback
faulthandler.enable()

# Windows, exceções C++
try:
    import ctypes
    ctypes.windll.kernel32.SetErrorMode(0x0001 | 0x0002 | 0x8000)
except Exception:
    pass

from src.deadcore_app.cli import main

if __name__ == "__main__":
    sys.exit(main())
