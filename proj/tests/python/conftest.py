import os
import sys

# Under ctest the freshly built extension must win over any installed copy.
_pkg = os.environ.get("DIOPH_TEST_PYPKG")
if _pkg:
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__module__.startswith("_editable_skbc_")]
    sys.path.insert(0, _pkg)
