# Repository root on sys.path so the flat modules import as top-level names in tests.
