"""Dry-run smoke test: imports, settings, and one tiny instance per construction."""

import sys

print(f"Python: {sys.version}")
print()

# ── Test imports ──────────────────────────────────────────────────────────
print("Testing imports...")
errors = []

try:
    from src.config import get_settings
    print("  config OK")
except Exception as e:
    print(f"  config FAIL: {e}")
    errors.append(("config", e))

try:
    from src.services.difference_sets import development, singer_difference_set
    print("  difference_sets OK")
except Exception as e:
    print(f"  difference_sets FAIL: {e}")
    errors.append(("difference_sets", e))

try:
    from src.models.mors import MorsParams
    from src.services.mors import verify_mors
    print("  mors OK")
except Exception as e:
    print(f"  mors FAIL: {e}")
    errors.append(("mors", e))

try:
    from src.services.counting import count_c4
    from src.services.oracle import min_c4_exhaustive
    print("  counting/oracle OK")
except Exception as e:
    print(f"  counting/oracle FAIL: {e}")
    errors.append(("oracle", e))

try:
    from src.main import create_parser
    print("  main OK")
except Exception as e:
    print(f"  main FAIL: {e}")
    errors.append(("main", e))

# ── Test config ───────────────────────────────────────────────────────────
print()
print("Settings:")
try:
    s = get_settings()
    print(f"  log_level:       {s.log_level}")
    print(f"  threads:         {s.threads}")
    print(f"  oracle_node_cap: {s.oracle_node_cap}")
    print(f"  exhaustive_cap:  {s.exhaustive_cap}")
except Exception as e:
    print(f"  Settings FAIL: {e}")
    errors.append(("settings", e))

# ── Tiny instances ────────────────────────────────────────────────────────
print()
print("Instances:")
try:
    fano = development(singer_difference_set(2))
    print(f"  Fano development: m={fano.m}, C4={count_c4(fano)}")
    report = verify_mors(MorsParams(q=5, k=2))
    print(f"  G(5,2): C4={report.c4}, pass={report.passed}")
    print(f"  oracle(3, 7): {min_c4_exhaustive(3, 7).minimum}")
    create_parser()
    print("  parser OK")
except Exception as e:
    print(f"  Instances FAIL: {e}")
    errors.append(("instances", e))

# ── Summary ───────────────────────────────────────────────────────────────
print()
if errors:
    print(f"FAILED: {len(errors)} error(s)")
    for name, err in errors:
        print(f"  {name}: {err}")
    sys.exit(1)
else:
    print("All checks passed!")
    sys.exit(0)
