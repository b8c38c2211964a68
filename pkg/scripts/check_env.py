"""Quick environment checker for required Python packages.

Run: python3 scripts/check_env.py
It will print which packages are importable and which are missing.
"""
reqs = ['pydantic', 'numpy', 'pytest']

missing = []
for pkg in reqs:
    try:
        mod = __import__(pkg)
        print(f'OK:   {pkg} {getattr(mod, "__version__", "")}')
    except Exception as e:
        print(f'MISS: {pkg} -> {e.__class__.__name__}: {e}')
        missing.append(pkg)

if missing:
    print('\nMissing packages detected. Install with:')
    print('  python -m pip install -r requirements.txt')
else:
    print('\nAll required packages appear installed.')

try:
    from cheqlab.app.services.settings import get_settings

    s = get_settings()
    print(f'\nCHEQLAB settings: point_budget={s.point_budget} search_budget={s.search_budget} '
          f'workers={s.workers} log_sink={s.log_sink}')
except Exception as e:
    print(f'\ncheqlab settings unavailable: {e.__class__.__name__}: {e}')
