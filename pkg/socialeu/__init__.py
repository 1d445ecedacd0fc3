"""
socialeu - social preferences and expected utility in two-player games

Responsibilities:
- Games in mixed extension and expected material payoffs
- Utility functionals: expected-utility tables, social functionals, compositions
- Bilinearity / expected-utility checks with witness search
- Counterbalancing construction and the decomposition theorem
- Positive affine transformation checks
- CLI (python -m socialeu) and JSON HTTP service (run.py)
"""
