# File: lorec/__init__.py
# Low-rank plus sparse covariance estimation (LOREC): solver, baselines,
# tuning, simulation harness and the minimum-variance portfolio backtest.

__version__ = '1.0.0'
