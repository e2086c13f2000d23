"""Services package for exact computations and reports."""
