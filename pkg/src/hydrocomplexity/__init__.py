"""Shannon entropy, disequilibrium and shape complexity of D-dimensional hydrogenic states."""

__version__ = "0.1.0"
