"""dynrx: exact fusion and exchange matrices for quantum sl2/gl_N, with
verification suites for the dynamical Yang-Baxter world they live in."""

__version__ = "0.1.0"
