"""Numerical verification of Kähler-surface identities: Levi forms, the dJd
calculus, integration-by-parts energy identities and the Taub-NUT ambiKähler
example."""

import jax

# every computation in this package is double precision
jax.config.update("jax_enable_x64", True)

__version__ = "0.1.0"
