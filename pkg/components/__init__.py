# Presentation layer for the rho command line.
