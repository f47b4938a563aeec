"""Command-line front end for bohr_lab (the `bohr-lab` console script)."""
