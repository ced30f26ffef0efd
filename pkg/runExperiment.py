#!/usr/bin/env python

"""
runExperiment:
Learn a continuous or discrete Lagrangian of a dynamical system from motion data with a Gaussian field
and evaluate it: posterior variance over phase-space slices, learned trajectories, convergence in the
number of samples, and fill distances of the sample sets.

Parameters
----------
    command: one of train, uq-grid, trajectory, convergence, fill-distance, observe
    --config: path to configuration file.
    --set: section.key=value override, may be repeated.
Returns
-------
    None: the script writes data to disk and exits with 0 (success), 2 (configuration error)
    or 3 (numerical failure).

"""

import sys

from LagrangianGP.cli_module import main


if __name__ == '__main__':
    sys.exit(main())
