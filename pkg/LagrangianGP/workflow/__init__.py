name = "workflow"

from .runExperiment import (run_experiment, cmd_train, cmd_uq_grid, cmd_trajectory, cmd_convergence,
                            cmd_filldistance, cmd_observe, train_model, generate_observations, COMMANDS)
from .gridProcess import (slice_points, uq_grid_frame, trajectory_diagnostics, convergence_table,
                          fill_distance_table)
