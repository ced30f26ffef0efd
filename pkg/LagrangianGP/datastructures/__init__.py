from .phase_point import MultiIndex, PhasePoint, JetPoint, SnapshotTriple
from .functional import Functional, LagrangianKind, MomentumVariant
from .gram_system import ConstraintSet, GramSystem
from .reports import ObservableReport, SymplecticMatrix, NewtonConfig, Trajectory
from .analytic_lagrangian import AnalyticLagrangian
