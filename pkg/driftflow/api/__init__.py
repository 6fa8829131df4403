import driftflow.calculus as calculus
import driftflow.cli as cli
import driftflow.flows as flows
import driftflow.games as games
import driftflow.measures as measures
import driftflow.optimizers as optimizers
import driftflow.problems as problems
import driftflow.stability as stability
