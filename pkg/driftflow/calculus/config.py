# input symmetry tolerance of eig_sym, relative to max(1, max|H|)
SYMMETRY_TOL = 1e-8
# eigenvector matrices with a larger condition number count as defective
DEFECTIVE_COND = 1e10
# default central-difference step
FD_EPS = 1e-5
# leading eigenpairs come from Lanczos on Hessian-vector products above this dimension
LANCZOS_MIN_DIM = 64
# relative accuracy requested from the Lanczos solver
LANCZOS_TOL = 1e-10
