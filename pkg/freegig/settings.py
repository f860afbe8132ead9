STRICT = False

# combinatorics
NC_MAX_ORDER = 14

# support solver
SUPPORT_TOL = 1e-10
SUPPORT_MAX_ITER = 100

# quadrature
QUAD_MIN_NODES = 64
QUAD_MAX_NODES = 4096
QUAD_TOL = 1e-13
CDF_PANELS = 1024
CDF_PANEL_ORDER = 8
SAMPLER_TOL = 1e-10
MAX_MOMENT_ORDER = 32

# transforms
STIELTJES_EPSILONS = (1e-3, 1e-4, 1e-5)
STIELTJES_TOL = 1e-4
CONTINUATION_STEPS = 32
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
TAYLOR_POINTS = 128

# random matrices
CONDITION_LIMIT = 1e12
FREENESS_TOL = 0.02
KS_TOL = 0.05
