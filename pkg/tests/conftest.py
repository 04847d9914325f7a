import os

# Single-threaded BLAS: the matrices here are small enough that threaded
# kernels lose badly to their own synchronization overhead, and the timing
# acceptance check needs stable per-call costs. Must run before numpy loads.
for _var in (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
):
    os.environ.setdefault(_var, "1")
