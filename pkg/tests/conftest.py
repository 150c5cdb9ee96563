import os

# This must land before numpy first loads BLAS: oversubscribed thread pools
# slow the small-matrix solves in this suite by more than an order of
# magnitude, and single-threaded kernels keep results bit-reproducible.
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")
os.environ.setdefault("SSCGRAPH_NUM_THREADS", "1")
