import os

# Keep BLAS/torch thread pools single-threaded: this box oversubscribes badly
# and single-thread keeps exports bit-reproducible.
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")
