"""Extended 1-perfect codes of length 16 from doubled partitions, and their invariants."""

from .bitcode import Code, Subspace, Word, kernel, rank
from .partitions import ExtendedPartition, double, hamming8, linear_partition

__all__ = ["Code", "Subspace", "Word", "kernel", "rank", "ExtendedPartition", "double",
           "hamming8", "linear_partition"]
__version__ = "0.1.0"
