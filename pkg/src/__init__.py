# rmatrix-lab - exact verification of the arithmetic universal R-matrix
