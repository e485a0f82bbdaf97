#pragma once

// Single include point for the BLAS/LAPACK C interfaces.
#include <cblas.h>
#include <lapacke.h>
