#pragma once

// Umbrella header for the whole library.

#include "binary_psd.hpp"
#include "dense_matrix.hpp"
#include "eigensolve.hpp"
#include "entry_oracle.hpp"
#include "errors.hpp"
#include "expander.hpp"
#include "krylov_refine.hpp"
#include "linop.hpp"
#include "matrix_market.hpp"
#include "prng.hpp"
#include "psd_test.hpp"
#include "reference.hpp"
#include "sparse_sym.hpp"
#include "sparsifier.hpp"
