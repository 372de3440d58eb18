#pragma once

#include "circlift/error.hpp"
#include "circlift/integer.hpp"
#include "circlift/finite_field.hpp"
#include "circlift/complex.hpp"
#include "circlift/chain.hpp"
#include "circlift/modular_linalg.hpp"
#include "circlift/integer_linalg.hpp"
#include "circlift/persistence.hpp"
#include "circlift/lifting.hpp"
#include "circlift/winding.hpp"
#include "circlift/smoothing.hpp"
#include "circlift/experiments.hpp"
#include "circlift/pca.hpp"
#include "circlift/io.hpp"
#include "circlift/pipeline.hpp"
