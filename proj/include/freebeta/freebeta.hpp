#pragma once

#include "analysis.hpp"
#include "distributions.hpp"
#include "error.hpp"
#include "fock.hpp"
#include "linalg.hpp"
#include "motzkin.hpp"
#include "ncl.hpp"
#include "parallel.hpp"
#include "randmat.hpp"
#include "rational.hpp"
#include "sequences.hpp"
#include "series.hpp"
#include "transforms.hpp"
#include "verify.hpp"
