#pragma once

#include "fqaoa/anneal.hpp"
#include "fqaoa/error.hpp"
#include "fqaoa/fraction.hpp"
#include "fqaoa/io.hpp"
#include "fqaoa/ising.hpp"
#include "fqaoa/lattice.hpp"
#include "fqaoa/parallel.hpp"
#include "fqaoa/qaoa.hpp"
#include "fqaoa/spam.hpp"
