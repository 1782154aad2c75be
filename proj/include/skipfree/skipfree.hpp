#pragma once

#include "skipfree/chain.hpp"
#include "skipfree/chain_io.hpp"
#include "skipfree/charpoly.hpp"
#include "skipfree/errors.hpp"
#include "skipfree/hitting_law.hpp"
#include "skipfree/oracle.hpp"
#include "skipfree/polynomial.hpp"
#include "skipfree/random.hpp"
#include "skipfree/roots.hpp"
#include "skipfree/spectral.hpp"
#include "skipfree/table.hpp"
#include "skipfree/verify.hpp"
