#pragma once

#include "qmim/analysis.hpp"
#include "qmim/classical.hpp"
#include "qmim/errors.hpp"
#include "qmim/genuine.hpp"
#include "qmim/infotheory.hpp"
#include "qmim/mim.hpp"
#include "qmim/search.hpp"
#include "qmim/state_io.hpp"
#include "qmim/states.hpp"
#include "qmim/tolerances.hpp"
#include "qmim/version.hpp"
