#pragma once

#include "pim/errors.hpp"
#include "pim/matrix.hpp"
#include "pim/model.hpp"
#include "pim/modelfile.hpp"
#include "pim/rational.hpp"
#include "pim/ratlin.hpp"
#include "pim/reduce.hpp"
#include "pim/report.hpp"
