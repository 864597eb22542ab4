#pragma once

#include "ucentropy/distribution.hpp"
#include "ucentropy/distribution_io.hpp"
#include "ucentropy/errors.hpp"
#include "ucentropy/inequality_lab.hpp"
#include "ucentropy/kernel.hpp"
#include "ucentropy/report.hpp"
#include "ucentropy/sampling.hpp"
#include "ucentropy/setfamily.hpp"
#include "ucentropy/setfamily_io.hpp"
#include "ucentropy/suite.hpp"
