#pragma once

#include "gdpam/assignment.hpp"
#include "gdpam/core.hpp"
#include "gdpam/csv_io.hpp"
#include "gdpam/grid.hpp"
#include "gdpam/hgb.hpp"
#include "gdpam/labeling.hpp"
#include "gdpam/merging.hpp"
#include "gdpam/oracle.hpp"
#include "gdpam/pipeline.hpp"
#include "gdpam/report.hpp"
#include "gdpam/urg.hpp"
