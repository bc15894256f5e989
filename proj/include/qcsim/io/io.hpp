#pragma once

#include "qcsim/io/compare.hpp"
#include "qcsim/io/plot.hpp"
#include "qcsim/io/run.hpp"
#include "qcsim/io/scenario.hpp"
#include "qcsim/io/snapshot.hpp"
#include "qcsim/io/table.hpp"
