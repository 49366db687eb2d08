#pragma once

#include "lrmc/completability.hpp"
#include "lrmc/field.hpp"
#include "lrmc/linalg.hpp"
#include "lrmc/numerics.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/plucker.hpp"
#include "lrmc/report.hpp"
#include "lrmc/slmf.hpp"
#include "lrmc/slmf_types.hpp"
#include "lrmc/subsets.hpp"
