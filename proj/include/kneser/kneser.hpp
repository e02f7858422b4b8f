#pragma once

#include "kneser/defect.hpp"
#include "kneser/errors.hpp"
#include "kneser/family.hpp"
#include "kneser/hypergraph.hpp"
#include "kneser/json_io.hpp"
#include "kneser/subset.hpp"
#include "kneser/tucker.hpp"
#include "kneser/util.hpp"
#include "kneser/verify.hpp"
#include "kneser/zp_tucker.hpp"
