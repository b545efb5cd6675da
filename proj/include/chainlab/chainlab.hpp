// include/chainlab/chainlab.hpp: everything except the MPFR-backed constant and the JSON codecs.

#pragma once

#include "chainlab/batch.hpp"
#include "chainlab/catalog.hpp"
#include "chainlab/chain.hpp"
#include "chainlab/classifier.hpp"
#include "chainlab/defect.hpp"
#include "chainlab/length_cache.hpp"
#include "chainlab/log_value.hpp"
#include "chainlab/natural.hpp"
#include "chainlab/ordinal.hpp"
#include "chainlab/search.hpp"
