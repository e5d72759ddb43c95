#pragma once

#include "chain_model.hpp"
#include "closed_form.hpp"
#include "correlation.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "renyi_kernel.hpp"
#include "special_functions.hpp"
#include "symbol_analysis.hpp"
