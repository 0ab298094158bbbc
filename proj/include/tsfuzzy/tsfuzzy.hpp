// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_TSFUZZY_HPP
#define TSFUZZY_TSFUZZY_HPP

#include "clustering.hpp"
#include "common.hpp"
#include "dataio.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "pipeline.hpp"
#include "selection.hpp"

#endif // TSFUZZY_TSFUZZY_HPP
