#pragma once

#include "delextra/combination.hpp"
#include "delextra/conll.hpp"
#include "delextra/decode.hpp"
#include "delextra/errors.hpp"
#include "delextra/eval.hpp"
#include "delextra/experiment.hpp"
#include "delextra/features.hpp"
#include "delextra/interpolation.hpp"
#include "delextra/model.hpp"
#include "delextra/parallel.hpp"
#include "delextra/parser.hpp"
#include "delextra/similarity.hpp"
#include "delextra/transform.hpp"
